"""Certification, bounds, Fourier checks, solver and export services"""
