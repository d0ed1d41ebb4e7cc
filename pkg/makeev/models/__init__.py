"""Pydantic schemas for specs, files and reports"""
