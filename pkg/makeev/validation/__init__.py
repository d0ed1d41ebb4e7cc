"""Input file parsing and validation"""
