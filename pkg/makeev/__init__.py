"""
Makeev equipartition certification toolkit.
Exact GF(2) certificates for hyperplane equipartition bounds, bound
formulas, and numerical verification on discrete masses.
"""

__version__ = "1.0.0"
