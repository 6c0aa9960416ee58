"""
Almost Representations
Exact construction and auditing of almost finite-dimensional representations of algebras
"""

__version__ = "1.0.0"
