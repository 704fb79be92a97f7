"""Exact prime-field tools for Hilbert functions of (2,3)-point configurations,
secant and tangential varieties of Veronese embeddings, and differential
Horace induction steps."""

__version__ = "0.1.0"
