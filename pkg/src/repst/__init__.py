"""Exact diagram calculus for Deligne's category Rep(S_t) and its simple commutative algebras."""

__version__ = "0.1.0"
