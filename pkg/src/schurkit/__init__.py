"""Power structure, Schur multipliers and exterior squares of finite p-groups."""

__version__ = "0.1.0"
