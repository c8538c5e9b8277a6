"""Behavioral analytics over Reddit-style post/comment dumps."""

__version__ = "0.1.0"

__all__ = ["__version__"]
