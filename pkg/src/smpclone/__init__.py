"""Code clone detection by stable matching of method metric vectors."""

__version__ = "0.1.0"
