"""X-ranks on rational normal curves and genus-2 curves over exact fields."""

__version__ = "0.1.0"
