"""Output-sensitive approximate hyperedge counting with detection oracles."""

__version__ = "0.1.0"
