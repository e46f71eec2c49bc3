"""Van der Waals dispersion energy between two uniformly accelerated atoms."""

__version__ = "0.1.0"
