"""Self-regulated ant swarms for tracking extrema of changing landscapes."""

__version__ = "0.1.0"
