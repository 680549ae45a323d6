"""IBLT schemes with worst-case listing guarantees."""

__version__ = "0.1.0"
