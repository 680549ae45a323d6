"""Test package for the IBLT schemes library."""
