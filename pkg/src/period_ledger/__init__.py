"""Exact period bookkeeping for motives twisted by RM(chi)."""

__version__ = "0.1.0"
