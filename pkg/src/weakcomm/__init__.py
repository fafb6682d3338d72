"""Weak commutativity groups chi(G) and nu(G) of small finite groups."""

__version__ = "0.1.0"
