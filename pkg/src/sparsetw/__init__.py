"""Signed adjacency spectra of random regular graphs: exact identities and Monte Carlo."""

__version__ = "0.1.0"
