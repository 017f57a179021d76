"""SLOCC classification of four-qubit states from invariants and covariants."""
__version__ = "0.1.0"
