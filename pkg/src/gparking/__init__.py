"""G-parking functions, spanning trees, monotone monomial ideals, their
deformations and resolutions, and the abelian sandpile model."""

__version__ = "0.1.0"
