"""Complex hypercontractivity of the noise operator on the Hamming cube."""

__version__ = "0.1.0"
