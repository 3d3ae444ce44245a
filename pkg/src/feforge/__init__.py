"""feforge: solving perturbed Cauchy-difference functional equations."""

__version__ = "0.1.0"
