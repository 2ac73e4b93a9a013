"""Stieltjes polynomials and Van Vleck zeros of the three-singularity Lame equation."""
from .core import DensePolynomial, LameSystem, canonical_rescale, load_system, mu, validate_system
from .errors import LameError
from .spectrum import VanVleckSpectrum, van_vleck_spectrum
from .zeros import StieltjesSolution, label_solutions, solve_label

__all__ = [
    "DensePolynomial", "LameError", "LameSystem", "StieltjesSolution", "VanVleckSpectrum",
    "canonical_rescale", "label_solutions", "load_system", "mu", "solve_label", "validate_system",
    "van_vleck_spectrum",
]
__version__ = "0.1.0"
