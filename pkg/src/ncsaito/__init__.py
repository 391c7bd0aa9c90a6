"""Noncommutative power series, superpotentials and Saito normal forms.

Exact rational computations in the complete free algebra k<<x_1..x_n>>
truncated modulo m^(N+1): cyclic derivatives, Jacobi algebras, the
Jordan-Chevalley decomposition of formal derivations, and weighted
homogeneous normal forms of quasi-homogeneous superpotentials.
"""

__version__ = "0.1.0"

from .cyclic import Superpotential, apply_derivation, canonicalize, cyclic_derivative, jacobi_generators, order
from .derive import Derivation, JCDecomposition, bracket, eigen_develop, graded_solve, jordan_chevalley
from .errors import NCSaitoError
from .expr import parse
from .jacobi import JacobiReport, TruncatedIdeal, class_in_HH0, finite_dim_certificate, ideal_span, is_quasi_homogeneous
from .ncseries import Endomorphism, Series, compose, gens, invert, substitute
from .saito import (
    NormalizationResult,
    WeightType,
    abelianize,
    canonical_type,
    euler_solve,
    is_weighted_homogeneous,
    normalize,
    semisimple_uniqueness_check,
    weights,
)

__all__ = [
    "Derivation",
    "Endomorphism",
    "JCDecomposition",
    "JacobiReport",
    "NCSaitoError",
    "NormalizationResult",
    "Series",
    "Superpotential",
    "TruncatedIdeal",
    "WeightType",
    "abelianize",
    "apply_derivation",
    "bracket",
    "canonical_type",
    "canonicalize",
    "class_in_HH0",
    "compose",
    "cyclic_derivative",
    "eigen_develop",
    "euler_solve",
    "finite_dim_certificate",
    "gens",
    "graded_solve",
    "ideal_span",
    "invert",
    "is_quasi_homogeneous",
    "is_weighted_homogeneous",
    "jacobi_generators",
    "jordan_chevalley",
    "normalize",
    "order",
    "parse",
    "semisimple_uniqueness_check",
    "substitute",
    "weights",
]
