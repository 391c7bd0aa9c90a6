"""Exception hierarchy.

Every error carries a machine-readable ``code`` and the process exit status
the CLI uses when the error escapes a command.
"""

from __future__ import annotations


class NCSaitoError(Exception):
    code = "error"
    exit_status = 1


# -- input / configuration (exit 2) ---------------------------------------

class ConfigError(NCSaitoError):
    code = "config_error"
    exit_status = 2


class ParseError(NCSaitoError):
    code = "parse_error"
    exit_status = 2

    def __init__(self, message: str, offset: int = 0, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.offset = offset
        self.expected = tuple(expected)


class UnknownVariable(ParseError):
    code = "unknown_variable"


class TruncMismatch(NCSaitoError):
    code = "trunc_mismatch"
    exit_status = 2


class ZeroPotential(NCSaitoError):
    code = "zero_potential"
    exit_status = 2


# -- violated mathematical hypotheses (exit 3) ------------------------------

class HypothesisError(NCSaitoError):
    exit_status = 3


class NonRationalSpectrum(HypothesisError):
    code = "non_rational_spectrum"


class NotAutomorphism(HypothesisError):
    code = "not_automorphism"


class NotCertifiedFinite(HypothesisError):
    code = "not_certified_finite"


class NotQuasiHomogeneous(HypothesisError):
    code = "not_quasi_homogeneous"


class WeightOutOfRange(HypothesisError):
    code = "weight_out_of_range"


class NotDiagonal(HypothesisError):
    code = "not_diagonal"


class NotPrinciple(HypothesisError):
    code = "not_principle"


class NotCommuting(HypothesisError):
    code = "not_commuting"


class NotSemisimple(HypothesisError):
    code = "not_semisimple"


class OrderTooLow(HypothesisError):
    code = "order_too_low"


class NotEulerField(HypothesisError):
    """A derivation expected to satisfy Phi_#(xi) = Phi does not."""

    code = "not_euler_field"


# -- resources (exit 4) ----------------------------------------------------

class LevelTooLarge(NCSaitoError):
    code = "level_too_large"
    exit_status = 4


# -- internal ---------------------------------------------------------------

class Inconsistent(NCSaitoError):
    """Linear system has no solution."""

    code = "inconsistent"


class UniquenessViolated(NCSaitoError):
    """Two Euler fields that should coincide do not; indicates a bug."""

    code = "uniqueness_violated"
