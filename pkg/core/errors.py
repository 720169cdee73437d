"""Error types raised by the MOPUC library and mapped to CLI exit codes."""
from typing import Any, Dict, Optional


class MopucError(ValueError):
    """Base error carrying a machine-readable type code and numeric evidence."""

    error_type = "MOPUC_ERROR"
    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_detail(self) -> Dict[str, Any]:
        return {"message": self.message, "type": self.error_type, **self.details}


# measure
class InvalidArc(MopucError):
    error_type = "INVALID_ARC"


class OverlappingArcs(MopucError):
    error_type = "OVERLAPPING_ARCS"


class ForbiddenPointMass(MopucError):
    error_type = "FORBIDDEN_POINT_MASS"


class InvalidPointMass(MopucError):
    error_type = "INVALID_POINT_MASS"


class NegativeWeight(MopucError):
    error_type = "NEGATIVE_WEIGHT"


class InvalidModifierPoint(MopucError):
    error_type = "INVALID_MODIFIER_POINT"


class ArcOutsideBranch(MopucError):
    error_type = "ARC_OUTSIDE_BRANCH"


class EmptyFunctionSet(MopucError):
    error_type = "EMPTY_FUNCTION_SET"


# laurent
class ZeroArgument(MopucError):
    error_type = "ZERO_ARGUMENT"


class ZeroPolynomial(MopucError):
    error_type = "ZERO_POLYNOMIAL"


class ParityMismatch(MopucError):
    error_type = "PARITY_MISMATCH"


# moments / solver
class EmptyIndex(MopucError):
    error_type = "EMPTY_INDEX"


class NonNormal(MopucError):
    error_type = "NON_NORMAL"
    exit_code = 2

    def __init__(self, message: str, report: Any = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.report = report


# para
class NonUnimodularTau(MopucError):
    error_type = "NON_UNIMODULAR_TAU"


class NotTauInvariant(MopucError):
    error_type = "NOT_TAU_INVARIANT"


# zeros
class DegenerateLeading(MopucError):
    error_type = "DEGENERATE_LEADING"


class RootOnCircle(MopucError):
    error_type = "ROOT_ON_CIRCLE"


class TheoremViolated(MopucError):
    error_type = "THEOREM_VIOLATED"
    exit_code = 2

    def __init__(self, theorem: str, message: str, evidence: Optional[Dict[str, Any]] = None):
        super().__init__(f"{theorem}: {message}", {"theorem": theorem, "evidence": evidence or {}})
        self.theorem = theorem
        self.evidence = evidence or {}


# cli
class ConfigParse(MopucError):
    error_type = "CONFIG_PARSE"


class UnknownPreset(MopucError):
    error_type = "UNKNOWN_PRESET"


class IOFailure(MopucError):
    error_type = "IO_FAILURE"
