import math
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from core.laurent import HalfLaurentPoly, MultiIndex
from core.para import ParaPoly, SymmetricReport
from core.solver import NormalityReport, SolveResult
from core.zeros import PhaseReport, TheoremCheck, ZeroReport


def pair(z: Optional[complex]) -> Optional[List[float]]:
    if z is None:
        return None
    z = complex(z)
    return [z.real, z.imag]


def finite(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def index_list(n: Optional[MultiIndex]) -> Optional[List[int]]:
    return list(n) if n is not None else None


class Term(BaseModel):
    exponent: float = Field(..., description="Exponent, possibly half-integer")
    re: float
    im: float


class PolynomialDoc(BaseModel):
    two_min: int = Field(..., description="Twice the lowest exponent")
    coeffs: List[List[float]] = Field(..., description="[re, im] of the coefficient of z^((two_min + 2i)/2)")
    terms: List[Term]

    @classmethod
    def from_poly(cls, p: HalfLaurentPoly) -> "PolynomialDoc":
        return cls(
            **p.to_dict(),
            terms=[
                Term(exponent=e / 2.0, re=c.real, im=c.imag)
                for e, c in zip(p.exponents2.tolist(), p.coeffs.tolist())
            ]
        )


class NormalityDoc(BaseModel):
    sigma_min: float
    sigma_max: float
    ratio: float
    verdict: str
    det_sign_available: bool
    det: Optional[List[float]] = None

    @classmethod
    def from_report(cls, report: NormalityReport) -> "NormalityDoc":
        return cls(
            sigma_min=report.sigma_min,
            sigma_max=report.sigma_max,
            ratio=report.ratio,
            verdict=report.verdict.value,
            det_sign_available=report.det_sign_available,
            det=pair(report.det),
        )


class SolveDocument(BaseModel):
    command: str
    system: str
    n: List[int]
    m: Optional[List[int]] = None
    polynomial: PolynomialDoc
    boundary: Optional[List[float]] = Field(None, description="kappa, alpha or beta coefficient")
    normality: NormalityDoc
    residuals: List[float]
    max_residual: float
    scale: float

    @classmethod
    def from_result(
        cls, command: str, system: str, result: SolveResult, n: MultiIndex, m: Optional[MultiIndex] = None
    ) -> "SolveDocument":
        return cls(
            command=command,
            system=system,
            n=list(n),
            m=index_list(m),
            polynomial=PolynomialDoc.from_poly(result.poly),
            boundary=pair(result.boundary),
            normality=NormalityDoc.from_report(result.report),
            residuals=list(result.residuals),
            max_residual=result.max_residual,
            scale=result.scale,
        )


class TrigTerm(BaseModel):
    frequency: float
    a: float
    b: float


class SymmetricDoc(BaseModel):
    t_gap: float = Field(..., description="Largest entry gap to T_n")
    normality: NormalityDoc

    @classmethod
    def from_report(cls, report: SymmetricReport) -> "SymmetricDoc":
        return cls(t_gap=report.t_gap, normality=NormalityDoc.from_report(report.report))


class ParaDocument(BaseModel):
    system: str
    n: List[int]
    tau: List[float]
    polynomial: PolynomialDoc
    trig: List[TrigTerm]
    residuals: List[float]
    trig_residuals: List[float]
    invariance_gap: float
    symmetric: SymmetricDoc

    @classmethod
    def build(
        cls,
        system: str,
        n: MultiIndex,
        p: ParaPoly,
        residuals: List[float],
        trig_residuals: List[float],
        symmetric: SymmetricReport,
    ) -> "ParaDocument":
        trig = [TrigTerm(frequency=k, a=a, b=b) for k, a, b in (p.trig.rows() if p.trig else [])]
        return cls(
            system=system,
            n=list(n),
            tau=pair(p.tau),
            polynomial=PolynomialDoc.from_poly(p.x),
            trig=trig,
            residuals=residuals,
            trig_residuals=trig_residuals,
            invariance_gap=p.invariance_gap(),
            symmetric=SymmetricDoc.from_report(symmetric),
        )


class ZeroSummary(BaseModel):
    degree: int
    on_circle: int
    n_inside: int
    n_outside: int
    per_arc: List[int]
    outside_union: List[List[float]]
    max_multiplicity: int
    min_pairwise_gap: Optional[float] = None

    @classmethod
    def from_report(cls, report: ZeroReport) -> "ZeroSummary":
        return cls(
            degree=report.degree,
            on_circle=len(report.on_circle),
            n_inside=report.n_inside,
            n_outside=report.n_outside,
            per_arc=list(report.per_arc),
            outside_union=[pair(z) for z in report.outside_union],
            max_multiplicity=max((mult for _, mult in report.clusters), default=0),
            min_pairwise_gap=finite(report.min_pairwise_gap),
        )


class PhaseSummary(BaseModel):
    winding: int
    winding_raw: float
    monotone: bool
    increasing: bool
    min_abs_derivative: float

    @classmethod
    def from_report(cls, report: PhaseReport) -> "PhaseSummary":
        return cls(
            winding=report.winding,
            winding_raw=report.winding_raw,
            monotone=report.monotone,
            increasing=report.increasing,
            min_abs_derivative=report.min_abs_derivative,
        )


class ZerosDocument(BaseModel):
    system: str
    n: List[int]
    phi_zeros: ZeroSummary
    phase: Optional[PhaseSummary] = None
    phase_error: Optional[str] = None
    para_zeros: Dict[str, ZeroSummary] = Field(default_factory=dict, description="Keyed by tau as 're,im'")


class CheckDocument(BaseModel):
    theorem: str
    passed: bool
    n: List[int]
    m: Optional[List[int]] = None
    tau: Optional[List[float]] = None
    failures: List[str]
    evidence: Dict[str, Any]
    inconclusive: bool = False

    @classmethod
    def from_check(cls, check: TheoremCheck) -> "CheckDocument":
        evidence = {
            k: finite(v) if isinstance(v, float) else v for k, v in check.evidence.items()
        }
        return cls(
            theorem=check.theorem,
            passed=check.passed,
            n=list(check.n),
            m=index_list(check.m),
            tau=pair(check.tau),
            failures=check.failures,
            evidence=evidence,
            inconclusive=check.inconclusive,
        )


class VerifyDocument(BaseModel):
    system: str
    max_index: int
    modes: List[str]
    passed: bool
    summary: Dict[str, Dict[str, int]]
    skipped: List[str]
    checks: List[CheckDocument]
    description: Dict[str, Any] = Field(default_factory=dict, description="System description, same shape as --system input")


class CounterexampleDocument(BaseModel):
    systems: List[str]
    max_index: int
    rows: int
    findings: List[Dict[str, Any]]


class ErrorDocument(BaseModel):
    detail: Dict[str, Any]
