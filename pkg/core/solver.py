"""Monic solves for phi_n, phi_n^#, Phi_{n,m} and Phi*_{n,m} with normality reports."""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from core.errors import NonNormal
from core.laurent import TWO_PI, HalfLaurentPoly, MultiIndex
from core.measure import MeasureSystem, Weight, modify_system
from core.moments import (
    MomentCache,
    MomentMatrix,
    build_HP,
    build_HP_star,
    build_T,
    cache_for,
    integrate,
)

logger = logging.getLogger(__name__)

NORMAL_RATIO = 1e-10
NON_NORMAL_RATIO = 1e-13
REFINEMENT_STEPS = 3


class Verdict(str, Enum):
    NORMAL = "normal"
    NON_NORMAL = "non_normal"
    BORDERLINE = "borderline"


def classify(ratio: float) -> Verdict:
    if ratio > NORMAL_RATIO:
        return Verdict.NORMAL
    if ratio < NON_NORMAL_RATIO:
        return Verdict.NON_NORMAL
    return Verdict.BORDERLINE


@dataclass(frozen=True)
class NormalityReport:
    sigma_min: float
    sigma_max: float
    ratio: float
    verdict: Verdict
    det_sign_available: bool
    det: Optional[complex] = None

    @classmethod
    def trivial(cls) -> "NormalityReport":
        """The empty index: normal by the convention det T_0 = 1."""
        return cls(1.0, 1.0, 1.0, Verdict.NORMAL, True, 1.0 + 0j)

    @classmethod
    def from_matrix(cls, entries: np.ndarray) -> "NormalityReport":
        sigma = linalg.svdvals(entries)
        sigma_max = float(sigma[0])
        sigma_min = float(sigma[-1])
        ratio = sigma_min / sigma_max if sigma_max > 0 else 0.0
        det = complex(linalg.det(entries))
        # a sign is only meaningful when the determinant is real
        det_real = abs(det.imag) <= 1e-12 * max(abs(det), np.finfo(float).tiny)
        return cls(sigma_min, sigma_max, ratio, classify(ratio), bool(det_real), det)

    @property
    def is_normal(self) -> bool:
        return self.verdict == Verdict.NORMAL


@dataclass(frozen=True)
class SolveResult:
    poly: HalfLaurentPoly
    report: NormalityReport
    residuals: Tuple[float, ...] = ()
    scale: float = 1.0
    boundary: Optional[complex] = None

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


@dataclass(frozen=True)
class ScanEntry:
    n: MultiIndex
    m: Optional[MultiIndex]
    report: NormalityReport


@dataclass(frozen=True)
class ChristoffelEntry:
    modifier: Weight
    report: NormalityReport


def orthogonality_residuals(
    system: MeasureSystem, poly: HalfLaurentPoly, rows: Sequence[Tuple[int, int]]
) -> List[float]:
    """``|int poly(z) z^{s} d mu_j|`` for every row ``(j, 2s)``, by direct quadrature."""
    span = max(abs(poly.two_min), abs(poly.two_max)) if not poly.is_zero else 0
    residuals = []
    for j, two_s in rows:
        value = integrate(
            system,
            j,
            lambda theta, two_s=two_s: poly.evaluate_on_circle(theta) * np.exp(0.5j * two_s * theta),
            (span + abs(two_s)) / 2.0,
        )
        residuals.append(abs(value))
    return residuals


def _solve_monic(matrix: MomentMatrix) -> np.ndarray:
    a = matrix.entries
    b = -matrix.monic
    lu = linalg.lu_factor(a)
    x = linalg.lu_solve(lu, b)
    # mixed-precision refinement: residuals in extended precision, corrections in double
    a_ext = a.astype(np.clongdouble)
    b_ext = b.astype(np.clongdouble)
    for _ in range(REFINEMENT_STEPS):
        residual = b_ext - a_ext @ x.astype(np.clongdouble)
        x = x + linalg.lu_solve(lu, residual.astype(complex))
    return x


def _solve_window(system: MeasureSystem, matrix: MomentMatrix, label: str) -> Tuple[HalfLaurentPoly, NormalityReport]:
    report = NormalityReport.from_matrix(matrix.entries)
    logger.debug(
        f"{label}: size {matrix.size}, sigma ratio {report.ratio:.3e}, verdict {report.verdict.value}"
    )
    if report.verdict == Verdict.NON_NORMAL:
        raise NonNormal(
            f"{label} is not normal (sigma_min/sigma_max = {report.ratio:.3e})",
            report,
            {"sigma_min": report.sigma_min, "sigma_max": report.sigma_max, "ratio": report.ratio},
        )
    if report.verdict == Verdict.BORDERLINE:
        logger.warning(f"{label} is numerically borderline (ratio {report.ratio:.3e}); solving anyway")
    x = _solve_monic(matrix)
    terms = dict(zip(matrix.cols, x))
    terms[matrix.monic_exponent] = 1.0
    return HalfLaurentPoly.from_exponents(terms), report


def solve_phi(system: MeasureSystem, n: MultiIndex, cache: Optional[MomentCache] = None) -> SolveResult:
    """Monic ``phi_n = z^{|n|/2} + ... + kappa_{-|n|/2} z^{-|n|/2}``."""
    if n.size == 0:
        return SolveResult(HalfLaurentPoly.monomial(0), NormalityReport.trivial())
    matrix = build_T(system, n, cache)
    poly, report = _solve_window(system, matrix, f"phi_n, n=({n})")
    residuals = orthogonality_residuals(system, poly, matrix.rows)
    return SolveResult(poly, report, tuple(residuals), matrix.scale, poly.coefficient(-n.size))


def solve_phi_sharp(system: MeasureSystem, n: MultiIndex, cache: Optional[MomentCache] = None) -> SolveResult:
    """``phi_n^#``, normalised to coefficient 1 at ``z^{-|n|/2}``."""
    base = solve_phi(system, n, cache)
    poly = base.poly.sharp()
    # orthogonality window p = -n_j/2 + 1, ..., n_j/2
    rows = [(j, n_j - 2 - 2 * i) for j, n_j in enumerate(n) for i in range(n_j)]
    residuals = orthogonality_residuals(system, poly, rows)
    return SolveResult(poly, base.report, tuple(residuals), base.scale, poly.coefficient(n.size))


def solve_hp(
    system: MeasureSystem, n: MultiIndex, m: MultiIndex, cache: Optional[MomentCache] = None
) -> SolveResult:
    """``Phi_{n,m} = z^{|n|} + ... + alpha_{n,m} z^{-|m|}``; ``boundary`` holds alpha."""
    if n.size + m.size == 0:
        return SolveResult(HalfLaurentPoly.monomial(0), NormalityReport.trivial(), boundary=1.0 + 0j)
    matrix = build_HP(system, n, m, cache)
    poly, report = _solve_window(system, matrix, f"Phi_(n,m), n=({n}), m=({m})")
    residuals = orthogonality_residuals(system, poly, matrix.rows)
    return SolveResult(poly, report, tuple(residuals), matrix.scale, poly.coefficient(-2 * m.size))


def solve_hp_star(
    system: MeasureSystem, n: MultiIndex, m: MultiIndex, cache: Optional[MomentCache] = None
) -> SolveResult:
    """``Phi*_{n,m} = beta_{n,m} z^{|n|} + ... + z^{-|m|}``; ``boundary`` holds beta."""
    if n.size + m.size == 0:
        return SolveResult(HalfLaurentPoly.monomial(0), NormalityReport.trivial(), boundary=1.0 + 0j)
    matrix = build_HP_star(system, n, m, cache)
    poly, report = _solve_window(system, matrix, f"Phi*_(n,m), n=({n}), m=({m})")
    residuals = orthogonality_residuals(system, poly, matrix.rows)
    return SolveResult(poly, report, tuple(residuals), matrix.scale, poly.coefficient(2 * n.size))


def solve_classical(system: MeasureSystem, n: MultiIndex, cache: Optional[MomentCache] = None) -> SolveResult:
    """Type II polynomial ``Phi_n = Phi_{n,0}`` of ordinary degree ``|n|``."""
    return solve_hp(system, n, MultiIndex.zeros(len(n)), cache)


def sharp_star_gap(system: MeasureSystem, n: MultiIndex, m: MultiIndex, cache: Optional[MomentCache] = None) -> float:
    """Largest coefficient gap between ``Phi_{n,m}^#`` and ``Phi*_{m,n}``."""
    left = solve_hp(system, n, m, cache).poly.sharp()
    right = solve_hp_star(system, m, n, cache).poly
    return (left - right).max_abs()


def phi_report(system: MeasureSystem, n: MultiIndex, cache: Optional[MomentCache] = None) -> NormalityReport:
    if n.size == 0:
        return NormalityReport.trivial()
    return NormalityReport.from_matrix(build_T(system, n, cache).entries)


def hp_report(
    system: MeasureSystem, n: MultiIndex, m: MultiIndex, cache: Optional[MomentCache] = None
) -> NormalityReport:
    if n.size + m.size == 0:
        return NormalityReport.trivial()
    return NormalityReport.from_matrix(build_HP(system, n, m, cache).entries)


SCAN_MODES = ("phi", "hp_diag", "hp_offdiag")


def scan_pairs(system: MeasureSystem, max_index: int, mode: str) -> List[Tuple[MultiIndex, Optional[MultiIndex]]]:
    """The ``(n, m)`` pairs a normality scan visits; ``m`` is None in phi mode."""
    if mode not in SCAN_MODES:
        raise ValueError(f"Unknown scan mode '{mode}', expected one of {SCAN_MODES}")
    if max_index < 0:
        raise ValueError("max_index must be >= 0")
    pairs: List[Tuple[MultiIndex, Optional[MultiIndex]]] = []
    for n in MultiIndex.grid(system.r, max_index):
        if mode == "phi":
            pairs.append((n, None))
        elif mode == "hp_diag":
            pairs.append((n, n))
        else:
            for j in range(system.r):
                pairs.append((n, n.increment(j)))
                pairs.append((n.increment(j), n))
    return pairs


def scan_entry(system: MeasureSystem, n: MultiIndex, m: Optional[MultiIndex]) -> ScanEntry:
    cache = cache_for(system)
    report = phi_report(system, n, cache) if m is None else hp_report(system, n, m, cache)
    return ScanEntry(n, m, report)


def normality_scan(system: MeasureSystem, max_index: int, mode: str = "phi") -> List[ScanEntry]:
    """Normality reports over ``{0..max_index}^r``; non-normal verdicts are collected, not raised."""
    entries = [scan_entry(system, n, m) for n, m in scan_pairs(system, max_index, mode)]
    failing = sum(1 for e in entries if not e.report.is_normal)
    logger.info(f"Normality scan ({mode}) on {system.name or 'system'}: {len(entries)} entries, {failing} not normal")
    return entries


def christoffel_parameters(system: MeasureSystem, count: int = 8) -> Tuple[List[complex], List[float], List[Tuple[float, float]]]:
    """Default z0's, phi's and outside-arc phi pairs for :func:`christoffel_scan`."""
    z0s = [0.5 * np.exp(1j * (system.t0 + 1.0)), 2.0 * np.exp(1j * (system.t0 + 2.5)), -0.3 + 0j]
    grid = system.t0 + TWO_PI * (np.arange(count) + 0.5) / count
    phis = [float(p) for p in grid]
    outside = [
        float(p)
        for p in system.t0 + TWO_PI * (np.arange(4 * count) + 0.5) / (4 * count)
        if not any(arc.interior_contains(p) for arc in system.arcs)
    ]
    pairs = []
    if len(outside) >= 2:
        pairs = [(outside[0], outside[-1]), (outside[0], outside[len(outside) // 2])]
    return [complex(z) for z in z0s], phis, pairs


def christoffel_scan(
    system: MeasureSystem,
    n: MultiIndex,
    z0s: Sequence[complex],
    phis: Sequence[float],
    phi_pairs: Sequence[Tuple[float, float]] = (),
) -> List[ChristoffelEntry]:
    """phi-normality of ``n`` for the Christoffel-modified systems behind the zero theorems."""
    modifiers = [Weight.christoffel_point(z0) for z0 in z0s]
    modifiers += [Weight.christoffel_sin2(p) for p in phis]
    modifiers += [Weight.christoffel_sinprod(p1, p2) for p1, p2 in phi_pairs if p1 != p2]
    entries = []
    for modifier in modifiers:
        modified = modify_system(system, modifier)
        entries.append(ChristoffelEntry(modifier, phi_report(modified, n)))
    return entries
