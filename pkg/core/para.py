"""Multiple paraorthogonal polynomials ``X = z^{1/2} L + tau z^{-1/2} L^#``."""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from core.errors import NonUnimodularTau, NotTauInvariant
from core.laurent import TWO_PI, Branch, HalfLaurentPoly, MultiIndex
from core.measure import MeasureSystem
from core.moments import MomentMatrix, assemble, build_T, cache_for, integrate
from core.solver import NormalityReport, orthogonality_residuals

logger = logging.getLogger(__name__)

TAU_TOL = 1e-14
INVARIANCE_TOL = 1e-12


@dataclass(frozen=True)
class TrigForm:
    """``T(theta) = sum_k a_k cos(k theta) + b_k sin(k theta)`` over ``frequencies``."""

    frequencies: Tuple[float, ...]
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    imaginary_residue: float = 0.0

    @property
    def leading(self) -> Tuple[float, float]:
        return self.a[-1], self.b[-1]

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.asarray(self.frequencies)[:, None]
        flat = theta.ravel()[None, :]
        value = np.asarray(self.a) @ np.cos(k * flat) + np.asarray(self.b) @ np.sin(k * flat)
        value = value.reshape(theta.shape)
        return float(value) if np.ndim(value) == 0 else value

    def rows(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.frequencies, self.a, self.b))


@dataclass(frozen=True)
class ParaPoly:
    x: HalfLaurentPoly
    tau: complex
    trig: Optional[TrigForm] = None

    @property
    def degree(self) -> int:
        """Number of zeros of ``z^{N/2} X``."""
        return self.x.degree

    def invariance_gap(self) -> float:
        """``max_k |c_k - tau conj(c_{-k})|``"""
        span = max(self.x.two_max, -self.x.two_min)
        c = self.x.dense(-span, span)
        return float(np.max(np.abs(c - self.tau * np.conj(c[::-1])), initial=0.0))

    def scaled_half(self, branch: Branch) -> HalfLaurentPoly:
        """``1/2 tau^{-1/2} X``, real-valued on the circle."""
        return self.x * (0.5 * branch.half_power(self.tau, -1))


@dataclass(frozen=True)
class SymmetricReport:
    """Homogeneous symmetric system on the shorter span and its relation to ``T_n``."""

    matrix: Optional[MomentMatrix]
    t_gap: float
    report: NormalityReport


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > TAU_TOL:
        raise NonUnimodularTau(
            f"tau must lie on the unit circle, got |tau| = {abs(tau):.17g}",
            {"tau": [tau.real, tau.imag]},
        )
    return tau


def equispaced_taus(count: int) -> List[complex]:
    """``count`` equispaced unimodular values starting at 1."""
    return [complex(np.exp(1j * TWO_PI * k / count)) for k in range(count)]


def sweep_taus(count: int = 8) -> List[complex]:
    """Equispaced taus plus the four axis points, deduplicated."""
    taus = equispaced_taus(count)
    for t in (1, -1, 1j, -1j):
        if all(abs(t - s) > 1e-12 for s in taus):
            taus.append(complex(t))
    return taus


def build_para(phi: HalfLaurentPoly, tau: complex) -> ParaPoly:
    """``X = z^{1/2} phi + tau z^{-1/2} phi^#`` with coefficient-level tau-invariance enforced."""
    tau = _check_tau(tau)
    raw = phi.shift_half(1) + phi.sharp().shift_half(-1) * tau
    if raw.is_zero:
        return ParaPoly(raw, tau)
    span = max(raw.two_max, -raw.two_min)
    c = raw.dense(-span, span)
    c = 0.5 * (c + tau * np.conj(c[::-1]))
    # the upper half is rebuilt from the lower so off-centre pairs hold bit for bit;
    # an odd middle coefficient pairs with itself and holds to rounding only
    half = c.size // 2
    upper = c.size - half
    c[upper:] = tau * np.conj(c[:half][::-1])
    return ParaPoly(HalfLaurentPoly(-span, c), tau)


def trig_form(p: ParaPoly, branch: Branch = Branch()) -> TrigForm:
    """Real cosine/sine coefficients of ``1/2 tau^{-1/2} X(e^{i theta})``."""
    scale = max(p.x.max_abs(), 1.0)
    gap = p.invariance_gap()
    if gap > INVARIANCE_TOL * scale:
        raise NotTauInvariant(f"X is not tau-invariant (coefficient gap {gap:.3e})", {"gap": gap})
    span = max(p.x.two_max, -p.x.two_min)
    d = 0.5 * branch.half_power(p.tau, -1) * p.x.dense(-span, span)
    # doubled frequencies -span, ..., span; keep k >= 0
    two_k = np.arange(-span, span + 1, 2)
    frequencies, a, b = [], [], []
    residue = 0.0
    for k2, dk in zip(two_k, d):
        if k2 < 0:
            continue
        if k2 == 0:
            frequencies.append(0.0)
            a.append(float(dk.real))
            b.append(0.0)
            residue = abs(dk.imag)
        else:
            frequencies.append(k2 / 2.0)
            a.append(float(2.0 * dk.real))
            b.append(float(-2.0 * dk.imag))
    if residue > INVARIANCE_TOL * scale:
        raise NotTauInvariant(f"Constant trigonometric term is not real (imaginary part {residue:.3e})")
    return TrigForm(tuple(frequencies), tuple(a), tuple(b), residue)


def with_trig(p: ParaPoly, branch: Branch) -> ParaPoly:
    return ParaPoly(p.x, p.tau, trig_form(p, branch))


def para_rows(n: MultiIndex) -> List[Tuple[int, int]]:
    """Symmetric orthogonality rows ``p = -(n_j - 1)/2, ..., (n_j - 1)/2`` as ``(j, -2p)``."""
    return [(j, n_j - 1 - 2 * i) for j, n_j in enumerate(n) for i in range(n_j)]


def para_residuals(system: MeasureSystem, p: ParaPoly, n: MultiIndex) -> List[float]:
    return orthogonality_residuals(system, p.x, para_rows(n))


def trig_residuals(system: MeasureSystem, p: ParaPoly, n: MultiIndex) -> List[float]:
    """``|int T cos(p theta) d mu_j|`` and ``|int T sin(p theta) d mu_j|`` for ``p >= 0`` in each window."""
    t_poly = p.scaled_half(system.branch)
    span = max(abs(t_poly.two_min), abs(t_poly.two_max)) / 2.0 if not t_poly.is_zero else 0.0
    residuals = []
    for j, n_j in enumerate(n):
        for two_p in range(n_j - 1, -1, -2):
            freq = two_p / 2.0
            for trig in (np.cos, np.sin):
                if trig is np.sin and two_p == 0:
                    continue
                value = integrate(
                    system,
                    j,
                    lambda theta, trig=trig, freq=freq: t_poly.evaluate_on_circle(theta) * trig(freq * theta),
                    span + freq,
                )
                residuals.append(abs(value))
    return residuals


def symmetric_report(system: MeasureSystem, n: MultiIndex) -> SymmetricReport:
    """Matrix of the symmetric relations on ``span{z^p}, p = -(|n|-1)/2..(|n|-1)/2``.

    Its columns are those of ``T_n`` shifted by one half step with the rows shifted
    the other way, so the two matrices coincide entry by entry.
    """
    if n.size == 0:
        return SymmetricReport(None, 0.0, NormalityReport.trivial())
    cache = cache_for(system)
    size = n.size
    cols = [-(size - 1) + 2 * k for k in range(size)]
    matrix = assemble(system, para_rows(n), cols, size + 1, cache)
    t_matrix = build_T(system, n, cache)
    gap = float(np.max(np.abs(matrix.entries - t_matrix.entries)))
    return SymmetricReport(matrix, gap, NormalityReport.from_matrix(matrix.entries))

