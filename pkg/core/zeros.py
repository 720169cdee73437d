"""Root finding, zero classification and the Blaschke phase, plus the theorem verifiers.

Verifiers return :class:`TheoremCheck` records. With ``strict=True`` a failed check
raises :class:`TheoremViolated` carrying the same evidence.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from core.errors import DegenerateLeading, NonNormal, RootOnCircle, TheoremViolated, ZeroPolynomial
from core.laurent import TWO_PI, Branch, HalfLaurentPoly, MultiIndex
from core.measure import MeasureSystem, SystemTag, chebyshev_check
from core.para import build_para
from core.solver import (
    Verdict,
    christoffel_parameters,
    christoffel_scan,
    hp_report,
    sharp_star_gap,
    solve_classical,
    solve_hp,
    solve_phi,
)

logger = logging.getLogger(__name__)

LEADING_TOL = 1e-300
NEWTON_STEPS = 3
CLUSTER_RADIUS = 1e-7
PAIR_GAP = 1e-6
DISK_MARGIN = 1e-6
PHASE_ROOT_TOL = 1e-12
FACTORIZATION_TOL = 1e-8
SHARP_STAR_TOL = 1e-10
COUNTEREXAMPLE_TOL = 1e-8

PHI_ZEROS_IN_DISK = "phi_zeros_in_disk"
PARA_ZEROS = "para_zeros_on_circle"
HP_NEIGHBOUR_NORMALITY = "hp_neighbour_normality"
CHRISTOFFEL_NORMALITY = "christoffel_normality"
CHEBYSHEV_SIGN = "chebyshev_sign"


def _newton(coeffs: np.ndarray, found: np.ndarray) -> np.ndarray:
    descending = coeffs[::-1]
    derivative = np.polyder(descending)
    refined = found.copy()
    for i, z in enumerate(found):
        value = np.polyval(descending, z)
        for _ in range(NEWTON_STEPS):
            slope = np.polyval(derivative, z)
            if slope == 0:
                break
            candidate = z - value / slope
            candidate_value = np.polyval(descending, candidate)
            if not abs(candidate_value) < abs(value):
                break
            z, value = candidate, candidate_value
        refined[i] = z
    return refined


def roots(coeffs: Sequence[complex]) -> np.ndarray:
    """All roots of ``sum coeffs[k] z^k`` (ascending) with multiplicity."""
    c = np.asarray(coeffs, dtype=complex).ravel()
    nonzero = np.flatnonzero(c != 0)
    if nonzero.size == 0:
        raise ZeroPolynomial("The zero polynomial has no well-defined roots")
    c = c[: nonzero[-1] + 1]
    if abs(c[-1]) < LEADING_TOL:
        raise DegenerateLeading(f"Leading coefficient {abs(c[-1]):.3e} is numerically zero")
    at_origin = int(nonzero[0])
    reduced = c[at_origin:]
    if reduced.size == 1:
        found = np.zeros(0, dtype=complex)
    else:
        balanced, _ = linalg.matrix_balance(linalg.companion(reduced[::-1]))
        found = _newton(reduced, linalg.eigvals(balanced).astype(complex))
    return np.concatenate([np.zeros(at_origin, dtype=complex), found])


def polynomial_roots(p: HalfLaurentPoly, two_low: Optional[int] = None) -> np.ndarray:
    """Roots of ``z^{-two_low/2} p(z)``; ``two_low`` defaults to the lowest stored exponent."""
    if p.is_zero:
        raise ZeroPolynomial("Cannot locate zeros of the zero polynomial")
    two_low = p.two_min if two_low is None else two_low
    if two_low > p.two_min or (p.two_min - two_low) % 2:
        raise ValueError(f"Offset {two_low}/2 does not clear the lowest exponent {p.two_min}/2")
    padding = (p.two_min - two_low) // 2
    return np.concatenate([np.zeros(padding, dtype=complex), roots(p.to_ordinary())])


def clusters(values: np.ndarray, radius: float = CLUSTER_RADIUS) -> List[Tuple[complex, int]]:
    groups: List[List[complex]] = []
    for z in sorted(values, key=lambda v: (v.real, v.imag)):
        for group in groups:
            if abs(z - group[0]) < radius:
                group.append(z)
                break
        else:
            groups.append([z])
    return [(complex(np.mean(g)), len(g)) for g in groups]


def min_pairwise_gap(values: np.ndarray) -> float:
    if len(values) < 2:
        return math.inf
    diffs = np.abs(values[:, None] - values[None, :])
    diffs[np.diag_indices(len(values))] = np.inf
    return float(np.min(diffs))


@dataclass(frozen=True)
class ZeroReport:
    roots: Tuple[complex, ...]
    on_circle: Tuple[complex, ...]
    n_inside: int
    n_outside: int
    per_arc: Tuple[int, ...]
    outside_union: Tuple[complex, ...]
    clusters: Tuple[Tuple[complex, int], ...]
    min_pairwise_gap: float
    tol_circle: float

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def all_simple(self) -> bool:
        return all(mult == 1 for _, mult in self.clusters)

    def classify(self, z: complex) -> str:
        modulus = abs(z)
        if abs(modulus - 1.0) < self.tol_circle:
            return "on_circle"
        return "inside" if modulus < 1.0 else "outside"


def arc_index(system: MeasureSystem, z: complex) -> Optional[int]:
    """0-based component whose open arc contains ``arg z``, if any."""
    theta = system.branch.arg(z)
    for j, arc in enumerate(system.arcs):
        if arc.interior_contains(theta):
            return j
    return None


def zero_report(
    system: MeasureSystem,
    p: HalfLaurentPoly,
    tol_circle: float = 1e-8,
    two_low: Optional[int] = None,
) -> ZeroReport:
    found = polynomial_roots(p, two_low)
    modulus = np.abs(found)
    on_mask = np.abs(modulus - 1.0) < tol_circle
    on_circle = found[on_mask]

    per_arc = [0] * system.r
    outside_union = []
    for z in on_circle:
        hits = [j for j, arc in enumerate(system.arcs) if arc.interior_contains(system.branch.arg(z))]
        for j in hits:
            per_arc[j] += 1
        if not hits:
            outside_union.append(complex(z))

    return ZeroReport(
        roots=tuple(complex(z) for z in found),
        on_circle=tuple(complex(z) for z in on_circle),
        n_inside=int(np.sum((modulus < 1.0) & ~on_mask)),
        n_outside=int(np.sum((modulus > 1.0) & ~on_mask)),
        per_arc=tuple(per_arc),
        outside_union=tuple(outside_union),
        clusters=tuple(clusters(found)),
        min_pairwise_gap=min_pairwise_gap(found),
        tol_circle=tol_circle,
    )


@dataclass(frozen=True, eq=False)
class PhaseReport:
    """Continuous phase of ``B(e^{i theta})`` on ``[-pi, pi]`` (both endpoints sampled)."""

    theta_grid: np.ndarray
    psi: np.ndarray
    winding: int
    winding_raw: float
    monotone: bool
    increasing: bool
    min_abs_derivative: float

    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.theta_grid.tolist(), self.psi.tolist()))


def phase(found: Sequence[complex], grid_size: int = 4096, with_z_factor: bool = True) -> PhaseReport:
    """Phase of ``B = z P / P*`` (or ``P / P*`` without the z factor) for ``P`` with roots ``found``.

    Each root contributes ``-theta + 2 Arg(e^{i theta} - z)`` along a branch that is
    continuous in theta, so no unwrapping is needed.
    """
    if grid_size < 2:
        raise ValueError("Phase grid needs at least 2 intervals")
    found = np.asarray(found, dtype=complex).ravel()
    near = found[np.abs(np.abs(found) - 1.0) < PHASE_ROOT_TOL]
    if near.size:
        raise RootOnCircle(
            f"{near.size} root(s) lie on the unit circle; the phase is undefined",
            {"roots": [[z.real, z.imag] for z in near]},
        )
    theta = np.linspace(-math.pi, math.pi, grid_size + 1)
    e = np.exp(1j * theta)
    psi = theta.copy() if with_z_factor else np.zeros_like(theta)
    for z in found:
        if abs(z) < 1.0:
            psi += theta + 2.0 * np.angle(1.0 - z / e)
        else:
            psi += -theta + 2.0 * (np.angle(-z) + np.angle(1.0 - e / z))

    winding_raw = float((psi[-1] - psi[0]) / TWO_PI)
    steps = np.diff(psi) / np.diff(theta)
    increasing = bool(np.all(steps > 0))
    return PhaseReport(
        theta_grid=theta,
        psi=psi,
        winding=int(round(winding_raw)),
        winding_raw=winding_raw,
        monotone=increasing or bool(np.all(steps < 0)),
        increasing=increasing,
        min_abs_derivative=float(np.min(np.abs(steps))),
    )


def factorization_error(
    x: HalfLaurentPoly, found: Sequence[complex], branch: Branch = Branch(), samples: int = 100
) -> float:
    """Relative misfit of the best constant multiple of ``z^{two_min/2} prod (z - zeta)`` to ``x`` on the circle."""
    found = np.asarray(found, dtype=complex).ravel()
    theta = branch.t0 + TWO_PI * (np.arange(samples) + 0.5) / samples
    target = np.asarray(x.evaluate_on_circle(theta))
    e = np.exp(1j * theta)
    model = np.prod(e[:, None] - found[None, :], axis=1) * np.exp(0.5j * x.two_min * theta)
    constant = np.vdot(model, target) / np.vdot(model, model)
    return float(np.linalg.norm(target - constant * model) / np.linalg.norm(target))


@dataclass
class TheoremCheck:
    theorem: str
    passed: bool
    n: MultiIndex
    m: Optional[MultiIndex] = None
    tau: Optional[complex] = None
    failures: List[str] = field(default_factory=list)
    evidence: Dict[str, Any] = field(default_factory=dict)
    zeros: Optional[ZeroReport] = None
    phase: Optional[PhaseReport] = None
    # numerically undecidable: not a failure, not a confirmation
    inconclusive: bool = False


def _finish(check: TheoremCheck, strict: bool) -> TheoremCheck:
    check.passed = not check.failures
    if not check.passed:
        logger.warning(f"{check.theorem} failed for n=({check.n}): {'; '.join(check.failures)}")
        if strict:
            evidence = dict(check.evidence, n=list(check.n), failures=check.failures)
            raise TheoremViolated(check.theorem, "; ".join(check.failures), evidence)
    return check


def _require_zero_theorems(system: MeasureSystem) -> None:
    if system.tag not in (SystemTag.ANGELESCO, SystemTag.AT):
        raise ValueError(
            f"The zero theorems need an Angelesco or AT system, got tag '{system.tag.value}'"
        )


def _pairs(values: Sequence[complex]) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def verify_thm5_1(
    system: MeasureSystem,
    n: MultiIndex,
    tol_circle: float = 1e-8,
    grid_size: int = 4096,
    strict: bool = True,
) -> TheoremCheck:
    """All ``|n|`` zeros of ``z^{|n|/2} phi_n`` lie strictly inside the unit disk."""
    _require_zero_theorems(system)
    check = TheoremCheck(PHI_ZEROS_IN_DISK, False, n)
    phi = solve_phi(system, n).poly
    report = zero_report(system, phi, tol_circle, two_low=-n.size)
    check.zeros = report

    found = np.asarray(report.roots)
    if report.degree != n.size:
        check.failures.append(f"found {report.degree} roots, expected {n.size}")
    if report.on_circle:
        check.failures.append(f"{len(report.on_circle)} root(s) within {tol_circle:g} of the circle")
    if found.size and np.max(np.abs(found)) >= 1.0 - DISK_MARGIN:
        check.failures.append(f"max |root| = {np.max(np.abs(found)):.12g} is not below 1 - {DISK_MARGIN:g}")
    if report.n_inside != n.size:
        check.failures.append(f"{report.n_inside} roots inside the disk, expected {n.size}")

    try:
        ph = phase(found, grid_size)
        check.phase = ph
        if ph.winding != n.size + 1:
            check.failures.append(f"phase winding {ph.winding}, expected {n.size + 1}")
        if ph.winding != report.n_inside + 1 - report.n_outside:
            check.failures.append("phase winding disagrees with the root count")
        if not ph.monotone:
            check.failures.append("phase is not strictly monotone")
        check.evidence.update(winding=ph.winding, min_abs_derivative=ph.min_abs_derivative)
    except RootOnCircle as e:
        check.failures.append(e.message)

    check.evidence.update(
        max_abs_root=float(np.max(np.abs(found))) if found.size else 0.0,
        n_inside=report.n_inside,
        n_outside=report.n_outside,
        roots=_pairs(report.roots),
    )
    return _finish(check, strict)


def verify_para_theorems(
    system: MeasureSystem,
    n: MultiIndex,
    taus: Sequence[complex],
    tol_circle: float = 1e-8,
    strict: bool = True,
) -> List[TheoremCheck]:
    """Zeros of ``X_n^(tau)``: simple, unimodular, at most one outside the open arcs, ``n_j`` per arc (Angelesco)."""
    _require_zero_theorems(system)
    phi = solve_phi(system, n).poly
    checks = []
    expected = n.size + 1
    for tau in taus:
        p = build_para(phi, tau)
        check = TheoremCheck(PARA_ZEROS, False, n, tau=complex(tau))
        report = zero_report(system, p.x, tol_circle, two_low=-expected)
        check.zeros = report

        if report.degree != expected:
            check.failures.append(f"found {report.degree} roots, expected {expected}")
        if len(report.on_circle) != report.degree:
            worst = max(abs(abs(z) - 1.0) for z in report.roots)
            check.failures.append(
                f"{report.degree - len(report.on_circle)} root(s) off the circle (worst ||z|-1| = {worst:.3e})"
            )
        if report.min_pairwise_gap <= PAIR_GAP:
            check.failures.append(f"min pairwise gap {report.min_pairwise_gap:.3e} <= {PAIR_GAP:g}")
        if len(report.outside_union) > 1:
            check.failures.append(f"{len(report.outside_union)} roots outside the open arcs")
        if system.tag == SystemTag.ANGELESCO:
            for j, (count, n_j) in enumerate(zip(report.per_arc, n)):
                if count < n_j:
                    check.failures.append(f"arc {j + 1} holds {count} roots, expected at least {n_j}")
        fit = factorization_error(p.x, report.roots, system.branch)
        if fit > FACTORIZATION_TOL:
            check.failures.append(f"product reconstruction error {fit:.3e}")

        check.evidence.update(
            tau=[check.tau.real, check.tau.imag],
            per_arc=list(report.per_arc),
            outside_union=_pairs(report.outside_union),
            min_pairwise_gap=report.min_pairwise_gap,
            factorization_error=fit,
            roots=_pairs(report.roots),
        )
        checks.append(_finish(check, strict))
    return checks


def verify_hp_neighbour(
    system: MeasureSystem,
    n: MultiIndex,
    j: int,
    grid_size: int = 4096,
    strict: bool = True,
) -> TheoremCheck:
    """Normality of ``(n, n+e_j)`` and ``(n+e_j, n)`` with the phase of ``z^{|n|+1} Phi_{n,n+e_j}``.

    A borderline pair marks the check inconclusive: it is reported, not counted as a
    violation, and the phase and sharp/star comparisons are skipped.
    """
    m = n.increment(j)
    check = TheoremCheck(HP_NEIGHBOUR_NORMALITY, False, n, m=m)
    verdicts = {}
    borderline = []
    for a, b in ((n, m), (m, n)):
        report = hp_report(system, a, b)
        verdicts[f"{a}|{b}"] = {"verdict": report.verdict.value, "ratio": report.ratio}
        if report.verdict == Verdict.NON_NORMAL:
            check.failures.append(f"(({a}), ({b})) is {report.verdict.value} (ratio {report.ratio:.3e})")
        elif report.verdict == Verdict.BORDERLINE:
            borderline.append(f"{a}|{b}")
    check.evidence["normality"] = verdicts
    if check.failures:
        return _finish(check, strict)
    if borderline:
        check.inconclusive = True
        check.evidence["borderline"] = borderline
        logger.info(f"{HP_NEIGHBOUR_NORMALITY} for n=({n}), j={j + 1} is inconclusive: borderline {borderline}")
        return _finish(check, strict)

    phi = solve_hp(system, n, m).poly
    expected = 2 * n.size + 1
    found = polynomial_roots(phi, -2 * m.size)
    if found.size != expected:
        check.failures.append(f"P has {found.size} roots, expected {expected}")
    try:
        ph = phase(found, grid_size, with_z_factor=False)
        check.phase = ph
        if abs(ph.winding) != expected:
            check.failures.append(f"phase winding {ph.winding}, expected +/-{expected}")
        check.evidence.update(winding=ph.winding, increasing=ph.increasing)
    except RootOnCircle as e:
        check.failures.append(e.message)

    gaps = {}
    for a, b in ((n, m), (m, n)):
        gap = sharp_star_gap(system, a, b)
        gaps[f"{a}|{b}"] = gap
        if gap > SHARP_STAR_TOL:
            check.failures.append(f"sharp(Phi_(({a}),({b}))) differs from Phi*_(({b}),({a})) by {gap:.3e}")
    check.evidence["sharp_star_gap"] = gaps
    return _finish(check, strict)


def verify_thm5_2(
    system: MeasureSystem, max_index: int, grid_size: int = 4096, strict: bool = True
) -> List[TheoremCheck]:
    _require_zero_theorems(system)
    return [
        verify_hp_neighbour(system, n, j, grid_size, strict)
        for n in MultiIndex.grid(system.r, max_index)
        for j in range(system.r)
    ]


def verify_christoffel(system: MeasureSystem, n: MultiIndex, strict: bool = True) -> TheoremCheck:
    """phi-normality of ``n`` survives the three Christoffel modifications."""
    _require_zero_theorems(system)
    check = TheoremCheck(CHRISTOFFEL_NORMALITY, False, n)
    z0s, phis, pairs = christoffel_parameters(system)
    entries = christoffel_scan(system, n, z0s, phis, pairs)
    for entry in entries:
        if not entry.report.is_normal:
            check.failures.append(
                f"{entry.modifier.kind.value} modification is {entry.report.verdict.value} (ratio {entry.report.ratio:.3e})"
            )
    check.evidence.update(
        modifiers=len(entries),
        min_ratio=min((e.report.ratio for e in entries), default=1.0),
    )
    return _finish(check, strict)


def verify_chebyshev(
    system: MeasureSystem, n: MultiIndex, trials: int = 200, seed: int = 0, strict: bool = True
) -> TheoremCheck:
    """Sampled sign test of the Chebyshev determinant; AT systems only."""
    check = TheoremCheck(CHEBYSHEV_SIGN, False, n)
    report = chebyshev_check(system, n, trials, seed)
    if not report.sign_consistent:
        check.failures.append(
            f"determinant signs {report.positive}+/{report.negative}- (min |det| {report.min_abs:.3e})"
        )
    check.evidence.update(
        trials=report.trials,
        positive=report.positive,
        negative=report.negative,
        min_abs=report.min_abs,
        max_abs=report.max_abs,
    )
    return _finish(check, strict)


@dataclass(frozen=True)
class CounterexampleRow:
    system: str
    n: MultiIndex
    verdict: str
    max_abs_root: Optional[float]

    @property
    def outside_disk(self) -> bool:
        return self.max_abs_root is not None and self.max_abs_root > 1.0 + COUNTEREXAMPLE_TOL


@dataclass(frozen=True)
class CounterexampleReport:
    rows: Tuple[CounterexampleRow, ...]

    @property
    def findings(self) -> List[CounterexampleRow]:
        return [row for row in self.rows if row.outside_disk]


def counterexample_row(system: MeasureSystem, n: MultiIndex) -> CounterexampleRow:
    report = hp_report(system, n, MultiIndex.zeros(system.r))
    if not report.is_normal:
        return CounterexampleRow(system.name, n, report.verdict.value, None)
    try:
        poly = solve_classical(system, n).poly
    except NonNormal:
        return CounterexampleRow(system.name, n, "non_normal", None)
    found = polynomial_roots(poly, 0)
    row = CounterexampleRow(system.name, n, report.verdict.value, float(np.max(np.abs(found))))
    if row.outside_disk:
        logger.warning(f"{system.name}, n=({n}): Phi_n has a zero with |z| = {row.max_abs_root:.12g} > 1")
    return row


def counterexample_scan(catalog: Sequence[MeasureSystem], max_index: int) -> CounterexampleReport:
    """Max |root| of the classical type II ``Phi_n`` over each catalog system; findings are recorded, never raised."""
    rows = [
        counterexample_row(system, n)
        for system in catalog
        for n in MultiIndex.grid(system.r, max_index)
        if n.size > 0
    ]
    return CounterexampleReport(tuple(rows))
