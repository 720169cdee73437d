"""Half-integer trigonometric moments and the moment matrices built from them.

``m_j(t) = int e^{i t theta} d mu_j(e^{i theta})`` over ``[t0, t0 + 2pi)``; every
matrix entry of the phi- and Hermite-Pade systems is one of these moments.
"""
import logging
import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_jacobi

from core.errors import EmptyIndex
from core.laurent import MultiIndex
from core.measure import Arc, MeasureSystem

logger = logging.getLogger(__name__)

PANEL_NODES = 32


@lru_cache(maxsize=None)
def _legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def panel_count(length: float, max_frequency: float, refine: int = 1) -> int:
    """Panels of length at most ``pi / (4 (|t| + 1))``, multiplied by ``refine``."""
    h_max = math.pi / (4.0 * (abs(max_frequency) + 1.0))
    return max(1, math.ceil(length / h_max)) * refine


@lru_cache(maxsize=512)
def _nodes(alpha: float, beta: float, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = _legendre(PANEL_NODES)
    edges = np.linspace(alpha, beta, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    theta = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    theta.setflags(write=False)
    weights.setflags(write=False)
    return theta, weights


def quadrature_nodes(arc: Arc, max_frequency: float, refine: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    return _nodes(arc.alpha, arc.beta, panel_count(arc.length, max_frequency, refine))


@lru_cache(maxsize=None)
def _gauss_jacobi(nodes: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Rule for ``int f(x) (1 - x)^a (1 + x)^b dx`` on ``[-1, 1]``."""
    return roots_jacobi(nodes, a, b)


@lru_cache(maxsize=128)
def _jacobi_nodes(
    alpha: float, beta: float, panels: int, gamma: float, delta: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Composite rule whose weights carry ``(theta - alpha)^gamma (beta - theta)^delta``.

    The end panels use Gauss-Jacobi nodes for their endpoint singularity, the inner
    panels Gauss-Legendre with the factor folded into the weights.
    """
    edges = np.linspace(alpha, beta, panels + 1)
    thetas, weights = [], []
    for k in range(panels):
        first, last = k == 0, k == panels - 1
        half = 0.5 * (edges[k + 1] - edges[k])
        mid = 0.5 * (edges[k + 1] + edges[k])
        a = delta if last else 0.0
        b = gamma if first else 0.0
        x, w = _gauss_jacobi(PANEL_NODES, a, b)
        theta = mid + half * x
        w = half ** (1.0 + a + b) * w
        if not first:
            w = w * (theta - alpha) ** gamma
        if not last:
            w = w * (beta - theta) ** delta
        thetas.append(theta)
        weights.append(w)
    theta, weights = np.concatenate(thetas), np.concatenate(weights)
    theta.setflags(write=False)
    weights.setflags(write=False)
    return theta, weights


def integrate(
    system: MeasureSystem,
    j: int,
    f: Callable[[np.ndarray], np.ndarray],
    max_frequency: float,
    refine: int = 1,
) -> complex:
    """``int f(theta) d mu_j``; ``max_frequency`` bounds the oscillation of ``f``."""
    component = system.components[j]
    arc = component.arc
    gamma, delta = component.weight.endpoint_exponents()
    if gamma == 0 and delta == 0:
        theta, weights = quadrature_nodes(arc, max_frequency, refine)
        density = component.density(theta)
    else:
        panels = panel_count(arc.length, max_frequency, refine)
        theta, weights = _jacobi_nodes(arc.alpha, arc.beta, panels, gamma, delta)
        density = component.weight.smooth_part(theta, arc)
    total = complex(np.sum(weights * density * f(theta)))
    for m in component.masses:
        total += m.mass * complex(f(np.asarray(m.theta)))
    return total


class MomentCache:
    """Per-system moments keyed by ``(component, 2t)``; safe for concurrent use."""

    def __init__(self, system: MeasureSystem, refine: int = 1):
        self.system = system
        self.refine = refine
        self._values: Dict[Tuple[int, int], complex] = {}
        self._lock = threading.Lock()

    def moment(self, j: int, two_t: int) -> complex:
        if not 0 <= j < self.system.r:
            raise IndexError(f"Component {j} out of range for r = {self.system.r}")
        key = (j, int(two_t))
        value = self._values.get(key)
        if value is None:
            t = two_t / 2.0
            value = integrate(self.system, j, lambda theta: np.exp(1j * t * theta), t, self.refine)
            with self._lock:
                self._values[key] = value
        return value

    def items(self) -> List[Tuple[int, int, complex]]:
        with self._lock:
            return sorted((j, two_t, v) for (j, two_t), v in self._values.items())

    def __len__(self) -> int:
        return len(self._values)


@lru_cache(maxsize=64)
def cache_for(system: MeasureSystem, refine: int = 1) -> MomentCache:
    return MomentCache(system, refine)


def moment(system: MeasureSystem, j: int, t: float) -> complex:
    """``m_j(t)`` for half-integer ``t`` (0-based component ``j``)."""
    two_t = round(2 * t)
    if abs(two_t - 2 * t) > 1e-12:
        raise ValueError(f"Moment frequency {t} is not a half-integer")
    return cache_for(system).moment(j, two_t)


@dataclass(frozen=True, eq=False)
class MomentMatrix:
    """Moment matrix with its frequency metadata.

    Row ``i`` is the condition ``int (.) z^{s_i} d mu_{j_i} = 0`` stored as
    ``rows[i] = (j_i, 2 s_i)``; column ``k`` multiplies the unknown coefficient of
    ``z^{cols[k] / 2}``; ``monic`` is the column produced by the normalised term
    ``z^{monic_exponent / 2}``.
    """

    entries: np.ndarray
    rows: Tuple[Tuple[int, int], ...]
    cols: Tuple[int, ...]
    monic_exponent: int
    monic: np.ndarray

    @property
    def size(self) -> int:
        return len(self.cols)

    @property
    def scale(self) -> float:
        return float(max(np.max(np.abs(self.entries)), np.max(np.abs(self.monic))))

    def row_blocks(self) -> List[Tuple[int, List[int]]]:
        blocks: List[Tuple[int, List[int]]] = []
        for j, two_s in self.rows:
            if not blocks or blocks[-1][0] != j:
                blocks.append((j, []))
            blocks[-1][1].append(two_s)
        return blocks


def assemble(
    system: MeasureSystem,
    rows: Sequence[Tuple[int, int]],
    cols: Sequence[int],
    monic_exponent: int,
    cache: Optional[MomentCache] = None,
) -> MomentMatrix:
    cache = cache or cache_for(system)
    entries = np.array(
        [[cache.moment(j, two_q + two_s) for two_q in cols] for j, two_s in rows], dtype=complex
    ).reshape(len(rows), len(cols))
    monic = np.array([cache.moment(j, monic_exponent + two_s) for j, two_s in rows], dtype=complex)
    return MomentMatrix(entries, tuple(rows), tuple(cols), monic_exponent, monic)


def phi_rows(n: MultiIndex) -> List[Tuple[int, int]]:
    """Rows ``s = n_j/2, n_j/2 - 1, ..., -n_j/2 + 1`` per component."""
    return [(j, n_j - 2 * i) for j, n_j in enumerate(n) for i in range(n_j)]


def _check_r(system: MeasureSystem, *indices: MultiIndex) -> None:
    for idx in indices:
        if len(idx) != system.r:
            raise ValueError(f"Index {idx} has {len(idx)} entries but the system has r = {system.r}")


def build_T(system: MeasureSystem, n: MultiIndex, cache: Optional[MomentCache] = None) -> MomentMatrix:
    _check_r(system, n)
    size = n.size
    if size == 0:
        raise EmptyIndex("T_0 is empty; n = 0 is normal by convention (det T_0 = 1)")
    cols = [-size + 2 * k for k in range(size)]
    matrix = assemble(system, phi_rows(n), cols, size, cache)
    logger.debug(f"Built T_n for n={n}: {size}x{size}")
    return matrix


def hp_rows(n: MultiIndex, m: MultiIndex) -> List[Tuple[int, int]]:
    """Rows for ``p = -m_j, ..., n_j - 1``; the row frequency is ``-p``."""
    return [(j, -2 * p) for j, (n_j, m_j) in enumerate(zip(n, m)) for p in range(-m_j, n_j)]


def hp_star_rows(n: MultiIndex, m: MultiIndex) -> List[Tuple[int, int]]:
    """Rows for ``p = -m_j + 1, ..., n_j``."""
    return [(j, -2 * p) for j, (n_j, m_j) in enumerate(zip(n, m)) for p in range(-m_j + 1, n_j + 1)]


def build_HP(
    system: MeasureSystem, n: MultiIndex, m: MultiIndex, cache: Optional[MomentCache] = None
) -> MomentMatrix:
    _check_r(system, n, m)
    size = n.size + m.size
    if size == 0:
        raise EmptyIndex("The (0, 0) Hermite-Pade system is empty")
    cols = [2 * p for p in range(-m.size, n.size)]
    return assemble(system, hp_rows(n, m), cols, 2 * n.size, cache)


def build_HP_star(
    system: MeasureSystem, n: MultiIndex, m: MultiIndex, cache: Optional[MomentCache] = None
) -> MomentMatrix:
    _check_r(system, n, m)
    size = n.size + m.size
    if size == 0:
        raise EmptyIndex("The (0, 0) Hermite-Pade system is empty")
    cols = [2 * p for p in range(-m.size + 1, n.size + 1)]
    return assemble(system, hp_star_rows(n, m), cols, -2 * m.size, cache)


def dump_rows(cache: MomentCache) -> List[Tuple[int, int, float, float]]:
    """``(component (1-based), 2t, re, im)`` for every cached moment."""
    return [(j + 1, two_t, v.real, v.imag) for j, two_t, v in cache.items()]
