"""Systems of measures on the unit circle.

A component is an arc with a weight function (integrated against d theta) plus
finitely many point masses. Angles are stored in ``[t0, t0 + 2pi)`` where ``t0``
is the branch origin used for every half-integer power in the library.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    ArcOutsideBranch,
    EmptyFunctionSet,
    ForbiddenPointMass,
    InvalidArc,
    InvalidModifierPoint,
    InvalidPointMass,
    NegativeWeight,
    OverlappingArcs,
)
from core.laurent import TWO_PI, Branch, MultiIndex

logger = logging.getLogger(__name__)

ANGLE_TOL = 1e-14
WEIGHT_GRID = 1000


class WeightKind(str, Enum):
    UNIFORM = "uniform"
    JACOBI = "jacobi"
    EXPONENTIAL = "exponential"
    BERNSTEIN_SZEGO = "bernstein_szego"
    CHRISTOFFEL_POINT = "christoffel_point"
    CHRISTOFFEL_SIN2 = "christoffel_sin2"
    CHRISTOFFEL_SINPROD = "christoffel_sinprod"


MODIFIER_KINDS = frozenset(
    {WeightKind.CHRISTOFFEL_POINT, WeightKind.CHRISTOFFEL_SIN2, WeightKind.CHRISTOFFEL_SINPROD}
)


class SystemTag(str, Enum):
    ANGELESCO = "angelesco"
    AT = "at"
    NONE = "none"


@dataclass(frozen=True)
class Arc:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidArc(f"Arc endpoints must be finite, got [{self.alpha}, {self.beta}]")
        if not self.alpha < self.beta:
            raise InvalidArc(f"Arc needs alpha < beta, got [{self.alpha}, {self.beta}]")
        if self.beta - self.alpha > TWO_PI + ANGLE_TOL:
            raise InvalidArc(f"Arc [{self.alpha}, {self.beta}] is longer than the full circle")

    @property
    def length(self) -> float:
        return self.beta - self.alpha

    def interior_contains(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return (theta > self.alpha) & (theta < self.beta)

    def contains(self, theta: float) -> bool:
        """Closed-arc membership, also trying the representative ``theta + 2pi``."""
        return any(
            self.alpha - ANGLE_TOL <= t <= self.beta + ANGLE_TOL for t in (theta, theta + TWO_PI)
        )

    def grid(self, size: int = WEIGHT_GRID) -> np.ndarray:
        return np.linspace(self.alpha, self.beta, size)


@dataclass(frozen=True)
class Weight:
    """Weight function of one component; modifier kinds multiply an inner ``base`` weight."""

    kind: WeightKind = WeightKind.UNIFORM
    gamma: float = 0.0
    delta: float = 0.0
    lam: float = 0.0
    a: complex = 0j
    z0: complex = 0j
    varphi: float = 0.0
    varphi2: float = 0.0
    scale: float = 1.0
    base: Optional["Weight"] = None

    @classmethod
    def uniform(cls, scale: float = 1.0) -> "Weight":
        return cls(WeightKind.UNIFORM, scale=scale)

    @classmethod
    def jacobi(cls, gamma: float, delta: float, scale: float = 1.0) -> "Weight":
        if gamma < 0 or delta < 0:
            raise NegativeWeight(f"Jacobi exponents must be >= 0, got ({gamma}, {delta})")
        return cls(WeightKind.JACOBI, gamma=gamma, delta=delta, scale=scale)

    @classmethod
    def exponential(cls, lam: float, scale: float = 1.0) -> "Weight":
        return cls(WeightKind.EXPONENTIAL, lam=lam, scale=scale)

    @classmethod
    def bernstein_szego(cls, a: complex, scale: float = 1.0) -> "Weight":
        if not abs(a) < 1:
            raise InvalidModifierPoint(f"Bernstein-Szego parameter needs |a| < 1, got {a}")
        return cls(WeightKind.BERNSTEIN_SZEGO, a=complex(a), scale=scale)

    @classmethod
    def christoffel_point(cls, z0: complex, base: Optional["Weight"] = None) -> "Weight":
        z0 = complex(z0)
        if abs(z0) < ANGLE_TOL or abs(abs(z0) - 1.0) < ANGLE_TOL:
            raise InvalidModifierPoint(
                f"Christoffel point needs 0 != |z0| != 1, got |z0| = {abs(z0)}",
                {"z0": [z0.real, z0.imag]},
            )
        return cls(WeightKind.CHRISTOFFEL_POINT, z0=z0, base=base)

    @classmethod
    def christoffel_sin2(cls, varphi: float, base: Optional["Weight"] = None) -> "Weight":
        return cls(WeightKind.CHRISTOFFEL_SIN2, varphi=varphi, base=base)

    @classmethod
    def christoffel_sinprod(
        cls, varphi1: float, varphi2: float, base: Optional["Weight"] = None
    ) -> "Weight":
        return cls(WeightKind.CHRISTOFFEL_SINPROD, varphi=varphi1, varphi2=varphi2, base=base)

    @property
    def is_modifier(self) -> bool:
        return self.kind in MODIFIER_KINDS

    @property
    def may_change_sign(self) -> bool:
        if self.kind == WeightKind.CHRISTOFFEL_SINPROD:
            return True
        return self.base is not None and self.base.may_change_sign

    def factor(self, theta, arc: Arc) -> np.ndarray:
        """This weight's own factor, without ``scale`` or ``base``."""
        theta = np.asarray(theta, dtype=float)
        if self.kind == WeightKind.UNIFORM:
            return np.ones_like(theta)
        if self.kind == WeightKind.JACOBI:
            left = np.clip(theta - arc.alpha, 0.0, None)
            right = np.clip(arc.beta - theta, 0.0, None)
            return left ** self.gamma * right ** self.delta
        if self.kind == WeightKind.EXPONENTIAL:
            return np.exp(self.lam * theta)
        if self.kind == WeightKind.BERNSTEIN_SZEGO:
            return (1.0 - abs(self.a) ** 2) / np.abs(np.exp(1j * theta) - self.a) ** 2
        if self.kind == WeightKind.CHRISTOFFEL_POINT:
            return np.abs(np.exp(1j * theta) - self.z0) ** 2
        if self.kind == WeightKind.CHRISTOFFEL_SIN2:
            return 4.0 * np.sin((theta - self.varphi) / 2.0) ** 2
        if self.kind == WeightKind.CHRISTOFFEL_SINPROD:
            return 4.0 * np.sin((theta - self.varphi) / 2.0) * np.sin((theta - self.varphi2) / 2.0)
        raise ValueError(f"Unknown weight kind {self.kind}")

    def evaluate(self, theta, arc: Arc) -> np.ndarray:
        value = self.scale * self.factor(theta, arc)
        if self.base is not None:
            value = value * self.base.evaluate(theta, arc)
        return value

    def endpoint_exponents(self) -> Tuple[float, float]:
        """Total Jacobi exponents ``(gamma, delta)`` along the ``base`` chain."""
        gamma, delta = (self.gamma, self.delta) if self.kind == WeightKind.JACOBI else (0.0, 0.0)
        if self.base is not None:
            inner = self.base.endpoint_exponents()
            gamma, delta = gamma + inner[0], delta + inner[1]
        return gamma, delta

    def smooth_part(self, theta, arc: Arc) -> np.ndarray:
        """``evaluate`` with every Jacobi factor ``(theta - alpha)^gamma (beta - theta)^delta`` dropped."""
        theta = np.asarray(theta, dtype=float)
        own = np.ones_like(theta) if self.kind == WeightKind.JACOBI else self.factor(theta, arc)
        value = self.scale * own
        if self.base is not None:
            value = value * self.base.smooth_part(theta, arc)
        return value

    def describe(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind == WeightKind.JACOBI:
            data.update(gamma=self.gamma, delta=self.delta)
        elif self.kind == WeightKind.EXPONENTIAL:
            data.update(lam=self.lam)
        elif self.kind == WeightKind.BERNSTEIN_SZEGO:
            data.update(a=[self.a.real, self.a.imag])
        elif self.kind == WeightKind.CHRISTOFFEL_POINT:
            data.update(z0=[self.z0.real, self.z0.imag])
        elif self.kind == WeightKind.CHRISTOFFEL_SIN2:
            data.update(varphi=self.varphi)
        elif self.kind == WeightKind.CHRISTOFFEL_SINPROD:
            data.update(varphi1=self.varphi, varphi2=self.varphi2)
        if self.scale != 1.0:
            data["scale"] = self.scale
        if self.base is not None:
            data["base"] = self.base.describe()
        return data


@dataclass(frozen=True)
class PointMass:
    theta: float
    mass: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.mass)) or self.mass == 0:
            raise InvalidPointMass(f"Point mass needs finite theta and nonzero mass, got {self}")


@dataclass(frozen=True)
class MeasureComponent:
    arc: Arc
    weight: Weight = field(default_factory=Weight.uniform)
    masses: Tuple[PointMass, ...] = ()

    def density(self, theta) -> np.ndarray:
        return self.weight.evaluate(theta, self.arc)


@dataclass(frozen=True)
class MeasureSystem:
    components: Tuple[MeasureComponent, ...]
    t0: float = 0.0
    tag: SystemTag = SystemTag.NONE
    name: str = ""

    @property
    def r(self) -> int:
        return len(self.components)

    @property
    def branch(self) -> Branch:
        return Branch(self.t0)

    @property
    def arcs(self) -> List[Arc]:
        return [c.arc for c in self.components]

    @property
    def weights(self) -> List[Weight]:
        return [c.weight for c in self.components]

    def describe(self) -> Dict[str, Any]:
        """JSON system description (the same shape the CLI consumes)."""
        return {
            "r": self.r,
            "t0": self.t0,
            "tag": self.tag.value,
            "name": self.name,
            "components": [
                {
                    "arc": [c.arc.alpha, c.arc.beta],
                    "weight": c.weight.describe(),
                    "masses": [{"theta": m.theta, "mass": m.mass} for m in c.masses],
                }
                for c in self.components
            ],
        }


@dataclass(frozen=True)
class CheckReport:
    """Outcome of the sampled Chebyshev determinant test."""

    index: MultiIndex
    trials: int
    min_abs: float
    max_abs: float
    positive: int
    negative: int

    @property
    def sign_consistent(self) -> bool:
        return self.min_abs > 0 and (self.positive == 0 or self.negative == 0)


def _normalize_arc(arc: Arc, t0: float) -> Arc:
    branch = Branch(t0)
    alpha = branch.normalize(arc.alpha)
    if abs(alpha - (t0 + TWO_PI)) < ANGLE_TOL:
        alpha = t0
    beta = alpha + arc.length
    if beta > t0 + TWO_PI + ANGLE_TOL:
        raise ArcOutsideBranch(
            f"Arc [{arc.alpha}, {arc.beta}] crosses the branch cut at t0 = {t0}",
            {"arc": [arc.alpha, arc.beta], "t0": t0},
        )
    return Arc(alpha, min(beta, t0 + TWO_PI))


def _check_weight(weight: Weight, arc: Arc, index: int) -> None:
    if weight.may_change_sign:
        return
    values = weight.evaluate(arc.grid(), arc)
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        worst = float(np.nanmin(values))
        raise NegativeWeight(
            f"Weight of component {index + 1} is negative on its arc (min {worst:.3e})",
            {"component": index + 1, "min_value": worst},
        )


def _check_masses(masses: Sequence[PointMass], arc: Arc, index: int) -> None:
    for m in masses:
        if m.mass <= 0:
            raise InvalidPointMass(
                f"Point mass at {m.theta} on component {index + 1} must be positive",
                {"component": index + 1, "theta": m.theta, "mass": m.mass},
            )
        if not arc.contains(m.theta):
            raise InvalidPointMass(
                f"Point mass at {m.theta} lies outside arc [{arc.alpha}, {arc.beta}]",
                {"component": index + 1, "theta": m.theta},
            )


def _build_component(
    arc: Arc, weight: Weight, masses: Sequence[PointMass], t0: float
) -> MeasureComponent:
    branch = Branch(t0)
    return MeasureComponent(
        arc=_normalize_arc(arc, t0),
        weight=weight,
        masses=tuple(PointMass(branch.normalize(m.theta), m.mass) for m in masses),
    )


def make_system(
    arcs: Sequence[Arc],
    weights: Sequence[Weight],
    masses: Optional[Sequence[Sequence[PointMass]]] = None,
    t0: float = 0.0,
    name: str = "",
) -> MeasureSystem:
    """Untagged system; only arc normalisation and nonnegativity are enforced."""
    masses = masses if masses is not None else [[] for _ in arcs]
    if not (len(arcs) == len(weights) == len(masses)) or not arcs:
        raise ValueError("arcs, weights and masses must be nonempty and of equal length")
    components = tuple(_build_component(a, w, ms, t0) for a, w, ms in zip(arcs, weights, masses))
    for j, c in enumerate(components):
        _check_weight(c.weight, c.arc, j)
    return MeasureSystem(components, t0=t0, tag=SystemTag.NONE, name=name)


def make_angelesco_system(
    arcs: Sequence[Arc],
    weights: Sequence[Weight],
    masses: Optional[Sequence[Sequence[PointMass]]] = None,
    t0: float = 0.0,
    name: str = "",
) -> MeasureSystem:
    """Angelesco system: arcs reordered counter-clockwise from ``t0``."""
    masses = masses if masses is not None else [[] for _ in arcs]
    if not (len(arcs) == len(weights) == len(masses)) or not arcs:
        raise ValueError("arcs, weights and masses must be nonempty and of equal length")
    components = [_build_component(a, w, ms, t0) for a, w, ms in zip(arcs, weights, masses)]
    components.sort(key=lambda c: (c.arc.alpha, c.arc.beta))

    for j in range(len(components) - 1):
        left, right = components[j].arc, components[j + 1].arc
        if left.beta > right.alpha + ANGLE_TOL:
            raise OverlappingArcs(
                f"Arcs [{left.alpha}, {left.beta}] and [{right.alpha}, {right.beta}] overlap",
                {"arcs": [[left.alpha, left.beta], [right.alpha, right.beta]]},
            )

    last = components[-1]
    for m in last.masses:
        if abs(m.theta - t0) < ANGLE_TOL or abs(m.theta - t0 - TWO_PI) < ANGLE_TOL:
            raise ForbiddenPointMass(
                f"Component {len(components)} has a point mass at e^(i t0), t0 = {t0}",
                {"component": len(components), "theta": m.theta},
            )

    for j, c in enumerate(components):
        _check_weight(c.weight, c.arc, j)
        _check_masses(c.masses, c.arc, j)

    logger.debug(f"Built Angelesco system '{name}' with {len(components)} arcs, t0 = {t0}")
    return MeasureSystem(tuple(components), t0=t0, tag=SystemTag.ANGELESCO, name=name)


def make_at_system(
    arc: Arc,
    weights: Sequence[Weight],
    base_masses: Optional[Sequence[PointMass]] = None,
    name: str = "",
) -> MeasureSystem:
    """AT system ``d mu_j = w_j d mu`` on one arc, branch origin at ``arc.alpha``."""
    if not weights:
        raise ValueError("An AT system needs at least one weight")
    t0 = arc.alpha
    base_masses = list(base_masses or [])
    _check_masses(base_masses, arc, 0)
    components = []
    for j, w in enumerate(weights):
        _check_weight(w, arc, j)
        masses = []
        for m in base_masses:
            scaled = float(m.mass * w.evaluate(m.theta, arc))
            if scaled > 0:
                masses.append(PointMass(m.theta, scaled))
        components.append(_build_component(arc, w, masses, t0))
    logger.debug(f"Built AT system '{name}' with {len(components)} weights on [{arc.alpha}, {arc.beta}]")
    return MeasureSystem(tuple(components), t0=t0, tag=SystemTag.AT, name=name)


def trig_functions(weight: Weight, arc: Arc, m: int, theta: np.ndarray) -> np.ndarray:
    """Rows of ``Trig_m(w)`` evaluated at ``theta``; the odd case starts with ``w`` itself."""
    w = weight.evaluate(theta, arc)
    rows = []
    if m % 2 == 0:
        for k in range(1, m // 2 + 1):
            freq = (2 * k - 1) / 2.0
            rows.append(w * np.cos(freq * theta))
            rows.append(w * np.sin(freq * theta))
    else:
        rows.append(w)
        for k in range(1, (m - 1) // 2 + 1):
            rows.append(w * np.cos(k * theta))
            rows.append(w * np.sin(k * theta))
    return np.array(rows).reshape(m, *np.shape(theta))


def chebyshev_check(system: MeasureSystem, n: MultiIndex, trials: int = 200, seed: int = 0) -> CheckReport:
    """Sample the Chebyshev determinant of ``Trig_n(mu)`` at ordered random tuples.

    A falsifier only: a sign change proves the property fails, a consistent sign
    proves nothing.
    """
    if system.tag != SystemTag.AT:
        raise ValueError(f"chebyshev_check needs an AT system, got tag '{system.tag.value}'")
    if len(n) != system.r:
        raise ValueError(f"Index {n} does not match r = {system.r}")
    size = n.size
    if size == 0:
        raise EmptyFunctionSet("Trig_0 is empty; the Chebyshev determinant is undefined")

    arc = system.components[0].arc
    rng = np.random.default_rng(seed)
    points = np.sort(rng.uniform(arc.alpha, arc.beta, size=(trials, size)), axis=1)
    blocks = [
        trig_functions(c.weight, c.arc, n_j, points)
        for c, n_j in zip(system.components, n)
        if n_j > 0
    ]
    # (functions, trials, points) -> (trials, functions, points)
    matrices = np.transpose(np.concatenate(blocks, axis=0), (1, 0, 2))
    dets = np.linalg.det(matrices)
    report = CheckReport(
        index=n,
        trials=trials,
        min_abs=float(np.min(np.abs(dets))),
        max_abs=float(np.max(np.abs(dets))),
        positive=int(np.sum(dets > 0)),
        negative=int(np.sum(dets < 0)),
    )
    logger.debug(f"Chebyshev check n={n}: {report}")
    return report


def modify_system(system: MeasureSystem, modifier: Weight) -> MeasureSystem:
    """Christoffel-type modification: every weight and point mass multiplied by ``modifier``."""
    if not modifier.is_modifier:
        raise ValueError(f"'{modifier.kind.value}' is not a Christoffel modifier")
    if modifier.kind == WeightKind.CHRISTOFFEL_POINT:
        z0 = modifier.z0
        if abs(z0) < ANGLE_TOL or abs(abs(z0) - 1.0) < ANGLE_TOL:
            raise InvalidModifierPoint(
                f"Christoffel point needs 0 != |z0| != 1, got |z0| = {abs(z0)}",
                {"z0": [z0.real, z0.imag]},
            )

    components = []
    for c in system.components:
        masses = []
        for m in c.masses:
            factor = float(modifier.factor(m.theta, c.arc))
            if factor != 0:
                masses.append(PointMass(m.theta, m.mass * factor))
        components.append(
            MeasureComponent(arc=c.arc, weight=replace(modifier, base=c.weight), masses=tuple(masses))
        )

    tag = SystemTag.NONE if modifier.may_change_sign else system.tag
    label = modifier.kind.value
    return MeasureSystem(tuple(components), t0=system.t0, tag=tag, name=f"{system.name}*{label}")
