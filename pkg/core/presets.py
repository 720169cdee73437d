"""Named desk systems.

Every preset weight is scaled so that each measure has unit mass:

* ``SYS-LEB``      normalised Lebesgue measure on the whole circle, t0 = 0.
* ``SYS-BS:<a>``   Bernstein-Szego (Poisson kernel) weight for parameter ``a``, t0 = 0.
* ``SYS-A2``       Angelesco, uniform weights on [0.2, 1.2] and [2.0, 3.0], t0 = 0.
* ``SYS-AT2``      AT on [0.5, 2.5] with weights (1, e^theta), t0 = 0.5.
"""
import math
from typing import Callable, Dict, List

from scipy.special import beta as beta_function

from core.errors import UnknownPreset
from core.laurent import TWO_PI
from core.measure import Arc, MeasureSystem, Weight, make_angelesco_system, make_at_system


def unit_uniform(arc: Arc) -> Weight:
    return Weight.uniform(scale=1.0 / arc.length)


def unit_exponential(arc: Arc, lam: float) -> Weight:
    if lam == 0:
        return unit_uniform(arc)
    total = (math.exp(lam * arc.beta) - math.exp(lam * arc.alpha)) / lam
    return Weight.exponential(lam, scale=1.0 / total)


def unit_jacobi(arc: Arc, gamma: float, delta: float) -> Weight:
    total = arc.length ** (gamma + delta + 1.0) * beta_function(gamma + 1.0, delta + 1.0)
    return Weight.jacobi(gamma, delta, scale=1.0 / total)


def lebesgue() -> MeasureSystem:
    arc = Arc(0.0, TWO_PI)
    return make_at_system(arc, [unit_uniform(arc)], name="SYS-LEB")


def bernstein_szego(a: complex) -> MeasureSystem:
    arc = Arc(0.0, TWO_PI)
    # the Poisson kernel integrates to 2pi over the circle
    weight = Weight.bernstein_szego(a, scale=1.0 / TWO_PI)
    label = f"{a.real:g}" if complex(a).imag == 0 else f"{complex(a)}"
    return make_at_system(arc, [weight], name=f"SYS-BS:{label}")


def angelesco_two_arcs() -> MeasureSystem:
    arcs = [Arc(0.2, 1.2), Arc(2.0, 3.0)]
    return make_angelesco_system(arcs, [unit_uniform(a) for a in arcs], t0=0.0, name="SYS-A2")


def at_two_weights() -> MeasureSystem:
    arc = Arc(0.5, 2.5)
    return make_at_system(arc, [unit_uniform(arc), unit_exponential(arc, 1.0)], name="SYS-AT2")


_FIXED: Dict[str, Callable[[], MeasureSystem]] = {
    "SYS-LEB": lebesgue,
    "SYS-A2": angelesco_two_arcs,
    "SYS-AT2": at_two_weights,
}


def list_presets() -> List[str]:
    return sorted(_FIXED) + ["SYS-BS:<a>"]


def preset(name: str) -> MeasureSystem:
    key = name.strip().upper()
    if key in _FIXED:
        return _FIXED[key]()
    if key.startswith("SYS-BS:"):
        raw = name.strip()[len("SYS-BS:"):]
        try:
            a = complex(raw.replace("i", "j"))
        except ValueError as e:
            raise UnknownPreset(f"Cannot parse Bernstein-Szego parameter '{raw}'") from e
        if not abs(a) < 1:
            raise UnknownPreset(f"Bernstein-Szego preset needs |a| < 1, got {raw}")
        return bernstein_szego(a)
    raise UnknownPreset(
        f"Unknown preset '{name}'. Available: {', '.join(list_presets())}",
        {"preset": name},
    )


def angelesco_catalog() -> List[MeasureSystem]:
    """SYS-A2 and variations used by the classical-zeros counterexample scan."""
    catalog = [angelesco_two_arcs()]

    rotated = [Arc(1.0, 2.0), Arc(3.5, 5.0)]
    catalog.append(
        make_angelesco_system(rotated, [unit_uniform(a) for a in rotated], name="SYS-A2-rotated")
    )

    wide = [Arc(0.1, 2.9), Arc(3.0, 6.1)]
    catalog.append(make_angelesco_system(wide, [unit_uniform(a) for a in wide], name="SYS-A2-wide"))

    arcs = [Arc(0.2, 1.2), Arc(2.0, 3.0)]
    catalog.append(
        make_angelesco_system(
            arcs, [unit_jacobi(a, 0.5, 1.5) for a in arcs], name="SYS-A2-jacobi"
        )
    )

    three = [Arc(0.2, 1.2), Arc(2.0, 3.0), Arc(4.0, 5.5)]
    catalog.append(make_angelesco_system(three, [unit_uniform(a) for a in three], name="SYS-A3"))
    return catalog
