import numpy as np
import pytest
from scipy import integrate

from core import presets


@pytest.fixture
def lebesgue():
    return presets.lebesgue()


@pytest.fixture
def angelesco():
    return presets.angelesco_two_arcs()


@pytest.fixture
def at_system():
    return presets.at_two_weights()


@pytest.fixture
def bernstein_szego():
    return presets.bernstein_szego(0.5)


def quad_moment(system, j, t):
    """Independent oracle: adaptive quadrature of ``int e^{i t theta} d mu_j``."""
    component = system.components[j]
    arc = component.arc

    def part(fn):
        value, _ = integrate.quad(
            lambda th: fn(np.exp(1j * t * th) * component.density(th)),
            arc.alpha,
            arc.beta,
            limit=400,
            epsabs=1e-14,
            epsrel=1e-13,
        )
        return value

    total = complex(part(np.real), part(np.imag))
    for m in component.masses:
        total += m.mass * np.exp(1j * t * m.theta)
    return total


@pytest.fixture
def moment_oracle():
    return quad_moment
