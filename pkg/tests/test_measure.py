import numpy as np
import pytest

from core import presets
from core.errors import (
    ArcOutsideBranch,
    EmptyFunctionSet,
    ForbiddenPointMass,
    InvalidArc,
    InvalidModifierPoint,
    InvalidPointMass,
    NegativeWeight,
    OverlappingArcs,
    UnknownPreset,
)
from core.laurent import MultiIndex
from core.measure import (
    Arc,
    PointMass,
    SystemTag,
    Weight,
    WeightKind,
    chebyshev_check,
    make_angelesco_system,
    make_at_system,
    make_system,
    modify_system,
    trig_functions,
)


class TestArc:
    def test_rejects_reversed(self):
        with pytest.raises(InvalidArc):
            Arc(1.0, 0.5)

    def test_rejects_longer_than_circle(self):
        with pytest.raises(InvalidArc):
            Arc(0.0, 7.0)

    def test_interior_is_open(self):
        arc = Arc(0.2, 1.2)
        assert not arc.interior_contains(0.2)
        assert arc.interior_contains(0.7)
        assert arc.contains(0.2)


class TestAngelesco:
    def test_preset_is_valid(self, angelesco):
        assert angelesco.tag == SystemTag.ANGELESCO
        assert angelesco.r == 2
        assert angelesco.t0 == 0.0
        assert [(a.alpha, a.beta) for a in angelesco.arcs] == [(0.2, 1.2), (2.0, 3.0)]

    def test_reorders_arcs(self):
        arcs = [Arc(2.0, 3.0), Arc(0.2, 1.2)]
        system = make_angelesco_system(arcs, [Weight.uniform(), Weight.exponential(1.0)])
        assert system.arcs[0] == Arc(0.2, 1.2)
        assert system.weights[0].kind == WeightKind.EXPONENTIAL

    def test_overlap(self):
        with pytest.raises(OverlappingArcs):
            make_angelesco_system([Arc(0.2, 1.5), Arc(1.4, 3.0)], [Weight.uniform()] * 2)

    def test_touching_endpoints_allowed(self):
        system = make_angelesco_system([Arc(0.0, 1.0), Arc(1.0, 2.0)], [Weight.uniform()] * 2)
        assert system.r == 2

    def test_forbidden_mass_at_t0(self):
        with pytest.raises(ForbiddenPointMass):
            make_angelesco_system(
                [Arc(0.0, 1.0), Arc(2.0, 2 * np.pi)],
                [Weight.uniform()] * 2,
                [[], [PointMass(0.0, 1.0)]],
                t0=0.0,
            )

    def test_mass_outside_arc(self):
        with pytest.raises(InvalidPointMass):
            make_angelesco_system(
                [Arc(0.0, 1.0), Arc(2.0, 3.0)], [Weight.uniform()] * 2, [[PointMass(1.5, 1.0)], []]
            )

    def test_arc_across_branch_cut(self):
        with pytest.raises(ArcOutsideBranch):
            make_angelesco_system([Arc(5.5, 7.0)], [Weight.uniform()], t0=0.0)

    def test_arcs_normalized_into_branch(self):
        system = make_angelesco_system([Arc(-1.0, -0.5)], [Weight.uniform()], t0=0.0)
        assert system.arcs[0].alpha == pytest.approx(2 * np.pi - 1.0)


class TestAT:
    def test_preset(self, at_system):
        assert at_system.tag == SystemTag.AT
        assert at_system.t0 == 0.5
        assert all(arc == Arc(0.5, 2.5) for arc in at_system.arcs)

    def test_lebesgue(self, lebesgue):
        assert lebesgue.r == 1
        assert lebesgue.arcs[0] == Arc(0.0, 2 * np.pi)

    def test_bernstein_szego(self, bernstein_szego):
        assert bernstein_szego.weights[0].kind == WeightKind.BERNSTEIN_SZEGO

    def test_negative_weight(self):
        with pytest.raises(NegativeWeight):
            make_at_system(Arc(0.0, 1.0), [Weight.uniform(scale=-1.0)])

    def test_base_masses_scaled_by_weight(self):
        arc = Arc(0.0, 1.0)
        system = make_at_system(arc, [Weight.uniform(), Weight.exponential(1.0)], [PointMass(0.5, 2.0)])
        assert system.components[0].masses[0].mass == pytest.approx(2.0)
        assert system.components[1].masses[0].mass == pytest.approx(2.0 * np.exp(0.5))


class TestWeights:
    @pytest.mark.parametrize(
        "weight",
        [
            Weight.uniform(),
            Weight.jacobi(0.5, 1.5),
            Weight.exponential(-2.0),
            Weight.bernstein_szego(0.3 + 0.4j),
            Weight.christoffel_point(0.5),
            Weight.christoffel_sin2(4.0),
        ],
    )
    def test_nonnegative_on_grid(self, weight):
        arc = Arc(0.2, 3.0)
        assert np.all(weight.evaluate(arc.grid(), arc) >= 0)

    def test_sinprod_changes_sign(self):
        weight = Weight.christoffel_sinprod(1.0, 2.0)
        arc = Arc(0.0, 2 * np.pi)
        values = weight.evaluate(arc.grid(), arc)
        assert values.min() < 0 < values.max()

    def test_jacobi_rejects_negative_exponent(self):
        with pytest.raises(NegativeWeight):
            Weight.jacobi(-0.5, 1.0)

    def test_unit_mass_presets(self, angelesco, at_system, lebesgue, moment_oracle):
        for system in (angelesco, at_system, lebesgue):
            for j in range(system.r):
                assert moment_oracle(system, j, 0.0) == pytest.approx(1.0, rel=1e-10)

    def test_endpoint_exponents_follow_base(self):
        arc = Arc(0.2, 1.2)
        weight = Weight.christoffel_sin2(2.0, base=Weight.jacobi(0.5, 1.5, scale=3.0))
        assert weight.endpoint_exponents() == (0.5, 1.5)
        assert Weight.exponential(1.0).endpoint_exponents() == (0.0, 0.0)
        theta = arc.grid(17)[1:-1]
        singular = (theta - arc.alpha) ** 0.5 * (arc.beta - theta) ** 1.5
        assert np.allclose(weight.smooth_part(theta, arc) * singular, weight.evaluate(theta, arc), rtol=1e-13)

    def test_jacobi_preset_has_unit_mass(self, moment_oracle):
        system = presets.angelesco_catalog()[3]
        assert moment_oracle(system, 0, 0.0) == pytest.approx(1.0, rel=1e-8)


class TestModifySystem:
    def test_christoffel_point(self, angelesco):
        modified = modify_system(angelesco, Weight.christoffel_point(0.5))
        rng = np.random.default_rng(1)
        for base, mod in zip(angelesco.components, modified.components):
            theta = rng.uniform(base.arc.alpha, base.arc.beta, 100)
            expected = np.abs(np.exp(1j * theta) - 0.5) ** 2 * base.density(theta)
            assert np.allclose(mod.density(theta), expected, rtol=1e-12)
        assert modified.tag == SystemTag.ANGELESCO

    def test_unimodular_point_rejected(self):
        with pytest.raises(InvalidModifierPoint):
            Weight.christoffel_point(np.exp(0.7j))

    def test_origin_rejected(self):
        with pytest.raises(InvalidModifierPoint):
            Weight.christoffel_point(0)

    def test_sin2(self, angelesco):
        modified = modify_system(angelesco, Weight.christoffel_sin2(4.0))
        theta = np.linspace(2.0, 3.0, 11)
        expected = 4 * np.sin((theta - 4.0) / 2) ** 2 * angelesco.components[1].density(theta)
        assert np.allclose(modified.components[1].density(theta), expected)

    def test_sinprod_drops_tag(self, at_system):
        modified = modify_system(at_system, Weight.christoffel_sinprod(3.0, 4.0))
        assert modified.tag == SystemTag.NONE

    def test_masses_multiplied(self):
        system = make_at_system(Arc(0.0, 1.0), [Weight.uniform()], [PointMass(0.5, 1.0)])
        modified = modify_system(system, Weight.christoffel_point(2.0))
        expected = abs(np.exp(0.5j) - 2.0) ** 2
        assert modified.components[0].masses[0].mass == pytest.approx(expected)

    def test_untagged_constructor(self):
        system = make_system([Arc(0.0, 1.0)], [Weight.uniform()])
        assert system.tag == SystemTag.NONE


class TestChebyshevCheck:
    def test_at_two_weights_first_order(self, at_system):
        report = chebyshev_check(at_system, MultiIndex((1, 1)), trials=200)
        assert report.sign_consistent
        assert report.trials == 200

    def test_lebesgue_trig_system(self):
        system = make_at_system(Arc(0.0, 3.0), [Weight.uniform()])
        assert chebyshev_check(system, MultiIndex((4,)), trials=100).sign_consistent

    def test_repeated_weight_is_degenerate(self):
        system = make_at_system(Arc(0.0, 1.0), [Weight.uniform(), Weight.uniform()])
        report = chebyshev_check(system, MultiIndex((1, 1)), trials=50)
        assert not report.sign_consistent

    def test_empty_index(self, at_system):
        with pytest.raises(EmptyFunctionSet):
            chebyshev_check(at_system, MultiIndex((0, 0)))

    def test_needs_at_system(self, angelesco):
        with pytest.raises(ValueError):
            chebyshev_check(angelesco, MultiIndex((1, 1)))

    def test_odd_block_starts_with_weight(self):
        arc = Arc(0.0, 1.0)
        theta = np.array([0.1, 0.4])
        rows = trig_functions(Weight.exponential(1.0), arc, 3, theta)
        assert rows.shape == (3, 2)
        assert np.allclose(rows[0], np.exp(theta))
        assert np.allclose(rows[1], np.exp(theta) * np.cos(theta))


class TestPresets:
    def test_unknown(self):
        with pytest.raises(UnknownPreset):
            presets.preset("SYS-NOPE")

    def test_bernstein_szego_parameter(self):
        system = presets.preset("SYS-BS:0.5")
        assert system.weights[0].a == 0.5
        assert system.name == "SYS-BS:0.5"

    def test_bernstein_szego_outside_disk(self):
        with pytest.raises(UnknownPreset):
            presets.preset("SYS-BS:1.5")

    def test_catalog(self):
        catalog = presets.angelesco_catalog()
        assert [s.name for s in catalog][0] == "SYS-A2"
        assert all(s.tag == SystemTag.ANGELESCO for s in catalog)
        assert catalog[-1].r == 3
