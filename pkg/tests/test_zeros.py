import numpy as np
import pytest

from core.errors import DegenerateLeading, RootOnCircle, TheoremViolated, ZeroPolynomial
from core.laurent import HalfLaurentPoly, MultiIndex
from core.measure import Arc, Weight, make_at_system, make_system
from core.para import equispaced_taus
from core.presets import angelesco_catalog, preset
from core.zeros import (
    CHEBYSHEV_SIGN,
    HP_NEIGHBOUR_NORMALITY,
    PARA_ZEROS,
    PHI_ZEROS_IN_DISK,
    clusters,
    counterexample_scan,
    factorization_error,
    min_pairwise_gap,
    phase,
    polynomial_roots,
    roots,
    verify_chebyshev,
    verify_christoffel,
    verify_hp_neighbour,
    verify_para_theorems,
    verify_thm5_1,
    verify_thm5_2,
    zero_report,
)

UNIT_PAIR = HalfLaurentPoly(-2, [1, -1, 1])


class TestRoots:
    def test_planted_degree_six(self):
        planted = np.array([0.5, -0.3 + 0.2j, 0.9j, 1.5, -2 + 1j, 0.1])
        found = roots(np.poly(planted)[::-1])
        assert found.size == 6
        for z in planted:
            assert np.min(np.abs(found - z)) < 1e-10

    def test_linear(self):
        assert np.allclose(roots([1, 1]), [-1])

    def test_zeros_at_origin(self):
        found = roots([0, 0, 2, 1])
        assert found.size == 3
        assert np.sum(found == 0) == 2
        assert np.allclose(found[found != 0], [-2])

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomial):
            roots([0, 0])

    def test_degenerate_leading(self):
        with pytest.raises(DegenerateLeading):
            roots([1, 1e-310])

    def test_laurent_offset(self):
        # z^{-1} - 1 + z has the sixth roots of unity e^{+-i pi/3}
        found = polynomial_roots(UNIT_PAIR)
        assert np.allclose(np.sort_complex(found), np.sort_complex(np.exp([-1j * np.pi / 3, 1j * np.pi / 3])))

    def test_offset_padding(self):
        found = polynomial_roots(HalfLaurentPoly.monomial(1), -3)
        assert found.size == 2
        assert np.all(found == 0)

    def test_offset_must_clear(self):
        with pytest.raises(ValueError):
            polynomial_roots(UNIT_PAIR, 0)


class TestClusters:
    def test_groups_close_values(self):
        groups = clusters(np.array([0.5, 0.5 + 1e-9, 0.2j]))
        assert sorted(mult for _, mult in groups) == [1, 2]

    def test_gap(self):
        assert min_pairwise_gap(np.array([0.0, 1.0, 3.0])) == 1.0
        assert min_pairwise_gap(np.array([0.5])) == np.inf


class TestZeroReport:
    def test_lebesgue_unit_pair(self, lebesgue):
        report = zero_report(lebesgue, UNIT_PAIR)
        assert report.degree == 2
        assert len(report.on_circle) == 2
        assert report.per_arc == (2,)
        assert report.outside_union == ()
        assert report.all_simple

    def test_root_between_arcs(self, angelesco):
        p = HalfLaurentPoly(0, [-np.exp(1.5j), 1])
        report = zero_report(angelesco, p)
        assert report.per_arc == (0, 0)
        assert len(report.outside_union) == 1
        assert report.classify(report.roots[0]) == "on_circle"

    def test_inside_and_outside(self, angelesco):
        p = HalfLaurentPoly.from_exponents({0: 1.0, 2: -2.5, 4: 1.0})  # (z - 2)(z - 1/2)
        report = zero_report(angelesco, p)
        assert (report.n_inside, report.n_outside) == (1, 1)
        assert report.on_circle == ()


class TestPhase:
    def test_no_roots(self):
        ph = phase([], 512)
        assert ph.winding == 1
        assert ph.monotone and ph.increasing
        assert np.allclose(ph.psi, ph.theta_grid)

    def test_root_inside(self):
        ph = phase([0.5], 512)
        assert ph.winding == 2
        assert ph.monotone
        assert abs(ph.winding_raw - 2) < 1e-6

    def test_root_outside(self):
        assert phase([2.0], 512).winding == 0

    def test_without_z_factor(self):
        assert phase([0.5, 0.1j], 512, with_z_factor=False).winding == 2
        assert phase([3.0, -2.0], 512, with_z_factor=False).winding == -2

    def test_root_on_circle(self):
        with pytest.raises(RootOnCircle):
            phase([1j])

    def test_grid_endpoints(self):
        ph = phase([0.3], 8)
        assert ph.theta_grid[0] == -np.pi and ph.theta_grid[-1] == np.pi
        assert len(ph.rows()) == 9


class TestFactorization:
    def test_exact_product(self, lebesgue):
        found = polynomial_roots(UNIT_PAIR)
        assert factorization_error(UNIT_PAIR, found, lebesgue.branch) < 1e-12

    def test_wrong_roots(self, lebesgue):
        assert factorization_error(UNIT_PAIR, np.array([1j, -1j]), lebesgue.branch) > 1e-3


class TestPhiZerosInDisk:
    @pytest.mark.parametrize("entries", [(2, 1), (1, 1), (0, 2)])
    def test_angelesco(self, angelesco, entries):
        check = verify_thm5_1(angelesco, MultiIndex(entries))
        assert check.passed
        assert check.theorem == PHI_ZEROS_IN_DISK
        assert check.zeros.n_inside == sum(entries)
        assert check.phase.winding == sum(entries) + 1

    def test_at_system(self, at_system):
        check = verify_thm5_1(at_system, MultiIndex((1, 1)))
        assert check.passed
        assert check.evidence["max_abs_root"] < 1.0

    def test_lebesgue_roots_near_origin(self, lebesgue):
        check = verify_thm5_1(lebesgue, MultiIndex((3,)))
        assert check.passed
        assert check.zeros.n_inside == 3
        assert max(abs(z) for z in check.zeros.roots) < 1e-4

    @pytest.mark.parametrize("system_name", ["SYS-A2", "SYS-AT2"])
    def test_whole_grid_to_three(self, system_name):
        system = preset(system_name)
        for n in MultiIndex.grid(2, 3):
            check = verify_thm5_1(system, n)
            assert check.passed
            assert check.zeros.n_inside == n.size

    def test_needs_tagged_system(self):
        system = make_system([Arc(0.0, 1.0)], [Weight.uniform()])
        with pytest.raises(ValueError):
            verify_thm5_1(system, MultiIndex((1,)))


class TestParaTheorems:
    def test_angelesco_axes(self, angelesco):
        checks = verify_para_theorems(angelesco, MultiIndex((2, 2)), [1, -1, 1j, -1j])
        assert len(checks) == 4
        for check in checks:
            assert check.passed
            assert check.theorem == PARA_ZEROS
            assert check.zeros.degree == 5
            assert all(count >= 2 for count in check.zeros.per_arc)
            assert len(check.zeros.outside_union) <= 1

    def test_at_system_sweep(self, at_system):
        checks = verify_para_theorems(at_system, MultiIndex((2, 1)), equispaced_taus(8))
        assert all(c.passed for c in checks)
        assert all(c.evidence["factorization_error"] < 1e-8 for c in checks)

    def test_lebesgue(self, lebesgue):
        checks = verify_para_theorems(lebesgue, MultiIndex((2,)), equispaced_taus(4))
        assert all(c.passed and len(c.zeros.on_circle) == 3 for c in checks)

    @pytest.mark.parametrize("system_name", ["SYS-A2", "SYS-AT2"])
    def test_every_index_up_to_size_six(self, system_name):
        system = preset(system_name)
        taus = equispaced_taus(8)
        for n in MultiIndex.grid(2, 6):
            if 1 <= n.size <= 6:
                checks = verify_para_theorems(system, n, taus)
                assert len(checks) == 8
                assert all(c.passed for c in checks)

    def test_strict_raises_when_nothing_counts_as_unimodular(self, angelesco):
        with pytest.raises(TheoremViolated) as info:
            verify_para_theorems(angelesco, MultiIndex((1, 1)), [1j], tol_circle=0.0)
        assert info.value.theorem == PARA_ZEROS
        assert info.value.exit_code == 2

    def test_lenient_collects_failures(self, angelesco):
        checks = verify_para_theorems(angelesco, MultiIndex((1, 1)), [1j], tol_circle=0.0, strict=False)
        assert not checks[0].passed
        assert checks[0].failures


class TestNeighbourNormality:
    def test_zero_index(self, angelesco):
        for j in range(2):
            check = verify_hp_neighbour(angelesco, MultiIndex((0, 0)), j)
            assert check.passed
            assert check.theorem == HP_NEIGHBOUR_NORMALITY
            assert abs(check.phase.winding) == 1

    def test_sweep_normality(self, angelesco, at_system):
        for system in (angelesco, at_system):
            checks = verify_thm5_2(system, 1, grid_size=1024, strict=False)
            assert len(checks) == 8
            for check in checks:
                assert all(v["verdict"] == "normal" for v in check.evidence["normality"].values())
                assert all(gap < 1e-10 for gap in check.evidence["sharp_star_gap"].values())

    def test_angelesco_to_two(self, angelesco):
        checks = verify_thm5_2(angelesco, 2, strict=False)
        assert len(checks) == 18
        assert all(c.passed and not c.inconclusive for c in checks)
        gaps = [gap for c in checks for gap in c.evidence["sharp_star_gap"].values()]
        assert max(gaps) < 1e-10

    def test_borderline_pair_is_inconclusive(self, at_system):
        check = verify_hp_neighbour(at_system, MultiIndex((2, 2)), 0)
        assert check.passed
        assert check.inconclusive
        assert "2,2|3,2" in check.evidence["borderline"]
        assert check.evidence["normality"]["2,2|3,2"]["verdict"] == "borderline"
        assert check.phase is None
        assert "sharp_star_gap" not in check.evidence

    def test_non_normal_pair_still_fails(self):
        system = make_at_system(Arc(0.0, 1.0), [Weight.uniform(), Weight.uniform()])
        check = verify_hp_neighbour(system, MultiIndex((1, 1)), 0, strict=False)
        assert not check.passed
        assert not check.inconclusive


class TestChristoffel:
    def test_angelesco(self, angelesco):
        check = verify_christoffel(angelesco, MultiIndex((1, 1)))
        assert check.passed
        assert check.evidence["modifiers"] > 8


class TestChebyshev:
    def test_at_system(self, at_system):
        check = verify_chebyshev(at_system, MultiIndex((1, 1)), trials=100)
        assert check.passed
        assert check.theorem == CHEBYSHEV_SIGN

    def test_repeated_weight_strict(self):
        system = make_at_system(Arc(0.0, 1.0), [Weight.uniform(), Weight.uniform()])
        with pytest.raises(TheoremViolated):
            verify_chebyshev(system, MultiIndex((1, 1)), trials=50)


class TestCounterexampleScan:
    def test_empty_catalog(self):
        report = counterexample_scan([], 2)
        assert report.rows == ()
        assert report.findings == []

    def test_skips_zero_index(self, angelesco):
        report = counterexample_scan([angelesco], 1)
        assert [row.n.entries for row in report.rows] == [(0, 1), (1, 0), (1, 1)]
        assert all(row.max_abs_root is not None for row in report.rows)

    def test_lebesgue_has_no_findings(self, lebesgue):
        report = counterexample_scan([lebesgue], 3)
        assert len(report.rows) == 3
        assert report.findings == []
        assert all(row.max_abs_root < 1e-3 for row in report.rows)

    def test_catalog_to_four(self):
        catalog = angelesco_catalog()
        report = counterexample_scan(catalog, 4)
        assert len(report.rows) == sum(5**system.r - 1 for system in catalog)
        assert len(report.rows) == 220
        normal = [row for row in report.rows if row.verdict == "normal"]
        assert normal
        assert all(row.max_abs_root is not None for row in normal)
        assert all(row.system in {s.name for s in catalog} for row in report.findings)
