import numpy as np
import pytest

from core.errors import NonUnimodularTau, NotTauInvariant
from core.laurent import HalfLaurentPoly, MultiIndex
from core.para import (
    ParaPoly,
    build_para,
    equispaced_taus,
    para_residuals,
    para_rows,
    sweep_taus,
    symmetric_report,
    trig_form,
    trig_residuals,
    with_trig,
)
from core.solver import solve_phi

BS_PHI = HalfLaurentPoly(-1, [-0.5, 1.0])


class TestBuildPara:
    def test_from_constant(self):
        p = build_para(HalfLaurentPoly.monomial(0), 1.0)
        assert p.x == HalfLaurentPoly(-1, [1.0, 1.0])
        assert p.degree == 1

    def test_bernstein_szego_plus(self):
        p = build_para(BS_PHI, 1.0)
        assert np.allclose(p.x.dense(-2, 2), [1, -1, 1])

    def test_bernstein_szego_minus(self):
        p = build_para(BS_PHI, -1.0)
        assert np.allclose(p.x.dense(-2, 2), [-1, 0, 1])

    def test_invariance_is_exact(self, angelesco):
        phi = solve_phi(angelesco, MultiIndex((2, 1))).poly
        for tau in (1, -1, 1j, np.exp(0.37j)):
            p = build_para(phi, tau)
            span = max(p.x.two_max, -p.x.two_min)
            c = p.x.dense(-span, span)
            upper = c[(c.size + 1) // 2:]
            assert np.array_equal(upper, p.tau * np.conj(c[: c.size // 2][::-1]))
            assert p.invariance_gap() < 1e-13 * max(p.x.max_abs(), 1.0)

    def test_middle_coefficient_invariant_to_rounding(self, angelesco):
        phi = solve_phi(angelesco, MultiIndex((2, 1))).poly
        for tau in (1j, np.exp(0.37j), np.exp(-2.1j)):
            p = build_para(phi, tau)
            span = max(p.x.two_max, -p.x.two_min)
            c = p.x.dense(-span, span)
            assert c.size % 2 == 1
            middle = c[c.size // 2]
            assert abs(middle - p.tau * np.conj(middle)) <= 16 * np.finfo(float).eps * abs(middle)

    def test_rejects_off_circle(self):
        with pytest.raises(NonUnimodularTau):
            build_para(BS_PHI, 1.1)

    def test_accepts_rounding_noise(self):
        tau = np.exp(0.9j) * (1 + 4e-16)
        assert build_para(BS_PHI, tau).tau == complex(tau)


class TestTrigForm:
    def test_half_cosine(self):
        form = trig_form(build_para(HalfLaurentPoly.monomial(0), 1.0))
        assert form.frequencies == (0.5,)
        assert form.a == pytest.approx((1.0,))
        assert form.b == pytest.approx((0.0,))

    def test_bernstein_szego_cosine(self):
        form = trig_form(build_para(BS_PHI, 1.0))
        assert form.frequencies == (0.0, 1.0)
        assert form.a == pytest.approx((-0.5, 1.0))
        assert form.b == pytest.approx((0.0, 0.0), abs=1e-15)

    def test_bernstein_szego_sine(self):
        form = trig_form(build_para(BS_PHI, -1.0))
        assert form.a[-1] == pytest.approx(0.0, abs=1e-15)
        assert form.b[-1] == pytest.approx(1.0)

    def test_leading_pair(self, angelesco):
        rng = np.random.default_rng(11)
        phi = solve_phi(angelesco, MultiIndex((1, 1))).poly
        for angle in rng.uniform(0, 2 * np.pi, 10):
            form = trig_form(build_para(phi, np.exp(1j * angle)), angelesco.branch)
            assert form.leading == pytest.approx((np.cos(angle / 2), np.sin(angle / 2)), abs=1e-12)

    def test_matches_scaled_values(self, at_system):
        phi = solve_phi(at_system, MultiIndex((2, 1))).poly
        p = with_trig(build_para(phi, np.exp(2.2j)), at_system.branch)
        theta = np.linspace(at_system.t0, at_system.t0 + 2 * np.pi, 64, endpoint=False)
        values = p.scaled_half(at_system.branch).evaluate_on_circle(theta)
        assert np.max(np.abs(values.imag)) < 1e-12
        assert np.allclose(p.trig.evaluate(theta), values.real, atol=1e-12)

    def test_rejects_non_invariant(self):
        with pytest.raises(NotTauInvariant):
            trig_form(ParaPoly(HalfLaurentPoly(-2, [1, 0, 2]), 1.0))

    def test_rows(self):
        form = trig_form(build_para(BS_PHI, 1.0))
        assert [k for k, _, _ in form.rows()] == [0.0, 1.0]


class TestOrthogonality:
    def test_rows_are_symmetric(self):
        assert para_rows(MultiIndex((3, 1))) == [(0, 2), (0, 0), (0, -2), (1, 0)]

    @pytest.mark.parametrize("tau", [1.0, -1.0, 1j, np.exp(0.4j)])
    def test_angelesco_residuals(self, angelesco, tau):
        n = MultiIndex((2, 1))
        p = build_para(solve_phi(angelesco, n).poly, tau)
        assert max(para_residuals(angelesco, p, n)) < 1e-9
        assert max(trig_residuals(angelesco, p, n)) < 1e-9

    def test_trig_residual_count(self, at_system):
        n = MultiIndex((2, 1))
        p = build_para(solve_phi(at_system, n).poly, 1j)
        # n_1 = 2 gives p = 1/2 (cos and sin); n_2 = 1 gives p = 0 (cos only)
        assert len(trig_residuals(at_system, p, n)) == 3


class TestSymmetricReport:
    def test_matches_phi_matrix(self, angelesco):
        report = symmetric_report(angelesco, MultiIndex((2, 1)))
        assert report.t_gap == 0.0
        assert report.report.is_normal
        assert report.matrix.size == 3

    def test_empty(self, lebesgue):
        report = symmetric_report(lebesgue, MultiIndex((0,)))
        assert report.matrix is None
        assert report.report.is_normal


class TestTaus:
    def test_equispaced(self):
        taus = equispaced_taus(4)
        assert np.allclose(taus, [1, 1j, -1, -1j])

    def test_sweep_adds_axes(self):
        taus = sweep_taus(3)
        assert len(taus) == 6
        assert all(abs(abs(t) - 1) < 1e-15 for t in taus)
