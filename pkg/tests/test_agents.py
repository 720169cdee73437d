import pytest

from agents.scan_agent import ScanAgent
from agents.verification_agent import VerificationAgent, expand_modes
from config import Settings
from core.errors import NonNormal
from core.laurent import MultiIndex
from core.measure import Arc, Weight, make_system
from core.para import equispaced_taus
from core.solver import normality_scan
from core.zeros import CHEBYSHEV_SIGN, HP_NEIGHBOUR_NORMALITY, PARA_ZEROS, PHI_ZEROS_IN_DISK


@pytest.fixture
def settings():
    return Settings(threads=2, phase_grid=1024)


class TestScanAgent:
    @pytest.mark.asyncio
    async def test_matches_serial_scan(self, settings, angelesco):
        entries = await ScanAgent(settings).normality_scan(angelesco, 1, "phi")
        serial = normality_scan(angelesco, 1, "phi")
        assert [e.n for e in entries] == [e.n for e in serial]
        assert [e.report.ratio for e in entries] == [e.report.ratio for e in serial]

    @pytest.mark.asyncio
    async def test_unknown_mode(self, settings, angelesco):
        with pytest.raises(ValueError):
            await ScanAgent(settings).normality_scan(angelesco, 1, "sideways")

    @pytest.mark.asyncio
    async def test_counterexample_rows(self, settings, angelesco, lebesgue):
        report = await ScanAgent(settings).counterexample_scan([angelesco, lebesgue], 1)
        assert [row.system for row in report.rows] == ["SYS-A2"] * 3 + ["SYS-LEB"]


class TestVerificationAgent:
    def test_expand_all(self):
        assert expand_modes(["all"]) == ["phi_zeros", "para", "hp_neighbours", "christoffel", "chebyshev"]
        assert expand_modes(["para", "para"]) == ["para"]
        with pytest.raises(ValueError):
            expand_modes(["zeros_everywhere"])

    @pytest.mark.asyncio
    async def test_single_index_suite(self, settings, angelesco):
        agent = VerificationAgent(settings)
        report = await agent.run_suite(
            angelesco, 0, equispaced_taus(4), ["phi_zeros", "para"], indices=[MultiIndex((1, 1))]
        )
        assert report.passed
        assert report.summary() == {
            PARA_ZEROS: {"checks": 4, "failed": 0, "inconclusive": 0},
            PHI_ZEROS_IN_DISK: {"checks": 1, "failed": 0, "inconclusive": 0},
        }

    @pytest.mark.asyncio
    async def test_borderline_neighbours_counted_as_inconclusive(self, settings, at_system):
        report = await VerificationAgent(settings).run_suite(
            at_system, 0, [1.0], ["hp_neighbours"], indices=[MultiIndex((2, 2))]
        )
        assert report.passed
        summary = report.summary()[HP_NEIGHBOUR_NORMALITY]
        assert summary["checks"] == 2
        assert summary["failed"] == 0
        assert summary["inconclusive"] == len(report.inconclusive) >= 1

    @pytest.mark.asyncio
    async def test_chebyshev_skipped_for_angelesco(self, settings, angelesco):
        report = await VerificationAgent(settings).run_suite(angelesco, 1, [1.0], ["chebyshev"])
        assert report.skipped == ["chebyshev"]
        assert report.checks == []

    @pytest.mark.asyncio
    async def test_at_sweep(self, settings, at_system):
        report = await VerificationAgent(settings).run_suite(at_system, 1, [1.0, -1.0], ["phi_zeros", "chebyshev"])
        assert report.passed
        assert report.summary()[CHEBYSHEV_SIGN]["checks"] == 3
        assert report.summary()[PHI_ZEROS_IN_DISK]["checks"] == 4

    @pytest.mark.asyncio
    async def test_library_errors_become_failures(self, settings, angelesco, mocker):
        report_error = NonNormal("forced", None, {"ratio": 0.0})
        mocker.patch("agents.verification_agent.verify_thm5_1", side_effect=report_error)
        report = await VerificationAgent(settings).run_suite(
            angelesco, 0, [1.0], ["phi_zeros"], indices=[MultiIndex((1, 0))]
        )
        assert not report.passed
        assert report.failures[0].failures == ["forced"]

    @pytest.mark.asyncio
    async def test_rejects_untagged_system(self, settings):
        system = make_system([Arc(0.0, 1.0)], [Weight.uniform()])
        with pytest.raises(ValueError):
            await VerificationAgent(settings).run_suite(system, 1, [1.0])
