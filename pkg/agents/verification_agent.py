import asyncio
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from config import Settings, get_settings
from core.errors import MopucError
from core.laurent import MultiIndex
from core.measure import MeasureSystem, SystemTag
from core.zeros import (
    CHEBYSHEV_SIGN,
    CHRISTOFFEL_NORMALITY,
    HP_NEIGHBOUR_NORMALITY,
    PARA_ZEROS,
    PHI_ZEROS_IN_DISK,
    TheoremCheck,
    verify_chebyshev,
    verify_christoffel,
    verify_hp_neighbour,
    verify_para_theorems,
    verify_thm5_1,
)

logger = logging.getLogger(__name__)

SUITE_MODES = ("phi_zeros", "para", "hp_neighbours", "christoffel", "chebyshev")

_THEOREM_FOR_MODE = {
    "phi_zeros": PHI_ZEROS_IN_DISK,
    "para": PARA_ZEROS,
    "hp_neighbours": HP_NEIGHBOUR_NORMALITY,
    "christoffel": CHRISTOFFEL_NORMALITY,
    "chebyshev": CHEBYSHEV_SIGN,
}


@dataclass
class SuiteReport:
    system: str
    max_index: int
    modes: List[str]
    checks: List[TheoremCheck] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[TheoremCheck]:
        return [c for c in self.checks if not c.passed]

    @property
    def inconclusive(self) -> List[TheoremCheck]:
        return [c for c in self.checks if c.inconclusive]

    def summary(self) -> Dict[str, Dict[str, int]]:
        total = Counter(c.theorem for c in self.checks)
        failed = Counter(c.theorem for c in self.failures)
        undecided = Counter(c.theorem for c in self.inconclusive)
        return {
            t: {"checks": total[t], "failed": failed[t], "inconclusive": undecided[t]} for t in sorted(total)
        }


def expand_modes(modes: Sequence[str]) -> List[str]:
    expanded: List[str] = []
    for mode in modes:
        names = SUITE_MODES if mode == "all" else (mode,)
        for name in names:
            if name not in SUITE_MODES:
                raise ValueError(f"Unknown verification mode '{name}', expected 'all' or one of {SUITE_MODES}")
            if name not in expanded:
                expanded.append(name)
    return expanded


def _guarded(theorem: str, n: MultiIndex, func: Callable[[], List[TheoremCheck]]) -> List[TheoremCheck]:
    """Run one verifier; library errors become failed checks instead of aborting the sweep."""
    try:
        return func()
    except MopucError as e:
        logger.warning(f"{theorem} for n=({n}) could not be evaluated: {e.message}")
        return [TheoremCheck(theorem, False, n, failures=[e.message], evidence=e.to_detail())]


class VerificationAgent:
    """Runs the zero and normality theorems over an index sweep."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.threads = self.settings.threads
        self.tol_circle = self.settings.tol_circle
        self.grid_size = self.settings.phase_grid

    def _jobs(self, system: MeasureSystem, mode: str, indices: Sequence[MultiIndex], taus: Sequence[complex], seed: int):
        for n in indices:
            if mode == "phi_zeros":
                yield n, lambda n=n: [verify_thm5_1(system, n, self.tol_circle, self.grid_size, strict=False)]
            elif mode == "para":
                yield n, lambda n=n: verify_para_theorems(system, n, taus, self.tol_circle, strict=False)
            elif mode == "hp_neighbours":
                for j in range(system.r):
                    yield n, lambda n=n, j=j: [verify_hp_neighbour(system, n, j, self.grid_size, strict=False)]
            elif mode == "christoffel" and n.size > 0:
                yield n, lambda n=n: [verify_christoffel(system, n, strict=False)]
            elif mode == "chebyshev" and n.size > 0:
                yield n, lambda n=n: [verify_chebyshev(system, n, seed=seed, strict=False)]

    async def run_suite(
        self,
        system: MeasureSystem,
        max_index: int,
        taus: Sequence[complex],
        modes: Sequence[str] = ("all",),
        seed: int = 0,
        indices: Optional[Sequence[MultiIndex]] = None,
    ) -> SuiteReport:
        """Sweep ``{0..max_index}^r`` (or just ``indices`` when given) for every requested mode."""
        if system.tag not in (SystemTag.ANGELESCO, SystemTag.AT):
            raise ValueError(f"Verification needs an Angelesco or AT system, got tag '{system.tag.value}'")
        modes = expand_modes(modes)
        if indices is None:
            indices = MultiIndex.grid(system.r, max_index)
        report = SuiteReport(system.name, max_index, modes)
        semaphore = asyncio.Semaphore(self.threads)

        async def run(theorem: str, n: MultiIndex, func):
            async with semaphore:
                return await asyncio.to_thread(_guarded, theorem, n, func)

        for mode in modes:
            if mode == "chebyshev" and system.tag != SystemTag.AT:
                logger.info("Skipping the Chebyshev sign test: it applies to AT systems only")
                report.skipped.append(mode)
                continue
            theorem = _THEOREM_FOR_MODE[mode]
            jobs = list(self._jobs(system, mode, indices, taus, seed))
            logger.info(f"Verifying {theorem} on {system.name or 'system'}: {len(jobs)} jobs")
            results = await asyncio.gather(*(run(theorem, n, func) for n, func in jobs))
            for checks in results:
                report.checks.extend(checks)

        logger.info(
            f"Verification finished: {len(report.checks)} checks, {len(report.failures)} failed, "
            f"{len(report.inconclusive)} inconclusive"
        )
        return report
