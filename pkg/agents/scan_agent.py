import asyncio
import logging
from typing import List, Optional, Sequence

from config import Settings, get_settings
from core.laurent import MultiIndex
from core.measure import MeasureSystem
from core.solver import ScanEntry, scan_entry, scan_pairs
from core.zeros import CounterexampleReport, counterexample_row

logger = logging.getLogger(__name__)


class ScanAgent:
    """Runs normality and counterexample sweeps with bounded thread concurrency."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.threads = self.settings.threads

    async def _bounded(self, semaphore: asyncio.Semaphore, func, *args):
        async with semaphore:
            return await asyncio.to_thread(func, *args)

    async def normality_scan(self, system: MeasureSystem, max_index: int, mode: str = "phi") -> List[ScanEntry]:
        pairs = scan_pairs(system, max_index, mode)
        logger.info(f"Normality scan ({mode}) on {system.name or 'system'}: {len(pairs)} entries")
        semaphore = asyncio.Semaphore(self.threads)
        try:
            entries = await asyncio.gather(
                *(self._bounded(semaphore, scan_entry, system, n, m) for n, m in pairs)
            )
        except Exception as e:
            logger.error(f"Normality scan failed: {str(e)}", exc_info=True)
            raise
        failing = [e for e in entries if not e.report.is_normal]
        if failing:
            logger.warning(f"{len(failing)} of {len(entries)} entries are not normal")
        return list(entries)

    async def counterexample_scan(self, catalog: Sequence[MeasureSystem], max_index: int) -> CounterexampleReport:
        jobs = [
            (system, n)
            for system in catalog
            for n in MultiIndex.grid(system.r, max_index)
            if n.size > 0
        ]
        logger.info(f"Counterexample scan over {len(catalog)} systems, {len(jobs)} indices")
        semaphore = asyncio.Semaphore(self.threads)
        rows = await asyncio.gather(*(self._bounded(semaphore, counterexample_row, s, n) for s, n in jobs))
        report = CounterexampleReport(tuple(rows))
        if report.findings:
            logger.warning(f"Found {len(report.findings)} instance(s) of Phi_n with a zero outside the closed disk")
        else:
            logger.info("No zero outside the closed disk found")
        return report
