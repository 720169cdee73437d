import json
import logging
from typing import Awaitable, Callable, Dict, List, Optional

from pydantic import ValidationError

from agents.scan_agent import ScanAgent
from agents.verification_agent import VerificationAgent
from config import Settings, get_settings
from core.errors import ConfigParse, RootOnCircle
from core.laurent import MultiIndex
from core.measure import MeasureSystem
from core.moments import cache_for, dump_rows
from core.para import build_para, para_residuals, symmetric_report, trig_residuals, with_trig
from core.presets import angelesco_catalog, preset
from core.solver import sharp_star_gap, solve_hp, solve_hp_star, solve_phi, solve_phi_sharp
from core.zeros import ZeroReport, arc_index, phase, zero_report
from routers.artifacts import ArtifactWriter
from schemas.inputs import RunConfig, SystemDescription
from schemas.responses import (
    CheckDocument,
    CounterexampleDocument,
    ParaDocument,
    PhaseSummary,
    SolveDocument,
    VerifyDocument,
    ZeroSummary,
    ZerosDocument,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 2


def load_system(config: RunConfig) -> MeasureSystem:
    if config.preset is not None:
        return preset(config.preset)
    try:
        with open(config.system_path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as e:
        raise ConfigParse(f"Cannot read system description {config.system_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigParse(f"System description {config.system_path} is not valid JSON: {e}") from e
    try:
        description = SystemDescription.model_validate(raw)
    except ValidationError as e:
        raise ConfigParse(
            f"Invalid system description {config.system_path}",
            {"errors": json.loads(e.json())},
        ) from e
    return description.to_system()


def _index(config: RunConfig, system: MeasureSystem, name: str = "n") -> MultiIndex:
    idx = config.index(name)
    if idx is None:
        raise ConfigParse(f"--{name} is required for '{config.command}'")
    if len(idx) != system.r:
        raise ConfigParse(f"--{name} {idx} has {len(idx)} entries but the system has r = {system.r}")
    return idx


def _label(system: MeasureSystem) -> str:
    return system.name or "custom"


async def handle_moments(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    cache = cache_for(system)
    for j in range(system.r):
        for two_t in range(-2 * config.max_frequency, 2 * config.max_frequency + 1):
            cache.moment(j, two_t)
    rows = [r for r in dump_rows(cache) if abs(r[1]) <= 2 * config.max_frequency]
    writer.write_csv("moments", ["component", "two_t", "re", "im"], rows)
    return EXIT_OK


async def handle_solve(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    n = _index(config, system)
    phi = solve_phi(system, n)
    sharp = solve_phi_sharp(system, n)
    document = {
        "phi": SolveDocument.from_result("solve", _label(system), phi, n).model_dump(),
        "phi_sharp": SolveDocument.from_result("solve", _label(system), sharp, n).model_dump(),
        "description": system.describe(),
    }
    writer.write_json("solve", document)
    return EXIT_OK


async def handle_hp(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    n = _index(config, system, "n")
    m = _index(config, system, "m")
    hp = solve_hp(system, n, m)
    star = solve_hp_star(system, m, n)
    document = {
        "hp": SolveDocument.from_result("hp", _label(system), hp, n, m).model_dump(),
        "hp_star_swapped": SolveDocument.from_result("hp", _label(system), star, m, n).model_dump(),
        "sharp_star_gap": sharp_star_gap(system, n, m),
        "description": system.describe(),
    }
    writer.write_json("hp", document)
    return EXIT_OK


async def handle_para(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    n = _index(config, system)
    phi = solve_phi(system, n).poly
    symmetric = symmetric_report(system, n)
    documents = []
    for tau in config.tau_values():
        p = with_trig(build_para(phi, tau), system.branch)
        documents.append(
            ParaDocument.build(
                _label(system),
                n,
                p,
                para_residuals(system, p, n),
                trig_residuals(system, p, n),
                symmetric,
            ).model_dump()
        )
    writer.write_json("para", {"para": documents})
    return EXIT_OK


def _root_rows(system: MeasureSystem, source: str, tau: Optional[complex], report: ZeroReport) -> List[list]:
    rows = []
    for z in report.roots:
        j = arc_index(system, z) if z != 0 else None
        rows.append(
            [
                source,
                tau.real if tau is not None else None,
                tau.imag if tau is not None else None,
                z.real,
                z.imag,
                abs(z),
                system.branch.arg(z) if z != 0 else None,
                report.classify(z),
                j + 1 if j is not None else None,
            ]
        )
    return rows


async def handle_zeros(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    n = _index(config, system)
    phi = solve_phi(system, n).poly
    report = zero_report(system, phi, config.tol_circle, two_low=-n.size)
    document = ZerosDocument(system=_label(system), n=list(n), phi_zeros=ZeroSummary.from_report(report))
    rows = _root_rows(system, "phi", None, report)
    phase_rows: List[tuple] = []
    try:
        ph = phase(report.roots, config.grid)
        document.phase = PhaseSummary.from_report(ph)
        phase_rows = ph.rows()
    except RootOnCircle as e:
        logger.warning(f"Phase not available: {e.message}")
        document.phase_error = e.message

    for tau in config.tau_values():
        para_report = zero_report(system, build_para(phi, tau).x, config.tol_circle, two_low=-(n.size + 1))
        document.para_zeros[f"{tau.real:.17g},{tau.imag:.17g}"] = ZeroSummary.from_report(para_report)
        rows.extend(_root_rows(system, "para", tau, para_report))

    writer.write_json("zeros", document)
    writer.write_csv(
        "zeros",
        ["source", "tau_re", "tau_im", "re", "im", "abs", "arg", "classification", "arc"],
        rows,
    )
    if phase_rows:
        writer.write_csv("zeros-phase", ["theta", "psi"], phase_rows)
    return EXIT_OK


async def handle_verify(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    indices = [_index(config, system)] if config.n is not None else None
    agent = VerificationAgent(settings)
    report = await agent.run_suite(
        system, config.max_index, config.tau_values(), [config.mode], seed=config.seed, indices=indices
    )
    checks = [CheckDocument.from_check(c) for c in report.checks]
    document = VerifyDocument(
        system=_label(system),
        max_index=config.max_index,
        modes=report.modes,
        passed=report.passed,
        summary=report.summary(),
        skipped=report.skipped,
        checks=checks,
        description=system.describe(),
    )
    writer.write_json("verify", document)
    writer.write_csv(
        "verify",
        ["theorem", "n", "m", "tau_re", "tau_im", "passed", "failures", "inconclusive"],
        [
            [
                c.theorem,
                ",".join(map(str, c.n)),
                ",".join(map(str, c.m)) if c.m is not None else None,
                c.tau[0] if c.tau else None,
                c.tau[1] if c.tau else None,
                c.passed,
                "; ".join(c.failures),
                c.inconclusive,
            ]
            for c in checks
        ],
    )
    if not report.passed:
        for failed in report.failures:
            logger.error(f"{failed.theorem} violated for n=({failed.n}): {'; '.join(failed.failures)}")
        return EXIT_VERDICT
    return EXIT_OK


async def handle_scan(config: RunConfig, system: MeasureSystem, writer: ArtifactWriter, settings: Settings) -> int:
    entries = await ScanAgent(settings).normality_scan(system, config.max_index, config.mode)
    header = [f"n{j + 1}" for j in range(system.r)]
    if config.mode != "phi":
        header += [f"m{j + 1}" for j in range(system.r)]
    header += ["sigma_min", "sigma_max", "ratio", "verdict"]
    rows = []
    for e in entries:
        row = list(e.n) + (list(e.m) if e.m is not None else [])
        rows.append(row + [e.report.sigma_min, e.report.sigma_max, e.report.ratio, e.report.verdict.value])
    writer.write_csv("scan", header, rows)
    return EXIT_OK


async def handle_counterexample(
    config: RunConfig, system: Optional[MeasureSystem], writer: ArtifactWriter, settings: Settings
) -> int:
    catalog = [system] if system is not None else angelesco_catalog()
    report = await ScanAgent(settings).counterexample_scan(catalog, config.max_index)
    writer.write_csv(
        "counterexample",
        ["system", "n", "verdict", "max_abs_root", "outside_disk"],
        [[r.system, ",".join(map(str, r.n)), r.verdict, r.max_abs_root, r.outside_disk] for r in report.rows],
    )
    writer.write_json(
        "counterexample",
        CounterexampleDocument(
            systems=[s.name for s in catalog],
            max_index=config.max_index,
            rows=len(report.rows),
            findings=[
                {"system": r.system, "n": list(r.n), "max_abs_root": r.max_abs_root} for r in report.findings
            ],
        ),
    )
    return EXIT_OK


HANDLERS: Dict[str, Callable[..., Awaitable[int]]] = {
    "moments": handle_moments,
    "solve": handle_solve,
    "hp": handle_hp,
    "para": handle_para,
    "zeros": handle_zeros,
    "verify": handle_verify,
    "scan": handle_scan,
    "counterexample": handle_counterexample,
}


async def run(config: RunConfig, settings: Optional[Settings] = None) -> int:
    """Execute one command and write its reports; returns the process exit status."""
    settings = (settings or get_settings()).model_copy(
        update={"tol_circle": config.tol_circle, "phase_grid": config.grid}
    )
    logger.info(f"Running '{config.command}'")
    has_system = config.preset is not None or config.system_path is not None
    system = load_system(config) if has_system else None
    writer = ArtifactWriter(config.output_dir)
    status = await HANDLERS[config.command](config, system, writer, settings)
    logger.info(f"'{config.command}' finished with status {status}; {len(writer.written)} file(s) written")
    return status
