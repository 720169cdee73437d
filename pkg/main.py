from dotenv import load_dotenv
import argparse
import asyncio
import json
import logging
import sys
from typing import List, Optional

# Load environment variables from .env file
load_dotenv()

from pydantic import ValidationError

from config import get_settings
from core.errors import MopucError
from core.presets import list_presets
from routers import commands
from schemas.inputs import COMMANDS, RunConfig
from schemas.responses import ErrorDocument

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mopuc",
        description="Laurent multiple orthogonal polynomials on the unit circle: moments, solves, zeros and theorem checks",
    )
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--preset", help=f"Preset system ({', '.join(list_presets())})")
    source.add_argument("--system", dest="system_path", help="JSON system description")
    parser.add_argument("--n", help="Multi-index a,b,...")
    parser.add_argument("--m", help="Second multi-index a,b,... (hp)")
    parser.add_argument("--max-index", type=int, default=2, help="Sweep bound (scan, verify, counterexample)")
    parser.add_argument("--taus", default="8", help="Tau count k, or a comma list of angles / complex values")
    parser.add_argument("--tol-circle", type=float, default=None, help="Unit-circle tolerance")
    parser.add_argument("--grid", type=int, default=None, help="Phase grid size")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", dest="output_dir", default=None, help="Report directory")
    parser.add_argument("--mode", help="verify: all|phi_zeros|para|hp_neighbours|christoffel|chebyshev; scan: phi|hp_diag|hp_offdiag")
    parser.add_argument("--max-frequency", type=int, default=6, help="Largest |t| for the moments command")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as e:
        configure_logging("INFO")
        logger.error(f"Invalid MOPUC_* environment settings: {e}")
        return 1
    configure_logging(args.log_level or settings.log_level)

    values = {k: v for k, v in vars(args).items() if v is not None and k != "log_level"}
    values.setdefault("tol_circle", settings.tol_circle)
    values.setdefault("grid", settings.phase_grid)
    values.setdefault("output_dir", settings.output_dir)

    try:
        config = RunConfig(**values)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        return 1

    try:
        return asyncio.run(commands.run(config, settings))
    except MopucError as e:
        logger.error(f"{e.error_type}: {e.message}")
        if e.details:
            logger.error(json.dumps(ErrorDocument(detail=e.to_detail()).model_dump(), default=str))
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
