import os
import logging
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1, description="Worker threads for sweeps")
    log_level: str = Field("INFO", description="Root logging level")
    output_dir: str = Field("reports", description="Directory for JSON/CSV reports")
    tol_circle: float = Field(1e-8, gt=0, description="Distance from |z| = 1 counted as on the circle")
    phase_grid: int = Field(4096, ge=2, description="Samples of the phase function")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level '{v}'")
        return level


ENV_FIELDS = {
    "MOPUC_THREADS": "threads",
    "MOPUC_LOG_LEVEL": "log_level",
    "MOPUC_OUTPUT_DIR": "output_dir",
    "MOPUC_TOL_CIRCLE": "tol_circle",
    "MOPUC_PHASE_GRID": "phase_grid",
}


@lru_cache()
def get_settings() -> Settings:
    """Settings from the environment (and ``.env``); unset variables keep their defaults."""
    load_dotenv()
    values = {field: os.environ[var] for var, field in ENV_FIELDS.items() if os.environ.get(var)}
    settings = Settings(**values)
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings
