import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

# Only load .env if it exists (for local development)
# In Vercel/production, use environment variables directly
from dotenv import load_dotenv
env_path = Path(__file__).parent.parent / ".env"
if env_path.exists():
    load_dotenv(dotenv_path=env_path)
else:
    load_dotenv(override=False)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    """Runtime knobs read from GABOR_* environment variables."""

    model_config = ConfigDict(frozen=True)

    threads: int = Field(default=1, ge=1, description="Worker cap for atlas and residual sweeps")
    log_level: str = Field(default="INFO")
    audit_points: int = Field(default=257, ge=2, description="Per-band audit samples in construct_dual")
    audit_tol: float = Field(default=1e-8, gt=0, description="Audit residual tolerance, relative to b")
    max_curve_index: int = Field(default=6, ge=1)
    prop_vi_cap: int = Field(default=64, ge=1, description="Largest p tried for a = k/p in the atlas")
    epsilon_max_halvings: int = Field(default=64, ge=1)


_ENV_NAMES = {
    "threads": "GABOR_THREADS",
    "log_level": "GABOR_LOG_LEVEL",
    "audit_points": "GABOR_AUDIT_POINTS",
    "audit_tol": "GABOR_AUDIT_TOL",
    "max_curve_index": "GABOR_MAX_CURVE_INDEX",
    "prop_vi_cap": "GABOR_PROP_VI_CAP",
    "epsilon_max_halvings": "GABOR_EPSILON_MAX_HALVINGS",
}


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    values = {field: os.environ[name] for field, name in _ENV_NAMES.items() if os.environ.get(name)}
    return Settings.model_validate(values)


def configure_logging(level: Optional[str] = None) -> None:
    """Install one stream handler on the root logger."""
    level_name = (level or get_settings().log_level).upper()
    root = logging.getLogger()
    if not any(getattr(h, "_gabor", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._gabor = True
        root.addHandler(handler)
    root.setLevel(getattr(logging, level_name, logging.INFO))
