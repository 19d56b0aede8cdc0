import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Runtime settings shared by the CLI and the suite runner."""

    tolerance: float = Field(default=1e-9, gt=0.0, description="Numerical tolerance ε used by every check.")
    seed: int = Field(default=20240601, description="Default seed for random generic elements.")
    max_split_attempts: int = Field(default=8, ge=1, description="Attempts allowed to the idempotent splitter.")
    data_dir: Path = Field(default=Path("data"), description="Directory holding the bundled inputs.")
    log_level: str = Field(default="INFO", description="Root logging level.")


def load_settings() -> Settings:
    """Loads settings from the .env file and the process environment."""
    load_dotenv()
    values = {
        "tolerance": os.getenv("DOUBLE_TOLERANCE"),
        "seed": os.getenv("DOUBLE_SEED"),
        "max_split_attempts": os.getenv("DOUBLE_MAX_SPLIT_ATTEMPTS"),
        "data_dir": os.getenv("DOUBLE_DATA_DIR"),
        "log_level": os.getenv("DOUBLE_LOG_LEVEL"),
    }
    return Settings(**{k: v for k, v in values.items() if v is not None})
