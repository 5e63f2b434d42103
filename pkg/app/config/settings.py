"""Application configuration settings."""
from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings, overridable through EDGEWALK_* environment variables."""

    # Application
    APP_NAME: str = "Edge-Walk Discrepancy"
    VERSION: str = "0.1.0"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    LOG_FILE: Optional[Path] = None

    # Parallel runs (bench, oracle blocks)
    THREADS: int = 4

    # Numerical tolerances
    EPS_BOX: float = 1e-9
    EPS_SLACK: float = 1e-9
    ORTHO_TOL: float = 1e-8

    # Walk defaults
    BIG_C: float = 4.0
    K1: float = 16.0 / 3.0
    DEFAULT_DELTA: float = 0.08
    WALK_BLOCK_STEPS: int = 64
    CHECK_INVARIANTS: bool = False

    # Oracle
    BRUTE_FORCE_MAX_N: int = 24

    model_config = SettingsConfigDict(env_prefix="EDGEWALK_", env_file=".env", env_file_encoding="utf-8", extra='ignore')


# Create instance of settings
settings = Settings()
