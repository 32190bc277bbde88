"""
Configuration module for the HWM toolkit.

This module manages evaluation budgets, numerical tolerances, seeds and
logging. It provides a centralized configuration system: a process-wide
``Settings`` instance read from the environment (and an optional ``.env``
file), and per-run ``RunConfig`` values derived from it.

Author: HWM Toolkit Team
Date: 2026
"""

import logging
from typing import Any, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()

ENGINE_CHOICES = ("auto", "naive", "support", "factored", "gamma_id")


class Settings(BaseSettings):
    """
    Application settings and configuration.

    Every field can be overridden by an environment variable of the same
    name, e.g. ``HWM_SEED=7 python -m hwm selftest``.
    """

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Application Settings
    APP_NAME: str = "HWM Toolkit"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Evaluation Settings
    HWM_SEED: int = 0
    HWM_ENGINE: str = "auto"
    HWM_TERM_BUDGET: int = 10**8  # enumerated terms for naive/support engines
    HWM_INTERMEDIATE_BUDGET: int = 10**7  # entries of any intermediate factor
    HWM_TOLERANCE: float = 1e-8
    HWM_WORKERS: int = 1

    # Construction Settings
    HWM_BASIS_RETRIES: int = 64
    HWM_NONZERO_THRESHOLD: float = 1e-6

    # Tiling Settings
    HWM_TILING_MAX_VERTICES: int = 12
    HWM_TILING_SWEEP_MAX_VERTICES: int = 4
    HWM_TILING_SWEEP_MAX_TEMPLATE_VERTICES: int = 4


class RunConfig(BaseModel):
    """
    Per-run evaluation parameters.

    Built from the global settings by :func:`get_run_config`; command-line
    flags and test code override individual fields.
    """

    engine: str = Field("auto", description="Evaluation engine")
    term_budget: int = Field(10**8, gt=0, description="Max enumerated terms")
    intermediate_budget: int = Field(10**7, gt=0, description="Max entries of a contraction intermediate")
    tolerance: float = Field(1e-8, gt=0.0, le=1e-2, description="Relative comparison tolerance")
    workers: int = Field(1, ge=1, description="Parallel workers for enumeration engines")
    seed: int = Field(0, description="Seed for every random construction")

    @field_validator("engine")
    @classmethod
    def validate_engine(cls, v: str) -> str:
        """Validate that the engine is one of the known engines."""
        if v not in ENGINE_CHOICES:
            raise ValueError(f"engine must be one of {', '.join(ENGINE_CHOICES)}")
        return v


# Global settings instance
settings = Settings()


def get_settings() -> Settings:
    """
    Get application settings.

    Returns:
        Settings: The application settings instance
    """
    return settings


def update_setting(key: str, value: Any) -> None:
    """
    Update a setting value at runtime.

    Args:
        key: The setting key to update
        value: The new value
    """
    if hasattr(settings, key):
        setattr(settings, key, value)
    else:
        raise ValueError(f"Setting '{key}' does not exist")


def get_run_config(**overrides: Optional[Any]) -> RunConfig:
    """
    Build a run configuration from the settings plus explicit overrides.

    Args:
        **overrides: RunConfig fields; ``None`` values are ignored

    Returns:
        RunConfig: The validated run configuration
    """
    values = {
        "engine": settings.HWM_ENGINE,
        "term_budget": settings.HWM_TERM_BUDGET,
        "intermediate_budget": settings.HWM_INTERMEDIATE_BUDGET,
        "tolerance": settings.HWM_TOLERANCE,
        "workers": settings.HWM_WORKERS,
        "seed": settings.HWM_SEED,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**values)


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure root logging for command-line use.

    Args:
        level: Log level name; defaults to ``LOG_LEVEL``
    """
    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def is_development() -> bool:
    """
    Check if the toolkit is running in debug mode.

    Returns:
        bool: True if in debug mode
    """
    return settings.DEBUG
