"""Configuration and error types shared by the whole toolkit."""

from .config import RunConfig, Settings, configure_logging, get_run_config, get_settings, settings
from .exceptions import BudgetExceeded, HWMError, SchemaError

__all__ = [
    "RunConfig",
    "Settings",
    "configure_logging",
    "get_run_config",
    "get_settings",
    "settings",
    "BudgetExceeded",
    "HWMError",
    "SchemaError",
]
