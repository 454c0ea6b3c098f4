"""
Runtime settings read from the environment (and a local .env file).
"""

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from .errors import InvalidConfig

DEFAULT_SEED = 20240601
DEFAULT_BOOTSTRAP_B = 200
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_CPS1988_PATH = "data/CPS1988.csv"


def _read_int(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InvalidConfig(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise InvalidConfig(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    """Defaults shared by the CLI and the runner scripts."""
    seed: int = DEFAULT_SEED
    bootstrap_b: int = DEFAULT_BOOTSTRAP_B
    log_level: str = DEFAULT_LOG_LEVEL
    workers: int = 1
    cps1988_path: Path = Path(DEFAULT_CPS1988_PATH)

    @classmethod
    def from_env(cls, dotenv: bool = True) -> "Settings":
        """
        Build settings from SHARE_* environment variables.

        Args:
            dotenv: Load a .env file first (does not override set variables)

        Returns:
            Settings with defaults filled in for unset variables
        """
        if dotenv:
            load_dotenv()

        return cls(
            seed=_read_int("SHARE_SEED", DEFAULT_SEED, minimum=0),
            bootstrap_b=_read_int("SHARE_BOOTSTRAP_B", DEFAULT_BOOTSTRAP_B, minimum=2),
            log_level=os.getenv("SHARE_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
            workers=_read_int("SHARE_WORKERS", 1, minimum=1),
            cps1988_path=Path(os.getenv("SHARE_CPS1988_PATH", DEFAULT_CPS1988_PATH)),
        )
