"""
config.py
---------
Environment-overridable defaults for the command-line harness. Values are
read from the process environment after loading an optional .env file;
command-line flags take precedence over anything set here.
"""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

load_dotenv()


def _env_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"{name} must be an integer, got '{raw}'") from exc
    if value < minimum:
        raise InvalidInputError(f"{name} must be >= {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    jobs: int = 1
    output_dir: str = "output"
    knn: int = 20
    t: int = 10

    @classmethod
    def from_env(cls) -> "Settings":
        settings = cls(
            jobs=_env_int("MVIW_JOBS", cls.jobs),
            output_dir=os.getenv("MVIW_OUTPUT_DIR") or cls.output_dir,
            knn=_env_int("MVIW_KNN", cls.knn),
            t=_env_int("MVIW_T", cls.t),
        )
        logger.debug("Settings: %s", settings)
        return settings
