"""
Runtime settings for fatdual.

Defaults are fixed constants so that every run is reproducible; the
environment may override the seed (FATDUAL_SEED) and the log level
(FATDUAL_LOG_LEVEL).
"""

import os

from pydantic import BaseModel, Field

DEFAULT_SEED = 20080101
SEED_ENV_VAR = "FATDUAL_SEED"
LOG_LEVEL_ENV_VAR = "FATDUAL_LOG_LEVEL"


class Settings(BaseModel):
    """
    Library-wide tunables.

    Every randomized operation still takes an explicit seed; these values only
    provide the defaults used by the CLI and by callers that do not care.
    """

    seed: int = Field(default=DEFAULT_SEED)
    trials: int = Field(default=4, ge=2)
    prime_floor: int = Field(default=2**31, ge=3)
    census_max_field: int = Field(default=4, ge=2)
    census_max_dim: int = Field(default=12, ge=1)
    witness_bound: int = Field(default=2, ge=0)
    probe_count: int = Field(default=20, ge=0)
    log_level: str = Field(default="WARNING")

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "Settings":
        """
        Build settings from environment variables.

        Args:
            env: Mapping to read instead of os.environ (used by tests)

        Returns:
            Settings with FATDUAL_SEED / FATDUAL_LOG_LEVEL applied when present

        Raises:
            ValueError: If FATDUAL_SEED is not an integer
        """
        source = os.environ if env is None else env
        values: dict[str, object] = {}
        raw_seed = source.get(SEED_ENV_VAR)
        if raw_seed is not None and raw_seed.strip():
            try:
                values["seed"] = int(raw_seed.strip())
            except ValueError as e:
                raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw_seed!r}") from e
        raw_level = source.get(LOG_LEVEL_ENV_VAR)
        if raw_level:
            values["log_level"] = raw_level.strip().upper()
        return cls(**values)
