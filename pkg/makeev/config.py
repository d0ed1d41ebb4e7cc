"""
Runtime configuration.

Settings are read from the environment (prefix ``MAKEEV_``) and from an
optional ``.env`` file in the working directory. The most important knob is
``MAKEEV_CELL_LIMIT``, the resource guard on dense coefficient arrays.
"""

from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv(override=False)

DEFAULT_CELL_LIMIT = 2 ** 27


class Settings(BaseSettings):
    """Toolkit settings; every field can be overridden as MAKEEV_<FIELD>."""

    model_config = SettingsConfigDict(env_prefix="MAKEEV_", extra="ignore")

    # Resource guard: maximum number of cells of one truncated polynomial
    cell_limit: int = Field(default=DEFAULT_CELL_LIMIT, ge=1)

    # Searches stop here unless --dmax is given (None -> BK upper bound)
    search_d_max: Optional[int] = Field(default=None, ge=1)

    # Thread pool width for grids, searches and solver restarts
    workers: int = Field(default=4, ge=1)

    # Boundary split rule: eps = boundary_eps_scale * cloud diameter
    boundary_eps_scale: float = Field(default=1e-9, gt=0)

    # Annealing schedule of the arrangement solver
    anneal_stages: int = Field(default=5, ge=1)
    anneal_factor: float = Field(default=0.2, gt=0, lt=1)
    anneal_initial_temperature: float = Field(default=0.2, gt=0)
    solver_restarts: int = Field(default=20, ge=1)

    log_level: str = "INFO"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Get or create the cached settings instance.
    Call ``get_settings.cache_clear()`` after changing the environment.
    """
    return Settings()
