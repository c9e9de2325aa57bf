from pydantic import Field
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    LOG_FILENAME: str = "run.log"

    # Reproducibility
    DEFAULT_SEED: int = Field(default=0, ge=0)
    DEFAULT_JOBS: int = Field(default=1, ge=1)

    # Assignment solver
    FEASIBILITY_TOL: float = 1e-9
    MARGINAL_FLOOR: float = 1e-6
    ORACLE_MAX_ROWS: int = 10
    ORACLE_MAX_GROUPS: int = 4

    # Monte Carlo
    MC_SHARDS: int = Field(default=4, ge=1)

    # Run artifacts
    METRICS_FILENAME: str = "metrics.jsonl"
    PARAMS_FILENAME: str = "params.json"
    WARNINGS_FILENAME: str = "warnings.json"

    PROJECT_NAME: str = "worstoff-dro"
    VERSION: str = "1.0.0"

    class Config:
        env_file = ".env"
        env_prefix = "WDRO_"
        case_sensitive = True
        extra = "ignore"


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
