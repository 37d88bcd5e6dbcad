# src/hypercube/config.py
from __future__ import annotations

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# 2^24 complex doubles is 256 MiB; nothing above that is allowed
HARD_DIMENSION_CAP = 24
# searches climb over 2^n coefficients per restart
HARD_SEARCH_DIMENSION_CAP = 10


class Settings(BaseSettings):
    app_title: str = Field("Hypercube Toolkit API", alias="APP_TITLE")
    app_version: str = Field("0.1.0", alias="APP_VERSION")
    debug: bool = Field(False, alias="DEBUG")
    log_level: str = Field("INFO", alias="LOG_LEVEL")

    tolerance: float = Field(1e-10, alias="HC_TOLERANCE")
    threads: int = Field(1, alias="HC_THREADS")
    seed: int = Field(0, alias="HC_SEED")
    dimension_cap: int = Field(HARD_DIMENSION_CAP, alias="HC_DIMENSION_CAP")
    search_dimension_cap: int = Field(10, alias="HC_SEARCH_DIMENSION_CAP")
    certify_dimension_cap: int = Field(8, alias="HC_CERTIFY_DIMENSION_CAP")

    allowed_origins_raw: str = Field("*", alias="CORS_ALLOWED_ORIGINS")
    allowed_origins: list[str] = []

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
    )

    @model_validator(mode="after")
    def _post_process(self) -> "Settings":
        raw = (self.allowed_origins_raw or "*").strip()
        if raw == "*":
            self.allowed_origins = ["*"]
        else:
            self.allowed_origins = [o.strip() for o in raw.split(",") if o.strip()]

        if not 0 <= self.dimension_cap <= HARD_DIMENSION_CAP:
            raise ValueError(
                f"HC_DIMENSION_CAP must lie in [0, {HARD_DIMENSION_CAP}]. "
                f"Got: {self.dimension_cap}"
            )
        search_limit = min(self.dimension_cap, HARD_SEARCH_DIMENSION_CAP)
        if not 1 <= self.search_dimension_cap <= search_limit:
            raise ValueError(
                f"HC_SEARCH_DIMENSION_CAP must lie in [1, {search_limit}]. "
                f"Got: {self.search_dimension_cap}"
            )
        if not 1 <= self.certify_dimension_cap <= self.dimension_cap:
            raise ValueError(
                "HC_CERTIFY_DIMENSION_CAP must lie in [1, HC_DIMENSION_CAP]. "
                f"Got: {self.certify_dimension_cap}"
            )
        if not self.tolerance >= 0.0:
            raise ValueError(f"HC_TOLERANCE must be nonnegative. Got: {self.tolerance}")
        if self.threads < 1:
            raise ValueError(f"HC_THREADS must be at least 1. Got: {self.threads}")
        return self


settings = Settings()
