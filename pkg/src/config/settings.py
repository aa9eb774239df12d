"""
Configuration settings for the MoritaKit toolkit.
"""
from typing import Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from sympy import isprime


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False
    )

    # Application Configuration
    app_name: str = "MoritaKit"
    app_version: str = "0.1.0"
    debug: bool = False
    log_level: str = "INFO"
    log_dir: str = "logs"

    # Server Configuration
    host: str = "0.0.0.0"
    port: int = 8000

    # Field Configuration
    field_kind: str = "rational"
    field_prime: int = 7

    # Computation Configuration
    default_cutoff: int = Field(default=64, description="Resolution depth before giving up")
    default_depth: Optional[int] = None
    gproj_window_floor: int = 8
    iso_search_limit: int = 2**20
    slow_operation_seconds: float = 1.0

    # Report Configuration
    report_indent: int = 2
    fixtures_dir: str = "fixtures"

    @field_validator("field_kind")
    @classmethod
    def validate_field_kind(cls, v: str) -> str:
        if v not in ("rational", "prime"):
            raise ValueError(f"unknown field kind: {v}")
        return v

    @field_validator("field_prime")
    @classmethod
    def validate_field_prime(cls, v: int) -> int:
        if not isprime(v):
            raise ValueError(f"field_prime must be prime, got {v}")
        return v

    @field_validator("default_cutoff")
    @classmethod
    def validate_cutoff(cls, v: int) -> int:
        if v < 1:
            raise ValueError("default_cutoff must be at least 1")
        return v

    @property
    def effective_depth(self) -> int:
        return self.default_depth if self.default_depth is not None else self.default_cutoff


# Global settings instance
settings = Settings()

def get_settings() -> Settings:
    """获取全局配置实例"""
    return settings
