"""
Tests for configuration settings.
"""
import pytest
from pydantic import ValidationError
from src.config.settings import Settings


def test_default_settings():
    """Test default configuration values."""
    settings = Settings()

    assert settings.app_name == "MoritaKit"
    assert settings.app_version == "0.1.0"
    assert settings.host == "0.0.0.0"
    assert settings.port == 8000
    assert settings.field_prime == 7
    assert settings.default_cutoff == 64


def test_settings_from_env(monkeypatch):
    """Test settings loaded from environment variables."""
    monkeypatch.setenv("APP_NAME", "Test App")
    monkeypatch.setenv("DEFAULT_CUTOFF", "12")
    monkeypatch.setenv("DEBUG", "true")
    monkeypatch.setenv("FIELD_PRIME", "11")

    settings = Settings()

    assert settings.app_name == "Test App"
    assert settings.default_cutoff == 12
    assert settings.debug is True
    assert settings.field_prime == 11


def test_effective_depth_defaults_to_cutoff(monkeypatch):
    """Test that the resolution depth falls back to the cutoff."""
    monkeypatch.setenv("DEFAULT_CUTOFF", "20")
    assert Settings().effective_depth == 20

    monkeypatch.setenv("DEFAULT_DEPTH", "5")
    assert Settings().effective_depth == 5


def test_invalid_field_settings(monkeypatch):
    """Test that non-prime characteristics and unknown field kinds are rejected."""
    monkeypatch.setenv("FIELD_PRIME", "8")
    with pytest.raises(ValidationError):
        Settings()

    monkeypatch.setenv("FIELD_PRIME", "7")
    monkeypatch.setenv("FIELD_KIND", "complex")
    with pytest.raises(ValidationError):
        Settings()


def test_invalid_cutoff(monkeypatch):
    """Test that the cutoff must be positive."""
    monkeypatch.setenv("DEFAULT_CUTOFF", "0")
    with pytest.raises(ValidationError):
        Settings()


def test_report_settings():
    """Test report-related settings."""
    settings = Settings()

    assert settings.report_indent == 2
    assert settings.fixtures_dir == "fixtures"
    assert settings.gproj_window_floor == 8
