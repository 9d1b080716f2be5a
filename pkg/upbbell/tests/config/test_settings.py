"""Tests for environment-driven settings."""

import pytest
from pydantic import ValidationError

from upbbell.config.settings import Settings, get_settings


class TestSettings:
    """Defaults, environment overrides and validators."""

    def test_defaults(self, monkeypatch):
        for var in ("UPBBELL_WITNESS_RESTARTS", "UPBBELL_RANK_PRIME", "UPBBELL_LOG_LEVEL"):
            monkeypatch.delenv(var, raising=False)
        settings = Settings(_env_file=None)
        assert settings.witness_restarts == 32
        assert settings.rank_prime == 2**31 - 1
        assert settings.run_log_enabled is False

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("UPBBELL_SEARCH_NODE_CAP", "500")
        monkeypatch.setenv("UPBBELL_LOG_LEVEL", "debug")
        settings = Settings(_env_file=None)
        assert settings.search_node_cap == 500
        assert settings.log_level == "DEBUG"

    def test_too_few_restarts(self, monkeypatch):
        monkeypatch.setenv("UPBBELL_WITNESS_RESTARTS", "8")
        with pytest.raises(ValidationError, match="at least 32"):
            Settings(_env_file=None)

    @pytest.mark.parametrize("prime", ["1", str(2**31)])
    def test_rank_prime_range(self, monkeypatch, prime):
        monkeypatch.setenv("UPBBELL_RANK_PRIME", prime)
        with pytest.raises(ValidationError):
            Settings(_env_file=None)

    def test_get_settings_is_a_singleton(self):
        assert get_settings() is get_settings()
