"""
⚙️ CONFIGURATION TESTS
Settings defaults, UOG_ environment overrides, startup validation and the guard decorators.
"""

import logging
import os
import sys
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))


class TestSettings:
    """Settings model"""

    def test_defaults(self):
        """Defaults match the documented values"""
        from config import Settings

        with patch.dict(os.environ, {}, clear=True):
            s = Settings(_env_file=None)
        assert s.environment == "development"
        assert s.miller_rabin_rounds == 64
        assert s.poe_lambda == 128
        assert s.jacobian_cofactor_bound == 60
        assert s.semismooth_max_bits == 96
        assert s.enable_divisor_compression is True
        assert s.enable_known_order_groups is None

    def test_environment_override(self):
        """UOG_-prefixed variables override fields"""
        from config import Settings

        with patch.dict(os.environ, {"UOG_POE_LAMBDA": "64", "UOG_LOG_LEVEL": "debug",
                                     "UOG_ENABLE_DIVISOR_COMPRESSION": "false"}):
            s = Settings(_env_file=None)
        assert s.poe_lambda == 64
        assert s.log_level == "DEBUG"
        assert s.enable_divisor_compression is False

    def test_rejects_invalid_values(self):
        """Weak primality testing, unknown log levels and zero bounds fail validation"""
        from config import Settings

        for env in ({"UOG_MILLER_RABIN_ROUNDS": "8"}, {"UOG_LOG_LEVEL": "LOUD"},
                    {"UOG_HUNT_MEMORY_CAP": "0"}, {"UOG_SEMISMOOTH_WORKERS": "0"}):
            with patch.dict(os.environ, env):
                with pytest.raises(ValidationError):
                    Settings(_env_file=None)

    @pytest.mark.parametrize("environment, flag, allowed", [
        ("development", None, True),
        ("test", None, True),
        ("production", None, False),
        ("production", True, True),
        ("development", False, False),
    ])
    def test_known_order_groups_allowed(self, environment, flag, allowed):
        """Test-only groups follow the environment unless the flag is set"""
        from config import Settings

        s = Settings(_env_file=None, environment=environment, enable_known_order_groups=flag)
        assert s.known_order_groups_allowed is allowed
        assert s.is_production is (environment == "production")


class TestValidateConfiguration:
    """Startup checks run by the CLI"""

    def test_default_configuration_is_valid(self):
        """Out of the box there is nothing to report"""
        from config import validate_configuration

        is_valid, errors = validate_configuration()
        assert is_valid
        assert errors == []

    def test_collects_errors(self):
        """Every problem is listed"""
        from config import settings, validate_configuration

        with patch.object(settings, "poe_lambda", 8), \
                patch.object(settings, "semismooth_max_bits", 256), \
                patch.object(settings, "environment", "production"), \
                patch.object(settings, "enable_known_order_groups", True):
            is_valid, errors = validate_configuration()
        assert not is_valid
        assert len(errors) == 3
        assert any("UOG_POE_LAMBDA" in e for e in errors)

    def test_summary_lines(self):
        """The debug summary names the environment"""
        from config import configuration_summary

        lines = configuration_summary()
        assert lines[0].startswith("Environment: ")
        assert any(line.startswith("Known-order groups allowed") for line in lines)


class TestDecorators:
    """Guard and logging decorators"""

    def test_require_known_order_groups(self):
        """Guarded constructors raise ConfigurationError when disabled"""
        from config import settings
        from utils.decorators import require_known_order_groups
        from utils.errors import ConfigurationError

        @require_known_order_groups
        def build(n):
            return n * 2

        assert build(21) == 42
        assert build.__name__ == "build"
        with patch.object(settings, "environment", "production"):
            with pytest.raises(ConfigurationError):
                build(21)

    def test_log_command_reraises(self):
        """Failures are logged and propagated unchanged"""
        from utils.decorators import log_command, log_duration

        @log_command("boom")
        def boom():
            raise KeyError("x")

        @log_duration("fast")
        def fast():
            return 7

        with pytest.raises(KeyError):
            boom()
        assert fast() == 7

    def test_log_command_click_exit(self, caplog):
        """A deliberate exit code is logged as an exit, not a failure."""
        import click

        from utils.decorators import log_command

        @log_command("reject")
        def reject():
            raise click.exceptions.Exit(1)

        with caplog.at_level(logging.INFO, logger="utils.decorators"):
            with pytest.raises(click.exceptions.Exit):
                reject()
        messages = [record.getMessage() for record in caplog.records]
        assert any("reject exited with code 1" in m for m in messages)
        assert not any("failed" in m for m in messages)
