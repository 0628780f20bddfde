import functools
import logging
import time

import click

from config import settings
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def require_known_order_groups(func):
    """Decorator guarding constructors of known-order groups."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if not settings.known_order_groups_allowed:
            logger.error(f"❌ {func.__name__} refused: known-order groups disabled in {settings.environment}")
            raise ConfigurationError(
                "Known-order test groups are disabled; set UOG_ENABLE_KNOWN_ORDER_GROUPS=true outside production"
            )
        return func(*args, **kwargs)
    return wrapper


def log_command(command_name: str):
    """Log start, completion time and failure of a CLI command."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            logger.info(f"🚀 {command_name} started")
            started = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except click.exceptions.Exit as e:
                elapsed = time.perf_counter() - started
                logger.info(f"🏁 {command_name} exited with code {e.exit_code} after {elapsed:.3f}s")
                raise
            except Exception as e:
                logger.error(f"❌ {command_name} failed after {time.perf_counter() - started:.3f}s: {e}")
                raise
            logger.info(f"✅ {command_name} finished in {time.perf_counter() - started:.3f}s")
            return result
        return wrapper
    return decorator


def log_duration(label: str):
    """Log wall-clock duration of a long-running service call at INFO level."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            started = time.perf_counter()
            result = func(*args, **kwargs)
            logger.info(f"📊 {label} took {time.perf_counter() - started:.3f}s")
            return result
        return wrapper
    return decorator
