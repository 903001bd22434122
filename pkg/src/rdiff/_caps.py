"""Resource caps shared by the counting, sampling and experiment layers."""
import os


class CapExceededError(RuntimeError):
    """A request exceeds a configured resource cap."""


ENUM_CAP_ENV = "RDIFF_ENUM_CAP"
COUNT_CAP_ENV = "RDIFF_COUNT_CAP"

DEFAULT_ENUM_CAP = 10**6
DEFAULT_COUNT_CAP = 500_000


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return value


def enumeration_cap():
    """Maximum number of partitions an exhaustive enumeration may produce."""
    return _env_int(ENUM_CAP_ENV, DEFAULT_ENUM_CAP)


def count_cap():
    """Largest n_max accepted for a count table."""
    return _env_int(COUNT_CAP_ENV, DEFAULT_COUNT_CAP)
