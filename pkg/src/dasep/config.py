"""Resource caps, overridable through environment variables.

The caps exist to turn runaway computations into clean errors instead of
multi-hour hangs: the symbolic solver refuses state spaces above the state
cap, and both solvers abort if any intermediate polynomial exceeds the
total-degree cap.  Callers can pass explicit caps to the solver functions;
these defaults (and the DASEP_STATE_CAP / DASEP_DEGREE_CAP environment
variables) apply when they don't.
"""

import os

DEFAULT_DEGREE_CAP = 64
DEFAULT_SYMBOLIC_STATE_CAP = 400
DEFAULT_POINT_STATE_CAP = 100_000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def degree_cap() -> int:
    return _env_int("DASEP_DEGREE_CAP", DEFAULT_DEGREE_CAP)


def symbolic_state_cap() -> int:
    return _env_int("DASEP_STATE_CAP", DEFAULT_SYMBOLIC_STATE_CAP)


def point_state_cap() -> int:
    return _env_int("DASEP_POINT_STATE_CAP", DEFAULT_POINT_STATE_CAP)
