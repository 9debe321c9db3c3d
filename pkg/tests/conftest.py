"""Shared fixtures.

The expensive objects here are the symbolic stationary solutions: several
test modules interrogate the same vectors (closed forms, lumping images,
ratio identities, homomesy), so systems and solutions are cached once per
session behind accessor fixtures.
"""

import pytest

from dasep.chains import BUILDERS
from dasep.stationary import solve_stationary_symbolic

# the acceptance grid tops out at 540 states, and elimination intermediates
# at the p = 3 points exceed the default degree guard
STATE_CAP = 600
DEGREE_CAP = 256

# every (n, p, q) the acceptance criteria quantify over
GRID = [
    (n, p, q)
    for n in range(2, 7)
    for p in range(1, 4)
    for q in range(1, 4)
    if n > q
]

_systems = {}
_solutions = {}


def get_system(kind, n, p, q):
    key = (kind, n, p, q)
    if key not in _systems:
        _systems[key] = BUILDERS[kind](n, p, q)
    return _systems[key]


def get_solution(kind, n, p, q):
    key = (kind, n, p, q)
    if key not in _solutions:
        _solutions[key] = solve_stationary_symbolic(
            get_system(kind, n, p, q),
            state_cap=STATE_CAP,
            degree_cap=DEGREE_CAP,
        )
    return _solutions[key]


@pytest.fixture(scope="session")
def systems():
    return get_system


@pytest.fixture(scope="session")
def solved():
    return get_solution
