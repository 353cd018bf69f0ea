"""Shared fixtures: the solver runs once per session and everything reuses it."""

import time

import pytest

from fastgates.chain import TrapConfig, two_ion_modes
from fastgates.schemes import _SCHEME_CACHE, build_scheme

SCHEME_KEYS = (("frag", 2), ("frag", 3), ("frag", 5), ("frag", 10),
               ("gzc", 1), ("gzc", 2), ("gzc", 5), ("gzc", 10))


@pytest.fixture(scope="session")
def trap() -> TrapConfig:
    return TrapConfig()


@pytest.fixture(scope="session")
def modes(trap):
    return two_ion_modes(trap)


@pytest.fixture(scope="session")
def solved(modes):
    """All eight reference schemes plus the wall time the solves took.

    The cache is cleared first so the recorded time is honest solver
    work, not a replay, no matter which test runs first.
    """
    _SCHEME_CACHE.clear()
    t0 = time.monotonic()
    schemes = {key: build_scheme(key[0], key[1], modes) for key in SCHEME_KEYS}
    elapsed = time.monotonic() - t0
    return {"schemes": schemes, "solve_seconds": elapsed}


@pytest.fixture(scope="session")
def schemes(solved) -> dict:
    return solved["schemes"]
