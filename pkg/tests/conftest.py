"""Shared fixtures: the two reference waves every suite keeps coming back to.

Both solves are session-scoped and timed, so the acceptance tests can assert
their runtime budgets without re-running the solver.
"""
import time
from collections import namedtuple

import pytest

from frontwave import (
    ArrheniusKinetics,
    PiecewiseConstantRate,
    SmoothRate,
    SolverConfig,
    solve_traveling_wave,
)

TimedRun = namedtuple("TimedRun", ["wave", "elapsed"])


def timed_solve(config):
    start = time.perf_counter()
    wave = solve_traveling_wave(config)
    return TimedRun(wave, time.perf_counter() - start)


@pytest.fixture(scope="session")
def flat_config():
    """Homogeneous medium, unit-prefactor Arrhenius law, explicit grid."""
    return SolverConfig(
        kinetics=ArrheniusKinetics(prefactor=1.0, activation=1.0),
        rate=SmoothRate(mean=1.0),
        ny=64,
        nx=512,
        depth=40.0,
    )


@pytest.fixture(scope="session")
def flat_run(flat_config):
    return timed_solve(flat_config)


@pytest.fixture(scope="session")
def flat_wave(flat_run):
    return flat_run.wave


@pytest.fixture(scope="session")
def striated_config():
    """Two half-period layers with rates 0.5 and 1.5, automatic grid."""
    return SolverConfig(
        kinetics=ArrheniusKinetics(prefactor=1.0, activation=1.0),
        rate=PiecewiseConstantRate(edges=(0.0, 0.5), values=(0.5, 1.5)),
        ny=64,
    )


@pytest.fixture(scope="session")
def striated_run(striated_config):
    return timed_solve(striated_config)


@pytest.fixture(scope="session")
def striated_wave(striated_run):
    return striated_run.wave
