"""Outer solver: couples the front relaxation to the temperature field.

The traveling wave is a fixed point of the loop

    trace -> forcing H = R(y) * K(trace) -> front (speed, profile) ->
    temperature field -> trace,

iterated with optional damping on the profile.  Because the reaction rate may
vanish in the cold limit, the loop runs on a floored rate law ``max(K, 1/n)``
and doubles ``n`` until the floor no longer binds along the front and the
speed stops moving between stages.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from . import diagnostics as _diagnostics
from .errors import ConfigurationError, NonConvergenceError
from .front import (
    Forcing,
    FrontProfile,
    FrontRelaxParams,
    compute_speed,
    front_residual,
    normalize_front,
    relax_front,
)
from .kinetics import (
    CombustionRate,
    KineticsModel,
    PiecewiseConstantRate,
    truncate_kinetics,
)
from .temperature import StripGrid, TemperatureField, solve_temperature

__all__ = [
    "SolverConfig",
    "PicardState",
    "StageRecord",
    "ResidualNorms",
    "TravelingWave",
    "resolve_grid",
    "build_forcing",
    "picard_step",
    "solve_at_truncation",
    "solve_traveling_wave",
]

logger = logging.getLogger("frontwave")

_EDGE_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    """Everything needed to set up and run the coupled solver.

    ``nx`` and ``depth`` may be left unset, in which case the strip is sized
    from the kinetics: deep enough for the cold tail of the slowest admissible
    wave, fine enough in X that the fastest truncation stage keeps a centered-
    scheme-friendly advection cell number.
    """

    kinetics: KineticsModel
    rate: CombustionRate
    ny: int = 64
    nx: Optional[int] = None
    depth: Optional[float] = None
    damping: float = 1.0
    outer_tol: float = 1e-6
    max_outer_iter: int = 200
    front_tol: float = 1e-8
    front_cfl: float = 0.25
    front_max_iter: int = 1_000_000
    initial_truncation: int = 1
    max_stages: int = 24
    run_diagnostics: bool = True

    def __post_init__(self):
        if not isinstance(self.kinetics, KineticsModel):
            raise ConfigurationError("kinetics must be a KineticsModel")
        if not isinstance(self.rate, CombustionRate):
            raise ConfigurationError("rate must be a CombustionRate")
        if (
            not isinstance(self.ny, (int, np.integer))
            or self.ny < 8
            or (self.ny & (self.ny - 1)) != 0
        ):
            raise ConfigurationError("ny must be a power of two >= 8")
        if self.nx is not None and (
            not isinstance(self.nx, (int, np.integer)) or self.nx < 16
        ):
            raise ConfigurationError("nx must be an integer >= 16 when given")
        if self.depth is not None and not (
            np.isfinite(self.depth) and self.depth > 0.0
        ):
            raise ConfigurationError("depth must be positive when given")
        if not (0.0 < self.damping <= 1.0):
            raise ConfigurationError("damping must lie in (0, 1]")
        if not (np.isfinite(self.outer_tol) and self.outer_tol > 0.0):
            raise ConfigurationError("outer_tol must be positive")
        if self.max_outer_iter < 1:
            raise ConfigurationError("max_outer_iter must be >= 1")
        if not (np.isfinite(self.front_tol) and self.front_tol > 0.0):
            raise ConfigurationError("front_tol must be positive")
        if not (0.0 < self.front_cfl <= 0.5):
            raise ConfigurationError("front_cfl must lie in (0, 0.5]")
        if self.front_max_iter < 1:
            raise ConfigurationError("front_max_iter must be >= 1")
        if (
            not isinstance(self.initial_truncation, (int, np.integer))
            or self.initial_truncation < 1
        ):
            raise ConfigurationError("initial_truncation must be an integer >= 1")
        if self.max_stages < 1:
            raise ConfigurationError("max_stages must be >= 1")

    @property
    def relax_params(self) -> FrontRelaxParams:
        return FrontRelaxParams(
            cfl=self.front_cfl, tol=self.front_tol, max_iter=self.front_max_iter
        )


class PicardState(NamedTuple):
    """One iterate of the outer fixed-point loop."""

    speed: float
    psi: FrontProfile
    theta: np.ndarray
    field: Optional[TemperatureField]


@dataclass(frozen=True)
class StageRecord:
    """Summary of one truncation stage of the continuation."""

    truncation: int
    speed: float
    sweeps: int
    last_update: float
    omega: float
    floor_inactive: bool
    speed_gap: float


@dataclass(frozen=True)
class ResidualNorms:
    """Convergence measures quoted with a finished wave."""

    front: float
    outer: float
    trace_deviation: float


@dataclass(frozen=True, eq=False)
class TravelingWave:
    """A converged traveling wave with its audit trail."""

    speed: float
    psi: FrontProfile
    theta: np.ndarray
    forcing: Forcing
    field: TemperatureField
    grid: StripGrid
    kinetics: KineticsModel
    rate: CombustionRate
    final_truncation: int
    floor_inactive: bool
    stop_reason: str
    converged: bool
    history: tuple
    residuals: ResidualNorms
    report: Optional["_diagnostics.DiagnosticsReport"] = None

    def __post_init__(self):
        arr = np.asarray(self.theta, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "theta", arr)


def _stage_speed_cap(config: SolverConfig) -> float:
    _, r_hi = config.rate.bounds
    floor0 = 1.0 / config.initial_truncation
    return r_hi * max(config.kinetics.supremum, floor0)


def resolve_grid(config: SolverConfig) -> StripGrid:
    """Materialize the strip grid, sizing unset dimensions from the models.

    Raises:
        ConfigurationError: when the kinetics admit no propagation, a
            piecewise rate's edges fall off the transverse grid, or the
            requested X resolution cannot carry the fastest stage.
    """
    r_lo, _ = config.rate.bounds
    integral = config.kinetics.unit_integral()
    speed_floor = r_lo * integral
    if speed_floor <= 0.0:
        raise ConfigurationError(
            "kinetics integral over the unit interval vanishes; no wave exists"
        )
    depth = config.depth if config.depth is not None else 10.0 / speed_floor
    cap = _stage_speed_cap(config)
    if config.nx is not None:
        nx = int(config.nx)
    else:
        nx = max(512, 32 * int(np.ceil(0.6 * cap * depth / 32.0)))
    grid = StripGrid(nx=nx, ny=config.ny, depth=depth)
    if cap * grid.hx > 2.0:
        raise ConfigurationError(
            f"advection cell number {cap * grid.hx:.3g} exceeds 2 at the "
            "fastest truncation stage; increase nx"
        )
    if isinstance(config.rate, PiecewiseConstantRate):
        for edge in config.rate.edges:
            if abs(edge * grid.ny - round(edge * grid.ny)) > _EDGE_ALIGN_TOL:
                raise ConfigurationError(
                    f"striation edge {edge} does not sit on the transverse grid"
                )
    return grid


def build_forcing(kinetics: KineticsModel, rate: CombustionRate, theta) -> Forcing:
    """Forcing ``H_j = R(y_j) * K(theta_j)`` at the transverse nodes.

    Tiny negative trace values (linear-solver noise) are clipped; anything
    below ``-1e-10`` is treated as a genuine domain error.
    """
    arr = np.asarray(theta, dtype=float)
    if arr.min() < 0.0:
        if arr.min() < -1e-10:
            raise ValueError("trace temperatures are significantly negative")
        arr = np.maximum(arr, 0.0)
    nodes = np.arange(arr.size) / arr.size
    return Forcing(rate.evaluate(nodes) * kinetics.evaluate(arr))


def picard_step(
    state: PicardState,
    kinetics: KineticsModel,
    rate: CombustionRate,
    grid: StripGrid,
    omega: float,
    relax_params: FrontRelaxParams,
) -> PicardState:
    """One damped sweep of the outer loop."""
    forcing = build_forcing(kinetics, rate, state.theta)
    speed, relaxed = relax_front(forcing, state.psi, relax_params)
    blended = (1.0 - omega) * state.psi.values + omega * relaxed.values
    psi_new = normalize_front(blended)
    field = solve_temperature(psi_new, speed, grid)
    return PicardState(speed=speed, psi=psi_new, theta=field.trace, field=field)


def initial_state(config: SolverConfig, grid: StripGrid) -> PicardState:
    """Flat front, uniform hot trace, and the a-priori speed cap."""
    return PicardState(
        speed=_stage_speed_cap(config),
        psi=FrontProfile(np.zeros(grid.ny)),
        theta=np.ones(grid.ny),
        field=None,
    )


def solve_at_truncation(
    config: SolverConfig,
    n: int,
    grid: Optional[StripGrid] = None,
    start: Optional[PicardState] = None,
    omega: Optional[float] = None,
):
    """Iterate the outer loop to a fixed point for the floor-``1/n`` law.

    Returns:
        Tuple ``(state, sweeps, updates)`` where ``updates`` lists the
        per-sweep convergence measure ``max|dpsi| + |dc|``.

    Raises:
        NonConvergenceError: on a non-finite update or an exhausted budget;
            the error's history carries the recent ``(speed, update)`` pairs
            so a limit cycle's candidates are all visible.
    """
    kinetics = truncate_kinetics(config.kinetics, n)
    rate = config.rate
    if grid is None:
        grid = resolve_grid(config)
    state = start if start is not None else initial_state(config, grid)
    omega = config.damping if omega is None else omega
    params = config.relax_params
    updates = []
    speeds = []
    for sweep in range(1, config.max_outer_iter + 1):
        new = picard_step(state, kinetics, rate, grid, omega, params)
        delta = float(
            np.max(np.abs(new.psi.values - state.psi.values))
            + abs(new.speed - state.speed)
        )
        updates.append(delta)
        speeds.append(new.speed)
        state = new
        if not np.isfinite(delta):
            raise NonConvergenceError(
                "outer iteration diverged",
                iterations=sweep,
                residual=delta,
                history=list(zip(speeds[-8:], updates[-8:])),
            )
        if delta < config.outer_tol:
            return state, sweep, updates
    raise NonConvergenceError(
        "outer iteration exhausted its sweep budget",
        iterations=config.max_outer_iter,
        residual=updates[-1],
        history=list(zip(speeds[-8:], updates[-8:])),
    )


def _finalize(state, kinetics_n, config, rate, grid):
    """Re-anchor speed, forcing, and trace on one self-consistent state.

    Two undamped sweeps shrink the one-sweep lag left by the stopping test,
    after which the quoted forcing is rebuilt from the final trace and the
    quoted speed from that forcing, making the speed identity exact.
    """
    params = config.relax_params
    for _ in range(2):
        state = picard_step(state, kinetics_n, rate, grid, 1.0, params)
    forcing = build_forcing(kinetics_n, rate, state.theta)
    speed = compute_speed(forcing, state.psi)
    return state, forcing, speed


def solve_traveling_wave(config: SolverConfig) -> TravelingWave:
    """Run the full truncation continuation and return the converged wave.

    Raises:
        ConfigurationError: for inconsistent setup (via grid resolution).
        NonConvergenceError: if a stage fails even with repeated damping
            cuts, or the stage budget runs out before the speed settles.
    """
    grid = resolve_grid(config)
    base = config.kinetics
    rate = config.rate
    state = initial_state(config, grid)
    n = config.initial_truncation
    prev_speed = None
    history = []
    stop_reason = None
    floor_inactive = False

    for _ in range(config.max_stages):
        omega = config.damping
        entry = state
        for attempt in range(4):
            try:
                state, sweeps, updates = solve_at_truncation(
                    config, n, grid=grid, start=entry, omega=omega
                )
                break
            except NonConvergenceError as exc:
                if attempt == 3:
                    raise NonConvergenceError(
                        f"stage n={n} failed to converge even at damping "
                        f"{omega:.3g}",
                        iterations=exc.iterations,
                        residual=exc.residual,
                        history=exc.history,
                    ) from exc
                omega *= 0.5
                logger.info(
                    "stage n=%d retrying with damping %.3g", n, omega
                )

        floor = 1.0 / n
        base_on_trace = base.evaluate(np.maximum(state.theta, 0.0))
        floor_inactive = bool(np.min(base_on_trace) >= floor)
        gap = (
            abs(state.speed - prev_speed) if prev_speed is not None else np.inf
        )
        history.append(
            StageRecord(
                truncation=n,
                speed=state.speed,
                sweeps=sweeps,
                last_update=updates[-1],
                omega=omega,
                floor_inactive=floor_inactive,
                speed_gap=gap,
            )
        )
        logger.info(
            "stage n=%d: speed %.12g after %d sweeps (floor inactive: %s)",
            n,
            state.speed,
            sweeps,
            floor_inactive,
        )

        if base.evaluate(0.0) >= floor:
            # The floor changes nothing anywhere, so this stage already
            # solved the untruncated problem.
            stop_reason = "truncation is a no-op for this rate law"
            floor_inactive = True
            break
        if gap < config.outer_tol:
            stop_reason = (
                "stage speeds settled; floor inactive along the front"
                if floor_inactive
                else "stage speeds settled with the floor still active"
            )
            break
        prev_speed = state.speed
        n *= 2
    else:
        raise NonConvergenceError(
            "continuation exhausted its stage budget before the speed settled",
            iterations=config.max_stages,
            residual=history[-1].speed_gap if history else None,
            history=[rec.speed for rec in history][-8:],
        )

    kinetics_n = truncate_kinetics(base, n)
    state, forcing, speed = _finalize(state, kinetics_n, config, rate, grid)
    floor_inactive = bool(
        np.min(base.evaluate(np.maximum(state.theta, 0.0))) >= 1.0 / n
    )
    front_res = float(np.max(np.abs(front_residual(state.psi, speed, forcing))))
    residuals = ResidualNorms(
        front=front_res,
        outer=history[-1].last_update,
        trace_deviation=abs(float(np.mean(state.theta)) - 1.0),
    )
    wave = TravelingWave(
        speed=speed,
        psi=state.psi,
        theta=state.theta,
        forcing=forcing,
        field=state.field,
        grid=grid,
        kinetics=base,
        rate=rate,
        final_truncation=n,
        floor_inactive=floor_inactive,
        stop_reason=stop_reason,
        converged=True,
        history=tuple(history),
        residuals=residuals,
    )
    if config.run_diagnostics:
        wave = replace(wave, report=_diagnostics.run_all(wave))
    return wave
