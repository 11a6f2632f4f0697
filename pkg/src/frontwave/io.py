"""Artifact output and re-loading.

A finished run produces a directory with ``front.csv``, ``trace.csv``,
``field.dat``, ``diagnostics.json`` (when checks ran), and ``manifest.json``
tying the pieces together with the configuration echo and the continuation
history.  All floating-point values are written with 17 significant digits so
they round-trip exactly.
"""
from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .config import config_from_dict
from .coupler import ResidualNorms, StageRecord, TravelingWave
from .errors import ConfigurationError
from .front import Forcing, FrontProfile, front_derivatives, front_residual
from .kinetics import truncate_kinetics
from .temperature import StripGrid, TemperatureField

__all__ = [
    "write_solution",
    "write_failure_manifest",
    "write_rows_csv",
    "write_field_csv",
    "read_field",
    "read_columns",
    "load_wave",
]

MANIFEST_FORMAT = "frontwave-manifest-v1"

FRONT_COLUMNS = ("y", "psi", "psi_y", "forcing", "residual")
TRACE_COLUMNS = ("y", "theta", "reaction")


def _fmt(value) -> str:
    return f"{float(value):.17g}"


def write_rows_csv(path, header, rows):
    """Write a small numeric table; non-finite entries become empty cells."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif cell is None or (isinstance(cell, float) and not np.isfinite(cell)):
                cells.append("")
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            else:
                cells.append(_fmt(cell))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


def write_field_csv(path, field: TemperatureField):
    """Write one row per grid node: mapped-strip abscissa, transverse
    coordinate, and field value."""
    grid = field.grid
    rows = []
    for i, x in enumerate(grid.x_nodes):
        for j, y in enumerate(grid.y_nodes):
            rows.append((x, y, field.values[i, j]))
    write_rows_csv(path, ("x", "y", "v"), rows)


def _stage_entry(record: StageRecord) -> dict:
    gap = record.speed_gap
    return {
        "truncation": record.truncation,
        "speed": record.speed,
        "sweeps": record.sweeps,
        "last_update": record.last_update,
        "omega": record.omega,
        "floor_inactive": record.floor_inactive,
        "speed_gap": gap if np.isfinite(gap) else None,
    }


def _write_manifest(outdir: Path, payload: dict):
    payload = {
        "format": MANIFEST_FORMAT,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        **payload,
    }
    (outdir / "manifest.json").write_text(json.dumps(payload, indent=2) + "\n")


def write_solution(outdir, wave: TravelingWave, config_echo: dict):
    """Write the full artifact set for a converged wave."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = wave.grid
    y = grid.y_nodes

    psi = wave.psi.values
    slope, _ = front_derivatives(wave.psi)
    residual = front_residual(wave.psi, wave.speed, wave.forcing)
    rows = zip(y, psi, slope, wave.forcing.values, residual)
    write_rows_csv(outdir / "front.csv", FRONT_COLUMNS, rows)

    kin = truncate_kinetics(wave.kinetics, wave.final_truncation)
    reaction = kin.evaluate(np.maximum(wave.theta, 0.0))
    write_rows_csv(
        outdir / "trace.csv", TRACE_COLUMNS, zip(y, wave.theta, reaction)
    )

    header = f"{grid.nx} {grid.ny} {_fmt(grid.depth)}"
    np.savetxt(
        outdir / "field.dat", wave.field.values, fmt="%.17g", header=header,
        comments="",
    )

    artifacts = ["front.csv", "trace.csv", "field.dat"]
    diagnostics_passed = None
    if wave.report is not None:
        (outdir / "diagnostics.json").write_text(
            json.dumps(wave.report.as_dict(), indent=2) + "\n"
        )
        artifacts.append("diagnostics.json")
        diagnostics_passed = wave.report.passed

    _write_manifest(
        outdir,
        {
            "status": "converged",
            "speed": wave.speed,
            "final_truncation": wave.final_truncation,
            "floor_inactive": wave.floor_inactive,
            "stop_reason": wave.stop_reason,
            "grid": {"nx": grid.nx, "ny": grid.ny, "depth": grid.depth},
            "residuals": {
                "front": wave.residuals.front,
                "outer": wave.residuals.outer,
                "trace_deviation": wave.residuals.trace_deviation,
            },
            "stages": [_stage_entry(rec) for rec in wave.history],
            "diagnostics_passed": diagnostics_passed,
            "artifacts": artifacts,
            "config": config_echo,
        },
    )


def write_failure_manifest(outdir, config_echo: dict, error: Exception):
    """Record a run that did not converge (best effort, for post-mortems)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_manifest(
        outdir,
        {
            "status": "failed",
            "reason": str(error),
            "config": config_echo,
        },
    )


def read_columns(path, expected_header) -> dict:
    """Read one of the CSV artifacts back into named columns."""
    path = Path(path)
    with path.open() as handle:
        header = handle.readline().strip().split(",")
    if tuple(header) != tuple(expected_header):
        raise ConfigurationError(f"{path}: unexpected columns {header}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(header):
        raise ConfigurationError(f"{path}: wrong column count")
    return {name: data[:, k] for k, name in enumerate(header)}


def read_field(path):
    """Read ``field.dat`` back as ``(grid, values)``."""
    path = Path(path)
    with path.open() as handle:
        parts = handle.readline().split()
    if len(parts) != 3:
        raise ConfigurationError(f"{path}: malformed header")
    nx, ny, depth = int(parts[0]), int(parts[1]), float(parts[2])
    values = np.loadtxt(path, skiprows=1, ndmin=2)
    try:
        grid = StripGrid(nx=nx, ny=ny, depth=depth)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if values.shape != (nx + 1, ny):
        raise ConfigurationError(f"{path}: data shape {values.shape} mismatch")
    return grid, values


def load_wave(outdir):
    """Reconstruct a wave (without its report) from a run directory.

    Returns:
        Tuple ``(wave, config, manifest)``.
    """
    outdir = Path(outdir)
    manifest_path = outdir / "manifest.json"
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("format") != MANIFEST_FORMAT:
        raise ConfigurationError(f"{manifest_path}: unrecognized manifest format")
    if manifest.get("status") != "converged":
        raise ConfigurationError(
            f"{manifest_path}: stored run did not converge; nothing to diagnose"
        )
    config = config_from_dict(manifest["config"])

    grid = StripGrid(
        nx=manifest["grid"]["nx"],
        ny=manifest["grid"]["ny"],
        depth=manifest["grid"]["depth"],
    )
    front_cols = read_columns(outdir / "front.csv", FRONT_COLUMNS)
    trace_cols = read_columns(outdir / "trace.csv", TRACE_COLUMNS)
    field_grid, values = read_field(outdir / "field.dat")
    if (field_grid.nx, field_grid.ny) != (grid.nx, grid.ny):
        raise ConfigurationError("field.dat does not match the manifest grid")

    speed = float(manifest["speed"])
    field = TemperatureField(grid=grid, values=values, speed=speed)
    history = tuple(
        StageRecord(
            truncation=entry["truncation"],
            speed=entry["speed"],
            sweeps=entry["sweeps"],
            last_update=entry["last_update"],
            omega=entry["omega"],
            floor_inactive=entry["floor_inactive"],
            speed_gap=np.inf if entry["speed_gap"] is None else entry["speed_gap"],
        )
        for entry in manifest["stages"]
    )
    residuals = ResidualNorms(**manifest["residuals"])
    wave = TravelingWave(
        speed=speed,
        psi=FrontProfile(front_cols["psi"]),
        theta=trace_cols["theta"],
        forcing=Forcing(front_cols["forcing"]),
        field=field,
        grid=grid,
        kinetics=config.kinetics,
        rate=config.rate,
        final_truncation=int(manifest["final_truncation"]),
        floor_inactive=bool(manifest["floor_inactive"]),
        stop_reason=manifest["stop_reason"],
        converged=True,
        history=history,
        residuals=residuals,
    )
    return wave, config, manifest
