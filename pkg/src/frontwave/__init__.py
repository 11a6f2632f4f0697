"""Traveling-wave solver for free-boundary flame fronts in striated media."""

from .config import config_from_dict, load_config
from .coupler import (
    PicardState,
    ResidualNorms,
    SolverConfig,
    StageRecord,
    TravelingWave,
    build_forcing,
    picard_step,
    resolve_grid,
    solve_at_truncation,
    solve_traveling_wave,
)
from .diagnostics import CheckResult, DiagnosticsReport, run_all
from .errors import (
    ConfigurationError,
    FrontwaveError,
    LinearSolverError,
    NonConvergenceError,
)
from .io import (
    load_wave,
    read_columns,
    read_field,
    write_failure_manifest,
    write_field_csv,
    write_rows_csv,
    write_solution,
)
from .front import (
    Forcing,
    FrontProfile,
    FrontRelaxParams,
    compute_speed,
    curvature_term,
    front_derivatives,
    front_residual,
    normalize_front,
    relax_front,
)
from .kinetics import (
    ArrheniusKinetics,
    CombustionRate,
    ConstantKinetics,
    KineticsModel,
    PiecewiseConstantRate,
    SmoothRate,
    TabulatedKinetics,
    TruncatedKinetics,
    truncate_kinetics,
)
from .temperature import (
    StripGrid,
    TemperatureField,
    assemble_system,
    extract_trace,
    gradient_energy,
    solve_temperature,
)

__version__ = "0.1.0"
