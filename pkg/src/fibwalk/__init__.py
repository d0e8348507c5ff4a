"""Fibonacci quantum walk on the line, its momentum-space pulses and the classical trace map."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .schedule import CoinSchedule, fibonacci_number, fibonacci_word, schedule_for_horizon
from .walk import (
    CoinAngle,
    WalkerState,
    WalkResult,
    capacity_for,
    evolve,
    make_cyclic_state,
    make_localized_state,
    run_walk,
    position_distribution,
    standard_deviation,
    step,
)
from .spin import (
    MomentumState,
    SpinMatrix,
    coin_matrix,
    evolve_momentum,
    fibonacci_matrix,
    from_momentum,
    half_trace,
    to_momentum,
    word_matrix,
)
from .tracemap import (
    OrbitRecord,
    PoincareSection,
    TraceState,
    initial_condition,
    invariant,
    orbit,
    orbit_from_angles,
    poincare_section,
    trace_step,
    trace_step_inverse,
)
from .analysis import (
    DecayReport,
    FitResult,
    SeriesRecord,
    autocorrelation,
    decay_report,
    fit_power_law,
)
