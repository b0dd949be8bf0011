"""Gauged hermitian-P phase-space simulation of the Kerr oscillator."""

from ._core import (
    Amplitudes,
    ConfigError,
    CutoffError,
    DomainError,
    Error,
    Gauge,
    GuardTripped,
    IoError,
    KernelWeight,
    Observable,
    TrajectoryState,
    __version__,
    drift,
    estimate,
    exact_amplitude,
    exact_y,
    fock_ratios,
    fock_y,
    invert_amplitude,
    kernel_trace,
    map_amplitudes,
    read_series_csv,
    run,
    run_csv,
    selftest,
    state_from_amplitudes,
    step,
    sweep,
    trace_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
