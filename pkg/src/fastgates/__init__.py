"""Pulsed fast entangling gates on trapped ions: scheme timing, pulse-error
models, and state-averaged gate fidelities."""

from .chain import ModeData, TrapConfig, chain_modes, lamb_dicke, two_ion_modes
from .gatesim import (
    GateReport,
    SectorResult,
    SimulationRequest,
    basis_dim_for,
    mode_occupation_stats,
    multimode_fidelity,
    phase_space_trajectory,
    populations,
    simulate_gate,
    simulate_sector,
    state_averaged_fidelity,
)
from .pulses import (
    ErrorModel,
    Ideal,
    NonRWA,
    PulseArea,
    SectorSpace,
    TruncationOverflow,
    free_evolution,
    ideal_kick,
    nonrwa_pulse,
    pair_pulse_xi,
    rotation_fidelity,
    rotation_fidelity_quadratic,
    xi_for_rotation_infidelity,
)
from .schemes import (
    NoSolution,
    PulseScheme,
    build_scheme,
    closure_residual,
    ideal_phase,
    kick_vector,
    total_pulse_pairs,
)
from .sweeps import (
    ConfigError,
    RunConfig,
    sweep_duration,
    sweep_populations,
    sweep_xi,
    trajectory_outputs,
)

__version__ = "0.1.0"
