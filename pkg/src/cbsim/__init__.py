"""Desk-scale simulator of a Kerr-cat-mediated controlled beam-splitter gate.

Layers, from the bottom up:

- :mod:`cbsim.operators` -- dense operator algebra on the A (x) B (x) ancilla space
- :mod:`cbsim.params` -- bare-circuit dressing and effective gate rates
- :mod:`cbsim.catbasis` -- diagonalized cat-qubit working basis
- :mod:`cbsim.gate` -- Hamiltonian assembly, drive schedules, analytic oracles
- :mod:`cbsim.lindblad` -- batched master-equation integration
- :mod:`cbsim.tomography` -- Pauli transfer matrix, chi matrix, error budget
- :mod:`cbsim.experiments` -- reproducible CSV-producing experiment drivers
- :mod:`cbsim.cli` -- the ``cbs-sim`` command
"""

from .catbasis import CatBasis, build_cat_basis
from .gate import (
    DriveSchedule,
    GateContext,
    make_context,
    sequential_schedule,
    simultaneous_schedule,
)
from .lindblad import EvolutionResult, active_kernel, evolve
from .params import BareParams, EffectiveParams, gate_timing, preset
from .tomography import ErrorBudget, PauliTransferMatrix, compute_ptm, error_budget

__version__ = "0.1.0"

__all__ = [
    "BareParams",
    "CatBasis",
    "DriveSchedule",
    "EffectiveParams",
    "ErrorBudget",
    "EvolutionResult",
    "GateContext",
    "PauliTransferMatrix",
    "active_kernel",
    "build_cat_basis",
    "compute_ptm",
    "error_budget",
    "evolve",
    "gate_timing",
    "make_context",
    "preset",
    "sequential_schedule",
    "simultaneous_schedule",
    "__version__",
]
