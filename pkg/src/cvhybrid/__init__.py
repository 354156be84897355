"""Hybrid unitary/measurement circuits on chains of bosonic modes.

Modules
-------
gaussian     covariance-matrix states, symplectic evolution, Renyi entropies
gates        symplectic matrices of the phase, squeeze and two-mode gates
channels     vacuum projection, general Gaussian measurement, ``exp(-beta n)``
stratified   numerically stable factorized representation for long unitary runs
circuit      the brickwork hybrid circuit and trajectory ensembles
analysis     fits and saturation estimates for entropy time series
fock         truncated Fock-space oracle for a few modes
clifford     stabilizer simulation of the clustered-qubit model
statevector  dense few-qubit oracle for the stabilizer simulator
verify       Gaussian engine vs Fock oracle cross-check
cli          ``cvhybrid`` command-line entry point
"""

from .channels import gaussian_measure, imaginary_time_number, project_vacuum
from .circuit import CircuitConfig, EnsembleSummary, TrajectoryRecord, run_ensemble, run_step, run_trajectory
from .gates import beam_splitter, embed, one_mode_squeeze, phase_rotation, sample_gate_params, two_mode_squeeze
from .gaussian import (
    GaussianState,
    apply_symplectic,
    renyi_entropy,
    symplectic_form,
    thermal_state,
    vacuum_state,
    validate_state,
    williamson_eigenvalues,
)
from .stratified import StratifiedState

__version__ = "0.1.0"

__all__ = [
    "CircuitConfig",
    "EnsembleSummary",
    "GaussianState",
    "StratifiedState",
    "TrajectoryRecord",
    "apply_symplectic",
    "beam_splitter",
    "embed",
    "gaussian_measure",
    "imaginary_time_number",
    "one_mode_squeeze",
    "phase_rotation",
    "project_vacuum",
    "renyi_entropy",
    "run_ensemble",
    "run_step",
    "run_trajectory",
    "sample_gate_params",
    "symplectic_form",
    "thermal_state",
    "two_mode_squeeze",
    "vacuum_state",
    "validate_state",
    "williamson_eigenvalues",
]
