"""Cross-check of the covariance engine against the Fock-space oracle.

Random two-mode operation sequences are run through both simulators and the
covariance matrices and single-mode Renyi-2 entropies compared.  Sequences
are drawn until the Gaussian mean photon number stays below ``max_photons``
at every intermediate step, which keeps the oracle inside its cutoff caps.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .channels import imaginary_time_number, project_vacuum
from .fock import converged_run
from .gates import beam_splitter, one_mode_squeeze, phase_rotation, two_mode_squeeze
from .gaussian import GaussianState, apply_symplectic, renyi_entropy, vacuum_state

GATES = ("phase", "squeeze", "beamsplitter", "twomode")
CHANNELS = ("project", "beta")
TOLERANCE = 1e-5

_SYMPLECTIC = {
    "phase": phase_rotation,
    "squeeze": one_mode_squeeze,
    "beamsplitter": beam_splitter,
    "twomode": two_mode_squeeze,
}


def apply_op(state: GaussianState, op) -> GaussianState:
    """Apply one ``(name, modes, param)`` op in the oracle's vocabulary to a Gaussian state."""
    name, modes, param = op
    if name in _SYMPLECTIC:
        return apply_symplectic(state, _SYMPLECTIC[name](param), modes)
    if name == "project":
        return project_vacuum(state, modes[0])
    if name == "beta":
        return imaginary_time_number(state, modes[0], param)
    raise ValueError(f"unknown op {name!r}")


def run_gaussian(n_modes: int, ops) -> tuple:
    """Final state and the largest mean photon number seen along the way."""
    state = vacuum_state(n_modes)
    peak = 0.0
    for op in ops:
        state = apply_op(state, op)
        peak = max(peak, 0.5 * (np.trace(state.cov) - n_modes))
    return state, peak


def random_op(rng: np.random.Generator, n_modes: int = 2):
    name = str(rng.choice(GATES + CHANNELS))
    if name in ("beamsplitter", "twomode"):
        modes = tuple(int(m) for m in rng.choice(n_modes, 2, replace=False))
    else:
        modes = (int(rng.integers(n_modes)),)
    if name in ("phase", "beamsplitter"):
        param = float(rng.uniform(0, 2 * np.pi))
    elif name in ("squeeze", "twomode"):
        param = float(rng.uniform(0, 1))
    elif name == "beta":
        param = float(rng.uniform(0, 1))
    else:
        param = None
    return name, modes, param


def random_sequence(rng: np.random.Generator, n_modes: int = 2, length=(6, 12), max_photons: float = 1.5):
    """A sequence containing every gate type whose photon number stays below ``max_photons``."""
    while True:
        n_ops = int(rng.integers(length[0], length[1] + 1))
        ops = [random_op(rng, n_modes) for _ in range(n_ops)]
        if not set(GATES) <= {op[0] for op in ops}:
            continue
        if run_gaussian(n_modes, ops)[1] <= max_photons:
            return ops


@dataclass
class VerifyReport:
    """Worst residuals over the suite; ``rows`` holds one
    ``(index, n_ops, cov_residual, entropy_residual, cutoff, converged)`` per sequence."""

    n_sequences: int
    seed: int
    tolerance: float
    max_cov_residual: float
    max_entropy_residual: float
    unconverged: int
    worst_sequence: list = field(default_factory=list)
    rows: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return (self.unconverged == 0 and self.max_cov_residual < self.tolerance
                and self.max_entropy_residual < self.tolerance)

    def to_dict(self) -> dict:
        out = asdict(self)
        del out["rows"]
        out["passed"] = self.passed
        return out


def oracle_equivalence(n_sequences: int = 200, seed: int = 0, n_modes: int = 2,
                       tolerance: float = TOLERANCE, max_photons: float = 1.5) -> VerifyReport:
    rng = np.random.default_rng(seed)
    worst_cov, worst_ent, worst_score = 0.0, 0.0, -1.0
    worst_ops, unconverged, rows = [], 0, []
    regions = [(k,) for k in range(n_modes)]
    for k in range(n_sequences):
        ops = random_sequence(rng, n_modes, max_photons=max_photons)
        gauss, _ = run_gaussian(n_modes, ops)
        oracle = converged_run(n_modes, ops, regions)
        unconverged += not oracle.converged
        cov_res = float(np.max(np.abs(gauss.cov - oracle.cov)))
        ent_res = max(abs(renyi_entropy(gauss, r) - oracle.renyi2[r]) for r in regions)
        rows.append((k, len(ops), cov_res, ent_res, oracle.cutoff, oracle.converged))
        worst_cov = max(worst_cov, cov_res)
        worst_ent = max(worst_ent, ent_res)
        if max(cov_res, ent_res) > worst_score:
            worst_score = max(cov_res, ent_res)
            worst_ops = [[name, list(modes), param] for name, modes, param in ops]
    return VerifyReport(n_sequences, seed, tolerance, worst_cov, worst_ent, unconverged, worst_ops, rows)
