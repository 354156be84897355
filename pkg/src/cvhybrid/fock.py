"""Brute-force truncated Fock-space simulation of up to three modes.

This is the independent check on the covariance-matrix engine: gates are
applied as matrix exponentials of their truncated boson generators, the
non-unitary operations act directly on number-basis amplitudes, and
covariances and Renyi-2 entropies are read off the state vector.

Gate conventions (``a`` the first, ``b`` the second mode of a gate):

=================  ================================  ==========
name               unitary                           parameter
=================  ================================  ==========
``phase``          ``exp(-i theta a^dag a)``         theta
``squeeze``        ``exp(r (a^dag^2 - a^2) / 2)``    r
``beamsplitter``   ``exp(phi (a^dag b - a b^dag))``  phi
``twomode``        ``exp(r (a^dag b^dag - a b))``    r
=================  ================================  ==========

These are the unitaries whose Heisenberg action reproduces the matrices of
:mod:`cvhybrid.gates`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.sparse.linalg import expm_multiply

MAX_MODES = 3
MAX_AMPLITUDES = 2_000_000
CUTOFF_CAPS = {1: 160, 2: 120, 3: 40}
TAIL_TOL = 1e-10
CONVERGENCE_TOL = 1e-8

ONE_MODE_GATES = ("phase", "squeeze")
TWO_MODE_GATES = ("beamsplitter", "twomode")


class CutoffError(RuntimeError):
    """Raised when a truncated computation cannot be trusted."""


@dataclass
class FockState:
    """Amplitudes ``psi[n_1, ..., n_k]`` with every ``n_i <= cutoff``."""

    amps: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.amps.ndim

    @property
    def cutoff(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tail_weight(self) -> float:
        """Total probability of finding any mode in its top level."""
        prob = np.abs(self.amps) ** 2
        return float(sum(np.take(prob, -1, axis=k).sum() for k in range(self.n_modes)))


def oracle_vacuum(n_modes: int, cutoff: int) -> FockState:
    if not 1 <= n_modes <= MAX_MODES:
        raise ValueError(f"the oracle handles 1 to {MAX_MODES} modes")
    if cutoff < 4:
        raise ValueError("cutoff must be at least 4")
    if (cutoff + 1) ** n_modes > MAX_AMPLITUDES:
        raise ValueError(f"{n_modes} modes at cutoff {cutoff} exceed the amplitude cap")
    amps = np.zeros((cutoff + 1,) * n_modes, dtype=complex)
    amps[(0,) * n_modes] = 1.0
    return FockState(amps)


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1)


def _one_mode_unitary(gate: str, param: float, dim: int) -> np.ndarray:
    if gate == "phase":
        return np.diag(np.exp(-1j * param * np.arange(dim)))
    a = annihilation(dim)
    return expm(0.5 * param * (a.T @ a.T - a @ a))


def _two_mode_generator(gate: str, param: float, dim: int):
    a = sparse.csr_matrix(annihilation(dim))
    eye = sparse.identity(dim, format="csr")
    A, B = sparse.kron(a, eye), sparse.kron(eye, a)
    if gate == "beamsplitter":
        G = A.T @ B - A @ B.T
    else:
        G = A.T @ B.T - A @ B
    return (param * G).tocsr()


def _check_modes(state: FockState, modes) -> tuple:
    modes = tuple(int(m) for m in np.atleast_1d(modes))
    if any(m < 0 or m >= state.n_modes for m in modes) or len(set(modes)) != len(modes):
        raise ValueError(f"invalid modes {modes} for a {state.n_modes}-mode state")
    return modes


def oracle_apply_unitary(state: FockState, gate: str, modes, param: float) -> FockState:
    """Apply one gate from the table above to ``modes``."""
    modes = _check_modes(state, modes)
    dim = state.cutoff + 1
    if gate in ONE_MODE_GATES:
        if len(modes) != 1:
            raise ValueError(f"{gate} acts on one mode")
        U = _one_mode_unitary(gate, param, dim)
        out = np.moveaxis(np.tensordot(U, state.amps, axes=([1], [modes[0]])), 0, modes[0])
        return FockState(out)
    if gate in TWO_MODE_GATES:
        if len(modes) != 2:
            raise ValueError(f"{gate} acts on two modes")
        G = _two_mode_generator(gate, param, dim)
        moved = np.moveaxis(state.amps, modes, (0, 1))
        shape = moved.shape
        flat = moved.reshape(dim * dim, -1)
        evolved = expm_multiply(G, flat).reshape(shape)
        return FockState(np.moveaxis(evolved, (0, 1), modes))
    raise ValueError(f"unknown gate {gate!r}")


def _normalized(amps: np.ndarray, what: str) -> FockState:
    norm = np.linalg.norm(amps)
    if norm < 1e-14:
        raise CutoffError(f"{what} left a vanishing state")
    return FockState(amps / norm)


def oracle_imaginary(state: FockState, mode: int, beta: float) -> FockState:
    """``exp(-beta a^dag a)`` on ``mode``, renormalized."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    (mode,) = _check_modes(state, [mode])
    shape = [1] * state.n_modes
    shape[mode] = state.cutoff + 1
    weights = np.exp(-beta * np.arange(state.cutoff + 1)).reshape(shape)
    return _normalized(state.amps * weights, "imaginary-time evolution")


def oracle_project_zero(state: FockState, mode: int) -> FockState:
    """Post-select ``mode`` in ``|0>`` and renormalize."""
    (mode,) = _check_modes(state, [mode])
    keep = np.zeros(state.cutoff + 1)
    keep[0] = 1.0
    shape = [1] * state.n_modes
    shape[mode] = state.cutoff + 1
    return _normalized(state.amps * keep.reshape(shape), "vacuum projection")


def _ladder(amps, mode, dagger):
    dim = amps.shape[mode]
    out = np.zeros_like(amps)
    src = [slice(None)] * amps.ndim
    dst = [slice(None)] * amps.ndim
    shape = [1] * amps.ndim
    if dagger:
        # (a^dag psi)_n = sqrt(n) psi_{n-1}
        src[mode], dst[mode] = slice(0, dim - 1), slice(1, dim)
        shape[mode] = dim - 1
        out[tuple(dst)] = amps[tuple(src)] * np.sqrt(np.arange(1, dim)).reshape(shape)
    else:
        src[mode], dst[mode] = slice(1, dim), slice(0, dim - 1)
        shape[mode] = dim - 1
        out[tuple(dst)] = amps[tuple(src)] * np.sqrt(np.arange(1, dim)).reshape(shape)
    return out


def covariance_of(state: FockState) -> np.ndarray:
    """Quadrature covariance ``1/2 <{dX_i, dX_j}>`` in qqpp ordering (``hbar = 1``)."""
    psi = state.amps / state.norm
    n = state.n_modes
    qs, ps = [], []
    for k in range(n):
        a_psi = _ladder(psi, k, dagger=False)
        ad_psi = _ladder(psi, k, dagger=True)
        qs.append((a_psi + ad_psi) / np.sqrt(2))
        ps.append((a_psi - ad_psi) / (1j * np.sqrt(2)))
    vecs = np.array([v.ravel() for v in qs + ps])
    flat = psi.ravel()
    means = np.real(vecs @ flat.conj())
    gram = np.real(vecs.conj() @ vecs.T)
    cov = gram - np.outer(means, means)
    return 0.5 * (cov + cov.T)


def oracle_renyi2(state: FockState, region) -> float:
    """``-ln tr(rho_A^2)`` from the Schmidt spectrum across ``region``."""
    region = _check_modes(state, region)
    rest = tuple(k for k in range(state.n_modes) if k not in region)
    psi = np.transpose(state.amps, region + rest)
    dim_a = int(np.prod([state.amps.shape[k] for k in region]))
    s = np.linalg.svd(psi.reshape(dim_a, -1), compute_uv=False)
    w = s**2 / np.sum(s**2)
    return float(-np.log(np.sum(w**2)))


def run_sequence(n_modes: int, ops, cutoff: int) -> FockState:
    """Apply ``ops`` to the vacuum at a fixed cutoff.

    Each op is ``(name, modes, param)`` with ``name`` one of the gates above,
    ``"project"`` (vacuum projection, param ignored) or ``"beta"``.
    """
    state = oracle_vacuum(n_modes, cutoff)
    for name, modes, param in ops:
        if name == "project":
            state = oracle_project_zero(state, np.atleast_1d(modes)[0])
        elif name == "beta":
            state = oracle_imaginary(state, np.atleast_1d(modes)[0], param)
        else:
            state = oracle_apply_unitary(state, name, modes, param)
    return state


@dataclass
class OracleResult:
    """Converged oracle observables and the cutoff ladder that produced them."""

    cov: np.ndarray
    renyi2: dict
    cutoff: int
    tail_weight: float
    converged: bool
    history: list = field(default_factory=list, repr=False)


def _observables(state: FockState, regions) -> tuple:
    return covariance_of(state), {tuple(r): oracle_renyi2(state, r) for r in regions}


def converged_run(n_modes: int, ops, regions=None, start: int = 20, cap: int | None = None) -> OracleResult:
    """Run ``ops`` at cutoffs ``start, 2 start, ...`` (capped) until converged.

    Converged means the tail weight is below ``TAIL_TOL`` and every covariance
    entry and entropy moved by less than ``CONVERGENCE_TOL`` since the previous
    cutoff.  If the cap is reached first the last result is returned with
    ``converged=False``.
    """
    if regions is None:
        regions = [(k,) for k in range(n_modes)] if n_modes > 1 else []
    cap = CUTOFF_CAPS[n_modes] if cap is None else cap
    cutoffs = []
    c = start
    while c < cap:
        cutoffs.append(c)
        c *= 2
    cutoffs.append(cap)
    history = []
    prev = None
    for c in cutoffs:
        state = run_sequence(n_modes, ops, c)
        cov, ent = _observables(state, regions)
        tail = state.tail_weight()
        history.append((c, tail))
        if prev is not None:
            change = np.max(np.abs(cov - prev[0]))
            if ent:
                change = max(change, max(abs(ent[k] - prev[1][k]) for k in ent))
            if tail < TAIL_TOL and change < CONVERGENCE_TOL:
                return OracleResult(cov, ent, c, tail, True, history)
        prev = (cov, ent)
    return OracleResult(prev[0], prev[1], cutoffs[-1], tail, False, history)
