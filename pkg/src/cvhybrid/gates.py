"""Symplectic matrices of the one- and two-mode gates used by the circuits.

Constructors return matrices in qqpp ordering of the gate's own modes, i.e.
``[q]``/``[p]`` for one mode and ``[q1, q2, p1, p2]`` for two modes.  The
two-mode matrices are first written in the interleaved ``[q1, p1, q2, p2]``
basis (the natural basis for the mode-block form) and permuted.

Conventions match the Heisenberg action ``U^dag X U = S X`` of

* ``one_mode_squeeze(r)``: ``exp(r (a^dag^2 - a^2) / 2)``
* ``beam_splitter(phi)``: ``exp(phi (a^dag b - a b^dag))``
* ``two_mode_squeeze(r)``: ``exp(r (a^dag b^dag - a b))``
* ``phase_rotation(theta)``: ``exp(-i theta a^dag a)``

so that a state's covariance evolves as ``M -> S M S^T``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .gaussian import mode_indices


@functools.lru_cache(maxsize=None)
def _interleave_perm(n_modes: int) -> np.ndarray:
    # position k of the qqpp vector holds interleaved component perm[k]
    perm = np.concatenate([2 * np.arange(n_modes), 2 * np.arange(n_modes) + 1])
    perm.setflags(write=False)
    return perm


def interleaved_to_qqpp(S: np.ndarray) -> np.ndarray:
    """Re-express a matrix given in ``[q1, p1, q2, p2, ...]`` ordering in qqpp ordering."""
    S = np.asarray(S)
    perm = _interleave_perm(S.shape[0] // 2)
    return S[np.ix_(perm, perm)]


def qqpp_to_interleaved(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S)
    perm = _interleave_perm(S.shape[0] // 2)
    out = np.empty_like(S)
    out[np.ix_(perm, perm)] = S
    return out


def phase_rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def one_mode_squeeze(r: float) -> np.ndarray:
    return np.diag([np.exp(r), np.exp(-r)])


def beam_splitter(phi: float) -> np.ndarray:
    """Beam splitter mixing two modes by angle ``phi``.

    In the interleaved basis this is ``R(phi) (x) I_2`` with ``R`` the real
    rotation ``[[cos, sin], [-sin, cos]]`` on the mode index.
    """
    c, s = np.cos(phi), np.sin(phi)
    rot = np.array([[c, s], [-s, c]])
    return interleaved_to_qqpp(np.kron(rot, np.eye(2)))


def two_mode_squeeze(r: float) -> np.ndarray:
    """Two-mode squeezer: ``q1 -> cosh r q1 + sinh r q2``, ``p1 -> cosh r p1 - sinh r p2``."""
    ch, sh = np.cosh(r), np.sinh(r)
    sz = np.diag([1.0, -1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    # interleaved basis: mode index (x) quadrature index
    S = ch * np.eye(4) + sh * np.kron(sx, sz)
    return interleaved_to_qqpp(S)


def embed(local: np.ndarray, modes, n_modes: int) -> np.ndarray:
    """Place a ``2k x 2k`` gate on ``modes`` of an ``n_modes`` system (identity elsewhere)."""
    local = np.asarray(local, dtype=float)
    idx = mode_indices(modes, n_modes)
    if local.shape != (idx.size, idx.size):
        raise ValueError(f"gate of shape {local.shape} does not act on {idx.size // 2} modes")
    S = np.eye(2 * n_modes)
    S[np.ix_(idx, idx)] = local
    return S


@dataclass(frozen=True)
class GateParams:
    """Random parameters for one circuit site: phase ``theta``, splitter angle ``phi``, squeezing ``r``."""

    theta: float | np.ndarray
    phi: float | np.ndarray
    r: float | np.ndarray


def sample_gate_params(rng: np.random.Generator, size=None, r_max: float = 1.0) -> GateParams:
    """Draw ``theta, phi ~ U[0, 2 pi)`` and ``r ~ U[0, r_max]``."""
    theta = rng.uniform(0.0, 2 * np.pi, size)
    phi = rng.uniform(0.0, 2 * np.pi, size)
    r = rng.uniform(0.0, r_max, size)
    return GateParams(theta, phi, r)
