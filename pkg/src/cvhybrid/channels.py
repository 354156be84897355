"""Non-unitary Gaussian operations: projective Gaussian measurement and ``exp(-beta a^dag a)``.

Both act on covariances only.  Outcomes are post-selected (forced), which
moves the displacement but not the covariance, and displacements are never
tracked, so the updates below are outcome independent.
"""

from __future__ import annotations

import numpy as np

from .gaussian import GaussianState, mode_indices, williamson_eigenvalues, UNCERTAINTY_TOL


def _condition_inplace(cov: np.ndarray, idx: np.ndarray, sigma: np.ndarray) -> None:
    """Project the quadratures ``idx`` onto a pure Gaussian state of covariance ``sigma``.

    Remaining block becomes the Schur complement ``M_AA - M_AB (M_BB + sigma)^-1 M_BA``;
    the measured block is left in the projected state and decoupled.
    """
    cross = cov[:, idx]
    gain = np.linalg.solve(cov[np.ix_(idx, idx)] + sigma, cross.T)
    cov -= cross @ gain
    cov[idx, :] = 0.0
    cov[:, idx] = 0.0
    cov[np.ix_(idx, idx)] = sigma
    cov += cov.T
    cov *= 0.5


def _imaginary_inplace(cov: np.ndarray, mode: int, beta: float) -> None:
    """Covariance of ``exp(-beta n) |psi>`` normalized, for one mode.

    ``exp(-beta n)`` equals ``<0_b| U_bs |0_b>`` for a beam splitter of
    transmissivity ``cos(phi) = exp(-beta)`` with a vacuum ancilla ``b``, so the
    update is a vacuum projection of the ancilla after the splitter.  The
    ancilla is eliminated analytically.
    """
    if beta == 0:
        return
    L = cov.shape[0] // 2
    a = np.array([mode, mode + L])
    c = np.exp(-beta)
    s2 = -np.expm1(-2.0 * beta)
    s = np.sqrt(s2)
    half = 0.5 * np.eye(2)
    m_aa = cov[np.ix_(a, a)].copy()
    # covariance of every quadrature with the ancilla after the splitter
    cross = -s * cov[:, a]
    cross[a] = -c * s * (m_aa - half)
    gain = np.linalg.solve(s2 * m_aa + (1.0 + c * c) * half, cross.T)
    cov[a, :] *= c
    cov[:, a] *= c
    cov[np.ix_(a, a)] += s2 * half
    cov -= cross @ gain
    cov += cov.T
    cov *= 0.5


def gaussian_measure(state: GaussianState, modes, sigma=None) -> GaussianState:
    """Project ``modes`` onto a pure Gaussian state with covariance ``sigma`` (post-selected).

    Parameters
    ----------
    state : GaussianState
    modes : int or sequence of int
        Measured modes.
    sigma : array_like, optional
        ``2k x 2k`` covariance (qqpp order of ``modes``) of the state projected
        onto; defaults to the vacuum ``I/2`` (heterodyne with forced outcome).

    Returns
    -------
    GaussianState
        Unmeasured modes hold the conditional covariance; measured modes are
        left in the projected state and uncorrelated with the rest.
    """
    L = state.n_modes
    idx = mode_indices(modes, L)
    if sigma is None:
        sigma = 0.5 * np.eye(idx.size)
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (idx.size, idx.size):
        raise ValueError(f"sigma must be {idx.size}x{idx.size}, got {sigma.shape}")
    if np.max(np.abs(sigma - sigma.T)) > 1e-10:
        raise ValueError("sigma must be symmetric")
    if williamson_eigenvalues(sigma).min() < 0.5 - UNCERTAINTY_TOL:
        raise ValueError("sigma violates the uncertainty relation")
    cov = np.array(state.cov)
    _condition_inplace(cov, idx, 0.5 * (sigma + sigma.T))
    return GaussianState(cov)


def project_vacuum(state: GaussianState, mode: int) -> GaussianState:
    """Post-selected projection of one mode onto ``|0>``."""
    return gaussian_measure(state, [mode])


def imaginary_time_number(state: GaussianState, mode: int, beta: float) -> GaussianState:
    """Apply ``exp(-beta a^dag a)`` to ``mode`` and renormalize.

    ``beta = 0`` is the identity; ``beta -> inf`` approaches :func:`project_vacuum`.
    """
    if not np.isfinite(beta) or beta < 0:
        raise ValueError("beta must be finite and non-negative")
    mode_indices([mode], state.n_modes)
    cov = np.array(state.cov)
    _imaginary_inplace(cov, int(mode), float(beta))
    return GaussianState(cov)
