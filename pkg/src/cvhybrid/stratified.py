"""Pure Gaussian states held as a graded factorization ``2M = F F^T``, ``F = Q diag(d) T``.

Under unitary evolution the covariance of an ``L``-mode chain acquires
eigenvalues ``e^{+-ct}`` and ``S M S^T`` in double precision loses the small
ones after a few dozen steps; ``det(2M)`` and subsystem entropies then drift
by O(1).  Keeping the factor ``F`` in the form orthogonal x graded diagonal x
well-conditioned (re-stratified with column-pivoted QR after every layer)
keeps every scale explicit, and the Renyi-2 entropy of a region can be read
off a second pivoted QR of the region's rows without ever forming ``M``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import qr

from .gaussian import GaussianState, mode_indices


def _pivoted_qr(A):
    Q, R, perm = qr(A, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return Q, d, (R / d[:, None])[:, inv]


class StratifiedState:
    """Gaussian state with ``2M = (Q diag(d) T)(Q diag(d) T)^T``.

    ``q`` may be modified in place by row operations (gates act as ``F -> G F``);
    call :meth:`restratify` afterwards to restore orthogonality.
    """

    def __init__(self, q: np.ndarray, d: np.ndarray, t: np.ndarray):
        self.q = np.asarray(q, dtype=float)
        self.d = np.asarray(d, dtype=float)
        self.t = np.asarray(t, dtype=float)

    @classmethod
    def vacuum(cls, n_modes: int) -> StratifiedState:
        n = 2 * n_modes
        return cls(np.eye(n), np.ones(n), np.eye(n))

    @classmethod
    def from_covariance(cls, state: GaussianState) -> StratifiedState:
        w, V = np.linalg.eigh(2.0 * state.cov)
        if w[0] <= 0:
            raise ValueError("covariance matrix is not positive definite")
        out = cls(V, np.sqrt(w), np.eye(w.size))
        out.restratify()
        return out

    @property
    def n_modes(self) -> int:
        return self.q.shape[0] // 2

    def copy(self) -> StratifiedState:
        return StratifiedState(self.q.copy(), self.d.copy(), self.t.copy())

    def restratify(self) -> None:
        Q, d, R = _pivoted_qr(self.q * self.d)
        self.q, self.d, self.t = Q, d, R @ self.t

    def apply_symplectic(self, S_local: np.ndarray, modes=None) -> None:
        """In-place ``M -> S M S^T`` for a gate on ``modes`` (all modes if None)."""
        idx = mode_indices(np.arange(self.n_modes) if modes is None else modes, self.n_modes)
        self.q[idx, :] = np.asarray(S_local, dtype=float) @ self.q[idx, :]
        self.restratify()

    def covariance(self) -> GaussianState:
        """Explicit covariance.  Loses the small eigenvalues once the state is strongly squeezed."""
        F = (self.q * self.d) @ self.t
        return GaussianState(0.5 * F @ F.T)

    def log_det(self) -> float:
        """``ln det(2M)``; zero for a pure state."""
        return 2.0 * (float(np.sum(np.log(self.d))) + float(np.linalg.slogdet(self.t)[1]))

    def renyi2(self, region) -> float:
        """Renyi-2 entropy ``1/2 ln det(2 M_A)`` of the modes in ``region``."""
        idx = mode_indices(region, self.n_modes)
        _, d1, R1 = _pivoted_qr(self.q[idx] * self.d)
        X = R1 @ self.t
        sign, logdet = np.linalg.slogdet(X @ X.T)
        return max(float(np.sum(np.log(d1))) + 0.5 * float(logdet), 0.0)
