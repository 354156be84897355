"""Zero-mean Gaussian states stored as covariance matrices.

Quadratures are ordered ``X = [q_1, ..., q_L, p_1, ..., p_L]`` ("qqpp") with
``hbar = 1``, so the vacuum covariance is ``I / 2`` and the symplectic form is
``J = [[0, I], [-I, 0]]``.  Every matrix entering or leaving this module uses
that ordering.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

SYMMETRY_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
UNCERTAINTY_TOL = 1e-8
PURITY_TOL = 1e-6


@functools.lru_cache(maxsize=None)
def _symplectic_form(n_modes: int) -> np.ndarray:
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    J = np.block([[zero, eye], [-eye, zero]])
    J.setflags(write=False)
    return J


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the ``2L x 2L`` symplectic form ``J`` in qqpp ordering."""
    if n_modes < 1:
        raise ValueError("n_modes must be at least 1")
    return _symplectic_form(int(n_modes))


def mode_indices(modes, n_modes: int) -> np.ndarray:
    """Row/column indices of the quadratures of ``modes`` (all q's, then all p's).

    Raises ValueError for repeated or out-of-range modes.
    """
    modes = np.atleast_1d(np.asarray(modes, dtype=int))
    if modes.ndim != 1 or modes.size == 0:
        raise ValueError("at least one mode is required")
    if np.any(modes < 0) or np.any(modes >= n_modes):
        raise ValueError(f"mode index out of range for {n_modes} modes: {modes.tolist()}")
    if np.unique(modes).size != modes.size:
        raise ValueError(f"repeated mode index: {modes.tolist()}")
    return np.concatenate([modes, modes + n_modes])


def symplectic_residual(S: np.ndarray) -> float:
    """``max |S J S^T - J|`` for a square matrix of even dimension."""
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    if S.ndim != 2 or S.shape[1] != n or n % 2:
        raise ValueError(f"expected a square matrix of even size, got shape {S.shape}")
    J = symplectic_form(n // 2)
    return float(np.max(np.abs(S @ J @ S.T - J)))


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    return symplectic_residual(S) <= tol


@dataclass(frozen=True)
class GaussianState:
    """Covariance matrix of a zero-mean Gaussian state of ``L`` modes.

    The matrix is re-symmetrized on construction; an input whose asymmetry
    exceeds ``SYMMETRY_TOL`` (relative to its largest entry) is rejected.
    """

    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 or cov.size == 0:
            raise ValueError(f"covariance must be 2L x 2L, got shape {cov.shape}")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def reduced(self, modes) -> GaussianState:
        """Marginal state of ``modes`` (in the order given)."""
        idx = mode_indices(modes, self.n_modes)
        return GaussianState(self.cov[np.ix_(idx, idx)])

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


def vacuum_state(n_modes: int) -> GaussianState:
    """Product of single-mode ground states, ``M = I / 2``."""
    if n_modes < 1:
        raise ValueError("vacuum_state needs at least one mode")
    return GaussianState(0.5 * np.eye(2 * n_modes))


def thermal_state(mean_photons) -> GaussianState:
    """Product of thermal modes with the given mean photon numbers."""
    nbar = np.atleast_1d(np.asarray(mean_photons, dtype=float))
    if np.any(nbar < 0):
        raise ValueError("mean photon numbers must be non-negative")
    return GaussianState(np.diag(np.concatenate([nbar, nbar]) + 0.5))


def apply_symplectic(state: GaussianState, S_local: np.ndarray, modes=None, check: bool = True) -> GaussianState:
    """Evolve ``M -> S M S^T`` with ``S`` acting on ``modes`` and identity elsewhere.

    Parameters
    ----------
    state : GaussianState
    S_local : array_like
        ``2k x 2k`` symplectic matrix in qqpp ordering of the ``k`` selected modes.
    modes : sequence of int, optional
        Target modes; defaults to all modes, in which case ``S_local`` is the
        full ``2L x 2L`` matrix.
    check : bool
        Verify ``S J S^T = J`` before applying.
    """
    L = state.n_modes
    S_local = np.asarray(S_local, dtype=float)
    if modes is None:
        modes = np.arange(L)
    idx = mode_indices(modes, L)
    if S_local.shape != (idx.size, idx.size):
        raise ValueError(f"gate of shape {S_local.shape} does not match {idx.size // 2} modes")
    if check:
        # entries of heavily squeezed gates are large; scale the tolerance with them
        scale = max(1.0, float(np.max(np.abs(S_local))) ** 2)
        if symplectic_residual(S_local) > SYMPLECTIC_TOL * scale:
            raise ValueError("matrix is not symplectic")
    cov = np.array(state.cov)
    cov[idx, :] = S_local @ cov[idx, :]
    cov[:, idx] = cov[:, idx] @ S_local.T
    return GaussianState(cov)


def williamson_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance block, sorted descending.

    These are the moduli of the eigenvalues of ``i J M``.  They are computed as
    the positive eigenvalues of the Hermitian matrix ``i M^{1/2} J M^{1/2}``,
    which has the same spectrum.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2 or cov.size == 0:
        raise ValueError(f"covariance must be 2L x 2L, got shape {cov.shape}")
    scale = max(1.0, float(np.max(np.abs(cov))))
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * scale:
        raise ValueError("covariance matrix is not symmetric")
    cov = 0.5 * (cov + cov.T)
    w, V = np.linalg.eigh(cov)
    if w[0] <= 0:
        raise ValueError("covariance matrix is not positive definite")
    root = (V * np.sqrt(w)) @ V.T
    L = cov.shape[0] // 2
    A = root @ symplectic_form(L) @ root
    # eigvalsh returns ascending +-nu pairs; the upper half are the nu's
    nu = np.linalg.eigvalsh(1j * A)[L:]
    return nu[::-1].copy()


def renyi_from_spectrum(nu, alpha: float) -> float:
    """Renyi-``alpha`` entropy (nats) of a Gaussian state with symplectic spectrum ``nu``."""
    alpha = float(alpha)
    if not alpha > 0 or alpha == 1.0:
        raise ValueError("alpha must be positive and different from 1")
    nu = np.asarray(nu, dtype=float)
    if np.any(nu < 0.5 - UNCERTAINTY_TOL):
        raise ValueError(f"symplectic eigenvalue below 1/2: {nu.min():.3e}")
    nu = np.maximum(nu, 0.5)
    # ln[(nu+1/2)^a - (nu-1/2)^a] = a ln(nu+1/2) + ln(1 - ratio^a), ratio = 1 - 1/(nu+1/2),
    # arranged so that neither huge nu nor nu = 1/2 loses the second term
    with np.errstate(divide="ignore"):
        log_ratio = np.log1p(-1.0 / (nu + 0.5))
    terms = alpha * np.log(nu + 0.5) + np.log(-np.expm1(alpha * log_ratio))
    return float(np.sum(terms) / (alpha - 1.0))


def renyi_entropy(state: GaussianState, region, alpha: float = 2.0, method: str = "auto") -> float:
    """Renyi entropy in nats of the modes in ``region``.

    ``method="auto"`` uses ``S_2 = 1/2 ln det(2 M_A)`` when ``alpha == 2`` and the
    symplectic spectrum otherwise; ``"spectrum"`` and ``"det"`` force a path
    (``"det"`` is only valid for ``alpha == 2``).
    """
    sub = state.reduced(region).cov
    if method == "auto":
        method = "det" if alpha == 2 else "spectrum"
    if method == "det":
        if alpha != 2:
            raise ValueError("the determinant formula only holds for alpha = 2")
        sign, logdet = np.linalg.slogdet(2.0 * sub)
        if sign <= 0:
            raise ValueError("reduced covariance is not positive definite")
        return max(0.5 * float(logdet), 0.0)
    if method == "spectrum":
        return max(renyi_from_spectrum(williamson_eigenvalues(sub), alpha), 0.0)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class StateReport:
    """Diagnostics for a covariance matrix; ``ok`` is False when any check fails."""

    symmetry_residual: float
    min_nu_excess: float
    purity_defect: float
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_state(state, expect_pure: bool = False) -> StateReport:
    """Check symmetry, the uncertainty relation ``nu >= 1/2`` and ``|det(2M) - 1|``.

    Accepts a GaussianState or a raw matrix.  The purity defect is only
    flagged when ``expect_pure`` is set.
    """
    cov = state.cov if isinstance(state, GaussianState) else np.asarray(state, dtype=float)
    sym = float(np.max(np.abs(cov - cov.T)))
    violations = []
    scale = max(1.0, float(np.max(np.abs(cov))))
    if sym > SYMMETRY_TOL * scale:
        violations.append("symmetry")
    sym_cov = 0.5 * (cov + cov.T)
    try:
        nu = williamson_eigenvalues(sym_cov)
        excess = float(nu.min() - 0.5)
    except ValueError:
        excess = -np.inf
    if excess < -UNCERTAINTY_TOL:
        violations.append("uncertainty")
    sign, logdet = np.linalg.slogdet(2.0 * sym_cov)
    purity = abs(np.exp(logdet) - 1.0) if sign > 0 else np.inf
    if expect_pure and purity > PURITY_TOL:
        violations.append("purity")
    return StateReport(sym, excess, float(purity), violations)


def dump_covariance_csv(state: GaussianState, path) -> None:
    """Write the covariance row-major with 17 significant digits."""
    np.savetxt(path, state.cov, delimiter=",", fmt="%.17g")


def load_covariance_csv(path) -> GaussianState:
    return GaussianState(np.loadtxt(path, delimiter=",", ndmin=2))
