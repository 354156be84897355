"""Brickwork hybrid circuit on an open chain of ``L`` bosonic modes.

One time step:

1. every site gets an independent phase rotation followed by a one-mode squeezer,
   ``theta ~ U[0, 2 pi)``, ``r ~ U[0, 1)``;
2. beam splitters with ``phi ~ U[0, 2 pi)`` on every bond ``(i, i+1)`` whose left
   site ``i`` has the parity of this step (parities alternate between steps);
3. each site independently, with probability ``p``, undergoes the channel:
   forced projection onto ``|0>`` (``channel="vacuum"``) or ``exp(-beta a^dag a)``
   (``channel="beta"``, normally with ``p = 1``).

The half-chain Renyi-2 entropy is recorded after every step.

Randomness is split into three independent streams per trajectory (gate
parameters, channel decisions, circuit structure), so changing the channel
never changes the gates a trajectory sees.  Trajectory ``k`` of an ensemble
with master seed ``s`` uses ``numpy.random.SeedSequence(s, spawn_key=(k,))``.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from .channels import _condition_inplace, _imaginary_inplace
from .gates import sample_gate_params
from .gaussian import GaussianState, mode_indices, vacuum_state
from .stratified import StratifiedState

CHANNELS = ("vacuum", "beta")
PARITIES = ("even", "odd", "mix")
ENGINES = ("auto", "covariance", "stratified")


@dataclass(frozen=True)
class CircuitConfig:
    """Parameters of one hybrid-circuit experiment.

    ``parity`` names the bonds used at step 0 (by the parity of their left
    site); ``"mix"`` draws it once per trajectory with equal probability.
    ``cut`` defaults to the contiguous half ``[0, L/2)``.  ``engine="auto"``
    uses the stratified factorization when the channel is trivial (purely
    unitary runs, where plain covariances lose precision) and covariance
    matrices otherwise.
    """

    L: int
    steps: int
    p: float = 0.0
    channel: str = "vacuum"
    beta: float = 0.0
    parity: str = "mix"
    seed: int = 0
    cut: tuple | None = None
    engine: str = "auto"
    track_purity: bool = False

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("L must be at least 2")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}")
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError("beta must be finite and non-negative")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")
        if self.cut is None:
            if self.L % 2:
                raise ValueError("the default half-system cut needs even L")
        else:
            object.__setattr__(self, "cut", tuple(int(i) for i in self.cut))
            mode_indices(self.cut, self.L)

    @property
    def region(self) -> tuple:
        return self.cut if self.cut is not None else tuple(range(self.L // 2))

    @property
    def channel_active(self) -> bool:
        if self.p == 0:
            return False
        return self.channel == "vacuum" or self.beta > 0

    @property
    def resolved_engine(self) -> str:
        if self.engine != "auto":
            return self.engine
        return "covariance" if self.channel_active else "stratified"


@dataclass
class TrajectoryRecord:
    series: np.ndarray
    config: CircuitConfig
    seed: dict
    first_parity: int
    wall_time: float
    purity: np.ndarray | None = None

    def to_dict(self) -> dict:
        out = {
            "series": self.series.tolist(),
            "config": asdict(self.config),
            "seed": self.seed,
            "first_parity": self.first_parity,
            "wall_time": self.wall_time,
        }
        if self.purity is not None:
            out["purity_defect"] = self.purity.tolist()
        return out


@dataclass
class EnsembleSummary:
    """Mean and standard error (sample std / sqrt(n)) of the entropy per time step."""

    mean: np.ndarray
    stderr: np.ndarray
    n_traj: int
    parity_counts: dict
    series: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean.tolist(),
            "stderr": self.stderr.tolist(),
            "n_traj": self.n_traj,
            "parity_counts": self.parity_counts,
        }

    def to_rows(self) -> list:
        return [(t, float(m), float(e), self.n_traj) for t, (m, e) in enumerate(zip(self.mean, self.stderr))]


def trajectory_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))


def _streams(seed_seq: np.random.SeedSequence):
    # explicit child keys rather than spawn(), which would advance the parent
    gates, channel, structure = (
        np.random.SeedSequence(seed_seq.entropy, spawn_key=(*seed_seq.spawn_key, i), pool_size=seed_seq.pool_size)
        for i in range(3)
    )
    return (np.random.default_rng(gates), np.random.default_rng(channel), np.random.default_rng(structure))


def _first_parity(config: CircuitConfig, structure_rng: np.random.Generator) -> int:
    if config.parity == "mix":
        return int(structure_rng.integers(2))
    return 0 if config.parity == "even" else 1


def _mix_rows(X, i, j, c, s):
    xi, xj = X[i], X[j]
    X[i], X[j] = c[:, None] * xi + s[:, None] * xj, c[:, None] * xj - s[:, None] * xi


def _gate_layer_rows(X, L, theta, r, left, phi):
    """Left-multiply ``X`` by one step's gates: rotation + squeeze per site, then splitters."""
    er, emr = np.exp(r)[:, None], np.exp(-r)[:, None]
    c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
    q, p = X[:L], X[L:]
    X[:L], X[L:] = er * (c * q + s * p), emr * (c * p - s * q)
    if left.size:
        cb, sb = np.cos(phi), np.sin(phi)
        _mix_rows(X, left, left + 1, cb, sb)
        _mix_rows(X, left + L, left + 1 + L, cb, sb)


def _draw_step(config, rng, channel_rng, step_index, first_parity):
    L = config.L
    params = sample_gate_params(rng, L)
    left = np.arange((first_parity + step_index) % 2, L - 1, 2)
    hit = channel_rng.random(L) < config.p
    return params, left, np.flatnonzero(hit)


def _apply_channel(cov, config, sites):
    L = config.L
    for j in sites:
        if config.channel == "vacuum":
            _condition_inplace(cov, np.array([j, j + L]), 0.5 * np.eye(2))
        else:
            _imaginary_inplace(cov, int(j), config.beta)


def _step_covariance(cov, config, params, left, sites):
    L = config.L
    _gate_layer_rows(cov, L, params.theta, params.r, left, params.phi[left])
    _gate_layer_rows(cov.T, L, params.theta, params.r, left, params.phi[left])
    cov += cov.T
    cov *= 0.5
    if config.channel_active and sites.size:
        _apply_channel(cov, config, sites)


def _step_stratified(state, config, params, left, sites):
    _gate_layer_rows(state.q, config.L, params.theta, params.r, left, params.phi[left])
    state.restratify()
    if config.channel_active and sites.size:
        cov = np.array(state.covariance().cov)
        _apply_channel(cov, config, sites)
        fresh = StratifiedState.from_covariance(GaussianState(cov))
        state.q, state.d, state.t = fresh.q, fresh.d, fresh.t


def run_step(state, config: CircuitConfig, rng: np.random.Generator, step_index: int,
             channel_rng: np.random.Generator | None = None, first_parity: int = 0):
    """Advance ``state`` by one circuit step.

    ``state`` is a :class:`GaussianState` (a new state is returned) or a
    :class:`StratifiedState` (updated in place and returned).  Gate parameters
    come from ``rng`` and channel decisions from ``channel_rng`` (defaults to
    ``rng``).
    """
    if state.n_modes != config.L:
        raise ValueError(f"state has {state.n_modes} modes, config expects {config.L}")
    channel_rng = rng if channel_rng is None else channel_rng
    params, left, sites = _draw_step(config, rng, channel_rng, step_index, first_parity)
    if isinstance(state, StratifiedState):
        _step_stratified(state, config, params, left, sites)
        return state
    cov = np.array(state.cov)
    _step_covariance(cov, config, params, left, sites)
    return GaussianState(cov)


def _purity_defect(logdet: float) -> float:
    return abs(float(np.expm1(logdet)))


def run_trajectory(config: CircuitConfig, seed: np.random.SeedSequence | None = None) -> TrajectoryRecord:
    """Run one trajectory from the vacuum and record ``S_2`` of ``config.region`` at ``t = 0..steps``."""
    start = time.perf_counter()
    if seed is None:
        seed = np.random.SeedSequence(int(config.seed))
    rng, channel_rng, structure_rng = _streams(seed)
    parity = _first_parity(config, structure_rng)
    region = config.region
    series = np.zeros(config.steps + 1)
    purity = np.zeros(config.steps + 1) if config.track_purity else None
    L = config.L
    idx = mode_indices(region, L)

    with threadpool_limits(limits=1):
        if config.resolved_engine == "stratified":
            state = StratifiedState.vacuum(L)
            for t in range(config.steps):
                params, left, sites = _draw_step(config, rng, channel_rng, t, parity)
                _step_stratified(state, config, params, left, sites)
                series[t + 1] = state.renyi2(region)
                if purity is not None:
                    purity[t + 1] = _purity_defect(state.log_det())
        else:
            cov = np.array(vacuum_state(L).cov)
            for t in range(config.steps):
                params, left, sites = _draw_step(config, rng, channel_rng, t, parity)
                _step_covariance(cov, config, params, left, sites)
                sign, logdet = np.linalg.slogdet(2.0 * cov[np.ix_(idx, idx)])
                series[t + 1] = max(0.5 * logdet, 0.0) if sign > 0 else np.nan
                if purity is not None:
                    sign, logdet = np.linalg.slogdet(2.0 * cov)
                    purity[t + 1] = _purity_defect(logdet) if sign > 0 else np.inf

    seed_info = {"entropy": seed.entropy, "spawn_key": list(seed.spawn_key)}
    return TrajectoryRecord(series, config, seed_info, parity, time.perf_counter() - start, purity)


def _run_indexed(args):
    config, k = args
    rec = run_trajectory(config, trajectory_seed(config.seed, k))
    return rec.series, rec.first_parity, rec.purity


def run_ensemble(config: CircuitConfig, n_traj: int, workers: int = 1, return_purity: bool = False):
    """Average ``n_traj`` trajectories; output is independent of ``workers``.

    Returns an :class:`EnsembleSummary`, plus the ``(n_traj, steps+1)`` purity
    defects when ``return_purity`` is set (requires ``config.track_purity``).
    """
    if n_traj < 1:
        raise ValueError("n_traj must be at least 1")
    jobs = [(config, k) for k in range(n_traj)]
    if workers <= 1:
        results = [_run_indexed(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_indexed, jobs, chunksize=max(1, n_traj // (4 * workers))))
    series = np.array([r[0] for r in results])
    parities = [r[1] for r in results]
    mean = series.mean(axis=0)
    if n_traj > 1:
        stderr = series.std(axis=0, ddof=1) / np.sqrt(n_traj)
    else:
        stderr = np.zeros_like(mean)
    counts = {"even": parities.count(0), "odd": parities.count(1)}
    summary = EnsembleSummary(mean, stderr, n_traj, counts, series)
    if return_purity:
        if not config.track_purity:
            raise ValueError("return_purity needs config.track_purity")
        return summary, np.array([r[2] for r in results])
    return summary
