"""Stabilizer simulation of a ring of ``L`` clusters with ``N`` qubits each.

A step applies random two-qubit Cliffords to a random pairing of the qubits
inside every cluster, one random Clifford per neighbouring pair of clusters
(between a uniformly chosen qubit of each), and then, with probability ``p``
per site, a Z measurement of every qubit of the cluster.

The tableau follows Aaronson and Gottesman: rows ``0..n-1`` are destabilizers,
rows ``n..2n-1`` stabilizers, each a Hermitian Pauli string ``(-1)^r X^x Z^z``
with ``x = z = 1`` meaning ``Y``.  Two-qubit Cliffords are applied through
precomputed conjugation tables: for each of the 11520 group elements (modulo
phase) and each of the 16 two-qubit Pauli patterns, the image pattern and its
sign.
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

LN2 = float(np.log(2.0))

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _pauli(x: int, z: int) -> np.ndarray:
    return [[_I2, _Z], [_X, _Y]][x][z]


@functools.lru_cache(maxsize=None)
def pauli_basis() -> np.ndarray:
    """The 16 two-qubit Paulis indexed by ``xa | xb << 1 | za << 2 | zb << 3`` (qubit ``a`` is the left factor)."""
    out = np.empty((16, 4, 4), dtype=complex)
    for k in range(16):
        xa, xb, za, zb = k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1
        out[k] = np.kron(_pauli(xa, za), _pauli(xb, zb))
    return out


def _canonical_key(U: np.ndarray):
    flat = U.ravel()
    lead = flat[np.argmax(np.abs(flat) > 1e-9)]
    V = flat * (abs(lead) / lead)
    return tuple(np.round(V.real, 6) + 0.0) + tuple(np.round(V.imag, 6) + 0.0), V.reshape(4, 4)


@functools.lru_cache(maxsize=None)
def clifford_group() -> np.ndarray:
    """All 11520 two-qubit Clifford unitaries modulo global phase, by breadth-first search."""
    gens = [np.kron(_H, _I2), np.kron(_I2, _H), np.kron(_S, _I2), np.kron(_I2, _S), _CNOT]
    key, U = _canonical_key(np.eye(4, dtype=complex))
    seen = {key}
    elements = [U]
    frontier = [U]
    while frontier:
        nxt = []
        for U in frontier:
            for g in gens:
                key, V = _canonical_key(g @ U)
                if key not in seen:
                    seen.add(key)
                    elements.append(V)
                    nxt.append(V)
        frontier = nxt
    out = np.array(elements)
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def conjugation_tables():
    """``(image, sign)``: ``U P_k U^dag = (-1)^sign[e, k] P_image[e, k]`` for every element ``e``."""
    group = clifford_group()
    paulis = pauli_basis()
    conj = np.einsum("eij,kjl,eml->ekim", group, paulis, group.conj())
    # overlap with each Pauli identifies the image; it is exactly +-4
    overlap = np.einsum("qij,ekij->ekq", paulis.conj(), conj).real / 4.0
    image = np.argmax(np.abs(overlap), axis=2)
    value = np.take_along_axis(overlap, image[..., None], axis=2)[..., 0]
    if not np.allclose(np.abs(value), 1.0):
        raise RuntimeError("Clifford conjugation did not produce a Pauli")
    image = image.astype(np.uint8)
    sign = (value < 0).astype(np.uint8)
    image.setflags(write=False)
    sign.setflags(write=False)
    return image, sign


GROUP_ORDER = 11520


def random_two_qubit_clifford(rng: np.random.Generator, size=None):
    """Index (or array of indices) of uniformly random elements of :func:`clifford_group`."""
    return rng.integers(GROUP_ORDER, size=size)


def symplectic_part(element: int) -> np.ndarray:
    """4x4 GF(2) matrix of an element: column ``k`` is the image pattern of basis Pauli ``k``."""
    image, _ = conjugation_tables()
    cols = [image[element, 1 << k] for k in range(4)]
    return np.array([[(c >> j) & 1 for c in cols] for j in range(4)], dtype=np.uint8)


def _g(x1, z1, x2, z2):
    """Exponent of ``i`` picked up when multiplying single-qubit Paulis (Aaronson-Gottesman)."""
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    return np.where(
        x1 & z1,
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )


class StabilizerTableau:
    """Stabilizer state of ``n`` qubits, initially ``|0...0>``.

    ``x`` and ``z`` are views into one ``(2n, 2n)`` bit array ``xz`` so that a
    row product is a single XOR.  With ``track_signs=False`` neither sign bits
    nor destabilizers are maintained; the stabilizer group (and hence every
    entropy) is still exact, but measurement outcomes are meaningless.
    """

    def __init__(self, n_qubits: int, track_signs: bool = True):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        n = int(n_qubits)
        self.n = n
        self.track_signs = track_signs
        self.xz = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.xz[np.arange(n), np.arange(n)] = 1
        self.xz[n + np.arange(n), n + np.arange(n)] = 1
        self._views()

    def _views(self):
        n = self.n
        self.x, self.z = self.xz[:, :n], self.xz[:, n:]
        # rows kept up to date: everything, or only the stabilizers
        first = 0 if self.track_signs else n
        self._live = self.xz[first:]

    def copy(self) -> StabilizerTableau:
        out = StabilizerTableau.__new__(StabilizerTableau)
        out.n, out.track_signs = self.n, self.track_signs
        out.xz, out.r = self.xz.copy(), self.r.copy()
        out._views()
        return out

    @property
    def stabilizers(self):
        """``(x, z, r)`` of the ``n`` stabilizer generators."""
        return self.x[self.n:], self.z[self.n:], self.r[self.n:]

    def apply_cliffords(self, elements, qa, qb) -> None:
        """Apply elements to the qubit pairs ``(qa[i], qb[i])``; pairs must be disjoint."""
        elements = np.atleast_1d(elements)
        qa = np.atleast_1d(qa)
        qb = np.atleast_1d(qb)
        n = self.n
        image, sign = conjugation_tables()
        rows = self._live
        pattern = rows[:, qa] | (rows[:, qb] << 1) | (rows[:, qa + n] << 2) | (rows[:, qb + n] << 3)
        new = image[elements[None, :], pattern]
        if self.track_signs:
            self.r ^= np.bitwise_xor.reduce(sign[elements[None, :], pattern], axis=1)
        rows[:, qa] = new & 1
        rows[:, qb] = (new >> 1) & 1
        rows[:, qa + n] = (new >> 2) & 1
        rows[:, qb + n] = (new >> 3) & 1

    def _rowsum(self, targets, source) -> None:
        """Multiply row ``source`` into each row of ``targets`` (in place)."""
        if self.track_signs:
            phase = _g(self.x[source], self.z[source], self.x[targets], self.z[targets]).sum(axis=1)
            phase = phase + 2 * self.r[targets].astype(np.int64) + 2 * int(self.r[source])
            self.r[targets] = (np.mod(phase, 4) // 2).astype(np.uint8)
        self.xz[targets] ^= self.xz[source]

    def measure_z(self, qubit: int, rng: np.random.Generator | None = None, forced: int | None = None):
        """Measure ``Z`` on ``qubit``; returns ``(outcome, was_random)``.

        A random outcome is drawn from ``rng`` unless ``forced`` is given.
        Deterministic outcomes are only computed when signs are tracked
        (otherwise ``None`` is returned for them).
        """
        n = self.n
        column = self.xz[:, qubit]
        anti = column.nonzero()[0]
        hits = anti[anti >= n]
        if hits.size:
            p = int(hits[0])
            if not self.track_signs:
                # only the stabilizer rows are live
                anti = hits
            others = anti[anti != p]
            if others.size:
                self._rowsum(others, p)
            if self.track_signs:
                self.xz[p - n] = self.xz[p]
                self.r[p - n] = self.r[p]
            self.xz[p] = 0
            self.xz[p, n + qubit] = 1
            if forced is not None:
                outcome = int(forced)
            elif rng is not None:
                outcome = int(rng.integers(2))
            else:
                outcome = 0
            self.r[p] = outcome
            return outcome, True
        if not self.track_signs:
            return None, False
        # deterministic: accumulate the stabilizers paired with anticommuting destabilizers
        sx = np.zeros((1, n), dtype=np.uint8)
        sz = np.zeros((1, n), dtype=np.uint8)
        sr = 0
        for i in np.flatnonzero(self.x[:n, qubit]):
            row = i + n
            phase = int(_g(self.x[row][None], self.z[row][None], sx, sz).sum()) + 2 * sr + 2 * int(self.r[row])
            sr = (phase % 4) // 2
            sx ^= self.x[row]
            sz ^= self.z[row]
        return sr, False

    def check(self) -> bool:
        """Generators independent (full GF(2) rank) and mutually commuting."""
        n = self.n
        X, Z = self.x[n:].astype(np.int64), self.z[n:].astype(np.int64)
        comm = (X @ Z.T + Z @ X.T) % 2
        full = np.concatenate([self.x[n:], self.z[n:]], axis=1)
        return not comm.any() and gf2_rank(full) == n


def gf2_rank(mat: np.ndarray) -> int:
    """Rank over GF(2) by Gaussian elimination on a 0/1 matrix."""
    m = np.array(mat, dtype=bool)
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        if rank == rows:
            break
        pivots = np.flatnonzero(m[rank:, c])
        if pivots.size == 0:
            continue
        piv = rank + pivots[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        below = np.flatnonzero(m[:, c])
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
    return rank


def entropy_bits(tableau: StabilizerTableau, qubits) -> int:
    """Entanglement of ``qubits`` in bits: rank of the generators restricted to them minus ``|A|``."""
    qubits = np.unique(np.atleast_1d(np.asarray(qubits, dtype=int)))
    if qubits.size == 0:
        raise ValueError("region must be non-empty")
    x, z, _ = tableau.stabilizers
    restricted = np.concatenate([x[:, qubits], z[:, qubits]], axis=1)
    return gf2_rank(restricted) - qubits.size


def stabilizer_entropy(tableau: StabilizerTableau, qubits) -> float:
    """Entanglement entropy in nats; every Renyi entropy of a stabilizer state takes this value."""
    return entropy_bits(tableau, qubits) * LN2


def mutual_information(tableau: StabilizerTableau, A, B) -> float:
    """``I_AB = S_A + S_B - S_AB``."""
    A = np.unique(np.atleast_1d(A))
    B = np.unique(np.atleast_1d(B))
    if np.intersect1d(A, B).size:
        raise ValueError("regions A and B overlap")
    bits = entropy_bits(tableau, A) + entropy_bits(tableau, B) - entropy_bits(tableau, np.concatenate([A, B]))
    return bits * LN2


@dataclass(frozen=True)
class CliffordConfig:
    """Ring of ``L`` clusters of ``N`` qubits measured at rate ``p``.

    ``burn_in`` and ``window`` default to ``4 L`` and ``2 L`` steps; the
    mutual information is averaged over the window.  Regions ``A`` and ``B``
    are ``region_sites`` consecutive sites starting at 0 and at ``L // 2``.
    """

    L: int
    N: int
    p: float
    seed: int = 0
    burn_in: int | None = None
    window: int | None = None
    region_sites: int = 4

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.L < 2 * self.region_sites or self.L < 3:
            raise ValueError("L too small for two disjoint antipodal regions")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", 4 * self.L)
        if self.window is None:
            object.__setattr__(self, "window", 2 * self.L)

    @property
    def n_qubits(self) -> int:
        return self.L * self.N

    def site_qubits(self, sites) -> np.ndarray:
        sites = np.atleast_1d(sites)
        return (sites[:, None] * self.N + np.arange(self.N)[None, :]).ravel()

    @property
    def regions(self):
        A = np.arange(self.region_sites)
        B = (self.L // 2 + np.arange(self.region_sites)) % self.L
        return self.site_qubits(A), self.site_qubits(B)


def _bond_layers(L: int):
    left = np.arange(L)
    layers = [left[(left % 2 == 0) & (left < L - (L % 2))], left[left % 2 == 1]]
    if L % 2:
        layers.append(np.array([L - 1]))
    return layers


def clifford_step(tableau: StabilizerTableau, config: CliffordConfig, rng: np.random.Generator):
    """One step: intra-cluster pairings, inter-cluster gates on every bond of the ring, measurements.

    Returns the list of measured sites.
    """
    L, N = config.L, config.N
    if N >= 2:
        perms = rng.permuted(np.tile(np.arange(N), (L, 1)), axis=1)
        n_pairs = N // 2
        base = (np.arange(L) * N)[:, None]
        qa = (base + perms[:, 0:2 * n_pairs:2]).ravel()
        qb = (base + perms[:, 1:2 * n_pairs:2]).ravel()
        tableau.apply_cliffords(random_two_qubit_clifford(rng, qa.size), qa, qb)
    for left in _bond_layers(L):
        right = (left + 1) % L
        qa = left * N + rng.integers(N, size=left.size)
        qb = right * N + rng.integers(N, size=left.size)
        tableau.apply_cliffords(random_two_qubit_clifford(rng, left.size), qa, qb)
    measured = np.flatnonzero(rng.random(L) < config.p)
    for site in measured:
        for q in range(site * N, site * N + N):
            tableau.measure_z(q, rng)
    return measured


def run_clifford_trajectory(config: CliffordConfig, seed=None) -> np.ndarray:
    """Mutual information after each step of the averaging window."""
    if seed is None:
        seed = np.random.SeedSequence(int(config.seed))
    rng = np.random.default_rng(seed)
    tab = StabilizerTableau(config.n_qubits, track_signs=False)
    A, B = config.regions
    for _ in range(config.burn_in):
        clifford_step(tab, config, rng)
    out = np.empty(config.window)
    for k in range(config.window):
        clifford_step(tab, config, rng)
        out[k] = mutual_information(tab, A, B)
    return out


def _mi_sample(args):
    config, k = args
    with threadpool_limits(limits=1):
        seed = np.random.SeedSequence(int(config.seed), spawn_key=(int(round(config.p * 1e6)), config.N, k))
        return run_clifford_trajectory(config, seed).mean()


def run_clifford_experiment(L: int, N: int, ps, n_samples: int, seed: int = 0, workers: int = 1, **kwargs):
    """Steady-state ``I_AB`` versus ``p``.

    Each ``(N, p, sample)`` cell has its own seed derived from ``seed``.
    Returns rows ``(N, p, mean_I_AB, stderr, n_samples)``.
    """
    configs = [CliffordConfig(L=L, N=N, p=float(p), seed=seed, **kwargs) for p in ps]
    jobs = [(c, k) for c in configs for k in range(n_samples)]
    if workers <= 1:
        values = [_mi_sample(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_mi_sample, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    values = np.array(values).reshape(len(configs), n_samples)
    rows = []
    for c, v in zip(configs, values):
        err = v.std(ddof=1) / np.sqrt(n_samples) if n_samples > 1 else 0.0
        rows.append((N, c.p, float(v.mean()), float(err), n_samples))
    return rows


def peak_position(rows, smooth: int = 1) -> float:
    """``p`` of the largest mean ``I_AB`` in a table from :func:`run_clifford_experiment`.

    With ``smooth = k`` (odd) the means are first replaced by a running
    average over ``k`` neighbouring grid points (fewer at the ends).
    """
    if smooth < 1 or smooth % 2 == 0:
        raise ValueError("smooth must be a positive odd integer")
    rows = sorted(rows, key=lambda row: row[1])
    values = np.array([row[2] for row in rows])
    kernel = np.ones(smooth)
    averaged = np.convolve(values, kernel, mode="same") / np.convolve(np.ones_like(values), kernel, mode="same")
    return rows[int(np.argmax(averaged))][1]
