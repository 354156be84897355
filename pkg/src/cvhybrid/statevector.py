"""Dense state-vector simulation of a few qubits, used to check the stabilizer tableau.

Amplitudes are stored as a tensor with one axis of length 2 per qubit.  A
two-qubit unitary acts on ``(qa, qb)`` with ``qa`` as the left Kronecker
factor, the convention of :func:`cvhybrid.clifford.pauli_basis`.
"""

from __future__ import annotations

import numpy as np

from .clifford import LN2, _pauli

MAX_QUBITS = 14
RANK_TOL = 1e-8


class DenseState:
    """``|0...0>`` on ``n`` qubits, evolved by explicit matrices."""

    def __init__(self, n_qubits: int):
        if not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"dense simulation handles 1 to {MAX_QUBITS} qubits")
        self.n = n_qubits
        self.psi = np.zeros((2,) * n_qubits, dtype=complex)
        self.psi[(0,) * n_qubits] = 1.0

    def apply_two_qubit(self, U: np.ndarray, qa: int, qb: int) -> None:
        if qa == qb:
            raise ValueError("a two-qubit gate needs two distinct qubits")
        U = np.asarray(U).reshape(2, 2, 2, 2)
        out = np.tensordot(U, self.psi, axes=([2, 3], [qa, qb]))
        self.psi = np.moveaxis(out, (0, 1), (qa, qb))

    def measure_z(self, qubit: int, outcome: int) -> float:
        """Project ``qubit`` onto ``outcome`` and renormalize; returns the outcome probability."""
        keep = np.zeros(2)
        keep[outcome] = 1.0
        shape = [1] * self.n
        shape[qubit] = 2
        projected = self.psi * keep.reshape(shape)
        prob = float(np.vdot(projected, projected).real)
        if prob < 1e-12:
            raise ValueError(f"outcome {outcome} on qubit {qubit} has zero probability")
        self.psi = projected / np.sqrt(prob)
        return prob

    def _schmidt(self, qubits):
        qubits = sorted(set(int(q) for q in np.atleast_1d(qubits)))
        rest = [q for q in range(self.n) if q not in qubits]
        mat = np.transpose(self.psi, qubits + rest).reshape(2 ** len(qubits), -1)
        return np.linalg.svd(mat, compute_uv=False) ** 2

    def schmidt_rank(self, qubits) -> int:
        return int(np.sum(self._schmidt(qubits) > RANK_TOL))

    def entropy_bits(self, qubits) -> int:
        """``log2`` of the Schmidt rank; for a stabilizer state the spectrum is flat and this is exact."""
        rank = self.schmidt_rank(qubits)
        bits = rank.bit_length() - 1
        if rank != 1 << bits:
            raise ValueError(f"Schmidt rank {rank} is not a power of two")
        return bits

    def renyi2(self, qubits) -> float:
        w = self._schmidt(qubits)
        return float(-np.log(np.sum(w**2)))

    def entropy(self, qubits) -> float:
        return self.entropy_bits(qubits) * LN2

    def expectation(self, x, z) -> float:
        """``<psi| X^x Z^z |psi>`` with ``x = z = 1`` read as ``Y`` on that qubit."""
        phi = self.psi
        for q in range(self.n):
            P = _pauli(int(x[q]), int(z[q]))
            phi = np.moveaxis(np.tensordot(P, phi, axes=([1], [q])), 0, q)
        return float(np.vdot(self.psi, phi).real)
