"""
Symplectic gates against a truncated Fock simulation
====================================================

Each gate acts as M -> S M S^T.  The Fock oracle evolves the wavefunction
directly, grows its cutoff until the tail is negligible and reads the
covariance back off.
"""

import numpy as np

from cvhybrid.fock import converged_run
from cvhybrid.verify import oracle_equivalence, run_gaussian

ops = [
    ("squeeze", (0,), 0.3),
    ("beamsplitter", (0, 1), 0.9),
    ("phase", (1,), 1.2),
    ("twomode", (0, 1), 0.25),
    ("beta", (1,), 0.5),
]

state, peak_photons = run_gaussian(2, ops)
oracle = converged_run(2, ops, regions=[[0]])

print("cutoff", oracle.cutoff, "tail", oracle.tail_weight, "converged", oracle.converged)
print("max |cov difference|", np.abs(state.cov - oracle.cov).max())
print("peak mean photon number", peak_photons)

# the same comparison over a batch of random sequences
report = oracle_equivalence(n_sequences=10, seed=1)
print(report.to_dict())
