"""
Stabilizer chain with N qubits per site
=======================================

Random two-qubit Cliffords on the brickwork, Z measurements with probability
p.  The mutual information between two antipodal regions peaks near the
transition; compare where the N=1 and N=2 curves peak.
"""

import numpy as np

from cvhybrid.clifford import (
    CliffordConfig,
    StabilizerTableau,
    clifford_step,
    mutual_information,
    peak_position,
    run_clifford_experiment,
    stabilizer_entropy,
)

config = CliffordConfig(L=16, N=2, p=0.2)
tab = StabilizerTableau(config.n_qubits)
rng = np.random.default_rng(0)
for _ in range(40):
    clifford_step(tab, config, rng)
A, B = config.regions
print("S(half)", stabilizer_entropy(tab, config.site_qubits(np.arange(8))))
print("I(A:B)", mutual_information(tab, A, B))
print("valid tableau", tab.check())

ps = np.round(np.arange(0.16, 0.41, 0.04), 2)
for N in (1, 2):
    rows = run_clifford_experiment(32, N, ps, 20, seed=4)
    for row in rows:
        print(row)
    print("N =", N, "peak", peak_position(rows, smooth=3))
