"""
Measurements and the saturating entropy
=======================================

Projecting each site onto the vacuum with probability p after every layer
caps the entropy at a value that no longer depends on L.  Replacing the
projection by exp(-beta n) gives a plateau that falls with beta.
"""

from cvhybrid.analysis import agree, saturation
from cvhybrid.circuit import CircuitConfig, run_ensemble

table = {}
for L in (8, 16, 32):
    summary = run_ensemble(CircuitConfig(L=L, steps=60, p=0.2, seed=L), 40)
    table[L] = saturation(summary.series)
    print(L, table[L])

print("8 vs 32 agree within 3 sigma:", agree(table[8], table[32]))

for beta in (0.1, 0.3, 1.0):
    config = CircuitConfig(L=16, steps=60, p=1.0, channel="beta", beta=beta, seed=3)
    print(beta, saturation(run_ensemble(config, 20).series))
