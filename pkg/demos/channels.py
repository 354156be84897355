"""
Vacuum projection and imaginary-time damping
============================================

exp(-beta n) on one mode, renormalized, interpolates between doing nothing
(beta = 0) and projecting the mode onto the vacuum (beta -> infinity).
"""

import numpy as np

from cvhybrid import gates
from cvhybrid.channels import gaussian_measure, imaginary_time_number, project_vacuum
from cvhybrid.gaussian import apply_symplectic, renyi_entropy, vacuum_state

state = apply_symplectic(vacuum_state(2), gates.two_mode_squeeze(0.7), [0, 1])
print("before", renyi_entropy(state, [0]))

for beta in (0.0, 0.1, 0.5, 2.0, 20.0):
    damped = imaginary_time_number(state, 1, beta)
    print(beta, renyi_entropy(damped, [0]))

# the large-beta limit is the projection
gap = np.abs(imaginary_time_number(state, 1, 20.0).cov - project_vacuum(state, 1).cov).max()
print("beta=20 vs projection", gap)

# two steps compose into one
a = imaginary_time_number(imaginary_time_number(state, 1, 0.3), 1, 0.4)
b = imaginary_time_number(state, 1, 0.7)
print("semigroup", np.abs(a.cov - b.cov).max())

# a general Gaussian measurement with a squeezed seed covariance
seed = np.diag([0.5 * np.exp(1.0), 0.5 * np.exp(-1.0)])
print(renyi_entropy(gaussian_measure(state, [1], seed), [0]))
