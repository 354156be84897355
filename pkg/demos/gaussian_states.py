"""
Gaussian states and Renyi entropies
===================================

Covariance matrices in qqpp order, vacuum at 1/2 the identity.
"""

import numpy as np

from cvhybrid import gates
from cvhybrid.gaussian import (
    apply_symplectic,
    renyi_entropy,
    thermal_state,
    vacuum_state,
    validate_state,
    williamson_eigenvalues,
)

# a two-mode squeezer applied t times gives S2 = ln cosh(2 r t) on either mode
r = 0.4
state = vacuum_state(2)
for t in range(1, 6):
    state = apply_symplectic(state, gates.two_mode_squeeze(r), [0, 1])
    print(t, renyi_entropy(state, [0]), np.log(np.cosh(2 * r * t)))

# the global state stays pure: every symplectic eigenvalue is 1/2
print(williamson_eigenvalues(state.cov))
print(validate_state(state, expect_pure=True))

# determinant and spectrum routes agree, and other alpha are available
print(renyi_entropy(state, [0], method="det"), renyi_entropy(state, [0], method="spectrum"))
for alpha in (0.5, 3.0, 10.0):
    print(alpha, renyi_entropy(state, [0], alpha=alpha))

# a thermal mode with mean occupation nbar has nu = nbar + 1/2
hot = thermal_state([0.2, 3.0])
print(williamson_eigenvalues(hot.cov))
