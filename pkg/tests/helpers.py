"""Random states and symplectic matrices shared by the tests."""

import numpy as np

from cvhybrid.gates import beam_splitter, embed, one_mode_squeeze, phase_rotation, two_mode_squeeze
from cvhybrid.gaussian import apply_symplectic, vacuum_state


def random_symplectic(rng, n_modes, depth=None, r_max=1.0):
    """Product of random one- and two-mode gates on random modes."""
    depth = 3 * n_modes if depth is None else depth
    S = np.eye(2 * n_modes)
    for _ in range(depth):
        k = int(rng.integers(4)) if n_modes > 1 else int(rng.integers(2))
        if k == 0:
            G = embed(phase_rotation(rng.uniform(0, 2 * np.pi)), [rng.integers(n_modes)], n_modes)
        elif k == 1:
            G = embed(one_mode_squeeze(rng.uniform(-r_max, r_max)), [rng.integers(n_modes)], n_modes)
        else:
            pair = rng.choice(n_modes, 2, replace=False)
            gate = beam_splitter(rng.uniform(0, 2 * np.pi)) if k == 2 else two_mode_squeeze(rng.uniform(-r_max, r_max))
            G = embed(gate, pair, n_modes)
        S = G @ S
    return S


def random_pure_state(rng, n_modes, **kwargs):
    return apply_symplectic(vacuum_state(n_modes), random_symplectic(rng, n_modes, **kwargs))


def random_mixed_state(rng, n_modes):
    """Marginal of a random pure state on twice as many modes."""
    big = random_pure_state(rng, 2 * n_modes)
    return big.reduced(range(n_modes))
