import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvhybrid.fock import converged_run
from cvhybrid.gates import (
    beam_splitter,
    embed,
    interleaved_to_qqpp,
    one_mode_squeeze,
    phase_rotation,
    qqpp_to_interleaved,
    sample_gate_params,
    two_mode_squeeze,
)
from cvhybrid.gaussian import apply_symplectic, is_symplectic, symplectic_residual, vacuum_state

angles = st.floats(-10, 10, allow_nan=False)
squeezes = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(theta=angles, r=squeezes, phi=angles, r2=squeezes)
def test_all_gates_symplectic(theta, r, phi, r2):
    assert symplectic_residual(phase_rotation(theta)) < 1e-12
    assert symplectic_residual(one_mode_squeeze(r)) < 1e-10 * np.exp(2 * abs(r))
    assert symplectic_residual(beam_splitter(phi)) < 1e-12
    assert symplectic_residual(two_mode_squeeze(r2)) < 1e-10 * np.cosh(r2) ** 2


def test_interleaving_round_trip(rng):
    M = rng.normal(size=(6, 6))
    assert np.array_equal(qqpp_to_interleaved(interleaved_to_qqpp(M)), M)


def test_beam_splitter_mixes_like_a_rotation():
    phi = 0.3
    S = beam_splitter(phi)
    c, s = np.cos(phi), np.sin(phi)
    # q1 -> c q1 + s q2 and the same on momenta
    assert np.allclose(S[0], [c, s, 0, 0])
    assert np.allclose(S[3], [0, 0, -s, c])


def test_two_mode_squeeze_rows():
    r = 0.4
    S = two_mode_squeeze(r)
    ch, sh = np.cosh(r), np.sinh(r)
    assert np.allclose(S[0], [ch, sh, 0, 0])
    assert np.allclose(S[2], [0, 0, ch, -sh])


def test_embed_places_gate_and_validates():
    S = embed(one_mode_squeeze(0.5), [2], 3)
    assert S[2, 2] == pytest.approx(np.exp(0.5))
    assert S[5, 5] == pytest.approx(np.exp(-0.5))
    assert is_symplectic(S)
    with pytest.raises(ValueError):
        embed(one_mode_squeeze(0.5), [0, 1], 3)


@pytest.mark.parametrize(
    "gate, builder, modes, param",
    [
        ("phase", phase_rotation, (0,), 0.7),
        ("squeeze", one_mode_squeeze, (0,), 0.6),
        ("beamsplitter", beam_splitter, (0, 1), 1.1),
        ("twomode", two_mode_squeeze, (0, 1), 0.5),
    ],
)
def test_gate_matches_fock_generator(gate, builder, modes, param):
    # squeeze first so that the rotation and the splitter act on a non-trivial state
    prep = [("squeeze", (0,), 0.3), ("twomode", (0, 1), 0.2), ("squeeze", (1,), -0.3)]
    oracle = converged_run(2, prep + [(gate, modes, param)])
    state = apply_symplectic(vacuum_state(2), one_mode_squeeze(0.3), [0])
    state = apply_symplectic(state, two_mode_squeeze(0.2), [0, 1])
    state = apply_symplectic(state, one_mode_squeeze(-0.3), [1])
    state = apply_symplectic(state, builder(param), list(modes))
    assert oracle.converged
    assert np.max(np.abs(state.cov - oracle.cov)) < 1e-9


def test_epr_variance_decays_as_exp_minus_2rt():
    r = 0.3
    v = np.array([1.0, -1.0, 0.0, 0.0])
    state = vacuum_state(2)
    for t in range(1, 6):
        state = apply_symplectic(state, two_mode_squeeze(r), [0, 1])
        assert v @ state.cov @ v == pytest.approx(np.exp(-2 * r * t), rel=1e-12)


def test_sample_gate_params_ranges_and_reproducibility():
    a = sample_gate_params(np.random.default_rng(3), 1000, r_max=0.5)
    b = sample_gate_params(np.random.default_rng(3), 1000, r_max=0.5)
    assert np.array_equal(a.theta, b.theta) and np.array_equal(a.r, b.r)
    assert a.r.min() >= 0 and a.r.max() <= 0.5
    assert 0 <= a.phi.min() and a.phi.max() < 2 * np.pi
