import numpy as np
import pytest

from cvhybrid.fock import (
    CutoffError,
    converged_run,
    covariance_of,
    oracle_apply_unitary,
    oracle_imaginary,
    oracle_project_zero,
    oracle_renyi2,
    oracle_vacuum,
    run_sequence,
)


def test_vacuum_covariance():
    assert np.allclose(covariance_of(oracle_vacuum(2, 10)), 0.5 * np.eye(4))


def test_unitaries_preserve_norm():
    state = oracle_vacuum(2, 60)
    for gate, modes, param in [("squeeze", (0,), 0.5), ("beamsplitter", (0, 1), 0.8),
                               ("twomode", (1, 0), 0.4), ("phase", (1,), 2.0)]:
        state = oracle_apply_unitary(state, gate, modes, param)
        assert abs(state.norm - 1.0) < 1e-10


def test_single_mode_squeezed_vacuum_amplitudes():
    r = 0.6
    state = oracle_apply_unitary(oracle_vacuum(1, 80), "squeeze", (0,), r)
    amps = state.amps
    assert abs(amps[0]) == pytest.approx(1 / np.sqrt(np.cosh(r)), abs=1e-12)
    assert np.allclose(amps[1::2], 0.0, atol=1e-14)
    cov = covariance_of(state)
    assert np.allclose(cov, np.diag([0.5 * np.exp(2 * r), 0.5 * np.exp(-2 * r)]), atol=1e-10)


def test_two_mode_squeezed_entropy():
    r = 0.5
    result = converged_run(2, [("twomode", (0, 1), r)])
    assert result.converged
    assert result.renyi2[(0,)] == pytest.approx(np.log(np.cosh(2 * r)), abs=1e-10)


def test_projection_and_imaginary_time():
    state = oracle_apply_unitary(oracle_vacuum(2, 40), "twomode", (0, 1), 0.5)
    projected = oracle_project_zero(state, 1)
    assert oracle_renyi2(projected, [0]) == pytest.approx(0.0, abs=1e-12)
    damped = oracle_imaginary(state, 0, 0.5)
    assert 0 < oracle_renyi2(damped, [0]) < oracle_renyi2(state, [0])
    with pytest.raises(ValueError):
        oracle_imaginary(state, 0, -1.0)


def test_projection_of_orthogonal_state_raises():
    state = oracle_vacuum(1, 10)
    state.amps[0], state.amps[1] = 0.0, 1.0
    with pytest.raises(CutoffError):
        oracle_project_zero(state, 0)


def test_cutoff_convergence_flag():
    ops = [("squeeze", (0,), 1.0), ("twomode", (0, 1), 1.0), ("squeeze", (1,), 1.0)]
    result = converged_run(2, ops, cap=40)
    assert not result.converged
    assert result.cutoff == 40


def test_argument_validation():
    with pytest.raises(ValueError):
        oracle_vacuum(4, 10)
    with pytest.raises(ValueError):
        oracle_vacuum(1, 2)
    state = oracle_vacuum(2, 10)
    with pytest.raises(ValueError):
        oracle_apply_unitary(state, "squeeze", (0, 1), 0.1)
    with pytest.raises(ValueError):
        oracle_apply_unitary(state, "beamsplitter", (0, 0), 0.1)
    with pytest.raises(ValueError):
        oracle_apply_unitary(state, "displace", (0,), 0.1)


def test_three_mode_sequence_runs():
    ops = [("squeeze", (0,), 0.3), ("beamsplitter", (0, 2), 0.7), ("twomode", (1, 2), 0.2)]
    state = run_sequence(3, ops, 20)
    assert state.amps.shape == (21, 21, 21)
    assert state.tail_weight() < 1e-8
