import numpy as np
import pytest

from cvhybrid.verify import GATES, apply_op, oracle_equivalence, random_sequence, run_gaussian


def test_random_sequence_has_every_gate_and_bounded_photons():
    rng = np.random.default_rng(0)
    for _ in range(10):
        ops = random_sequence(rng, max_photons=1.0)
        assert set(GATES) <= {op[0] for op in ops}
        assert run_gaussian(2, ops)[1] <= 1.0


def test_apply_op_rejects_unknown():
    state, _ = run_gaussian(2, [])
    with pytest.raises(ValueError):
        apply_op(state, ("displace", (0,), 1.0))


def test_small_suite_passes():
    report = oracle_equivalence(n_sequences=5, seed=1)
    assert report.passed
    assert len(report.rows) == 5
    assert "rows" not in report.to_dict()


def test_tight_tolerance_fails():
    report = oracle_equivalence(n_sequences=2, seed=1, tolerance=0.0)
    assert not report.passed
