import math

import numpy as np
import pytest

from qkolab.bits import BitString
from qkolab.codes import hadamard_code
from qkolab.errors import InputError
from qkolab.smp import (
    EQUAL,
    NOT_EQUAL,
    RESTART,
    ExperimentConfig,
    communication_report,
    monte_carlo,
    run_classical_equality,
    run_classical_simulation_of_quantum,
    run_quantum_equality,
    trial_seed,
    wilson_interval,
)

CODE4 = hadamard_code(4)


def _all_messages(n):
    return [BitString.from_int(v, n) for v in range(2**n)]


def test_classical_single_index_accounting():
    tr = run_classical_equality(BitString("1010"), BitString("0101"), CODE4, seed=0)
    assert tr.classical_bits == 2 * (4 + 1)
    assert tr.classical_bits == sum(len(p) for _, p in tr.messages)
    assert tr.decision in (EQUAL, NOT_EQUAL, RESTART)


def test_classical_multi_index_accounting():
    tr = run_classical_equality(
        BitString("1010"), BitString("0101"), CODE4, "multi_index", s=4, seed=0
    )
    assert tr.classical_bits == 2 * 4 * 5
    assert len(tr.messages) == 8


def test_classical_one_sided_exhaustive():
    # equal inputs are never declared NotEqual, any variant, any seed
    for x in _all_messages(3):
        code = hadamard_code(3)
        for seed in range(40):
            for variant in ("single_index", "multi_index"):
                tr = run_classical_equality(x, x, code, variant, seed=seed)
                assert tr.decision != NOT_EQUAL


def test_classical_collision_and_conditional_error():
    x, y = BitString("1010"), BitString("0110")
    decided = errors = 0
    trials = 40000
    for seed in range(trials):
        tr = run_classical_equality(x, y, CODE4, seed=seed)
        if tr.decision != RESTART:
            decided += 1
            errors += tr.decision == EQUAL
    m = CODE4.m
    p_coll = decided / trials
    sigma = math.sqrt((1 / m) * (1 - 1 / m) / trials)
    assert abs(p_coll - 1 / m) <= 3 * sigma
    cond = errors / decided
    sigma_c = math.sqrt(0.25 / decided)
    assert abs(cond - 0.5) <= 3 * sigma_c  # Hadamard conditional error is 1/2


def test_quantum_equal_inputs_always_equal():
    for x in _all_messages(3):
        code = hadamard_code(3)
        for seed in range(30):
            assert run_quantum_equality(x, x, code, k=3, seed=seed).decision == EQUAL


def test_quantum_qubit_accounting():
    tr = run_quantum_equality(BitString("1010"), BitString("0101"), CODE4, k=3)
    assert tr.qubits == 2 * 3 * 5
    assert tr.classical_bits == 0


def test_classical_sim_threshold_decisions():
    x, y = BitString("1010"), BitString("0110")
    # unequal: decoded overlap sits near 1/2, far below the 0.75 threshold
    for seed in range(5):
        tr = run_classical_simulation_of_quantum(x, y, CODE4, 2.0**-10, seed=seed)
        assert tr.decision == NOT_EQUAL
    # equal: decoded overlap is near 1, above the threshold
    tr = run_classical_simulation_of_quantum(x, x, CODE4, 2.0**-10)
    assert tr.decision == EQUAL
    assert tr.classical_bits == 2 * (2**6 * 10 + 64)


def test_classical_sim_sampled_reproduces_quantum_decisions():
    # m = 16 makes every fingerprint amplitude an exact fixed-point value,
    # so the decoded overlap and hence the sampled outcomes agree bit for bit
    x, y = BitString("1010"), BitString("0110")
    for seed in range(300):
        tq = run_quantum_equality(x, y, CODE4, k=2, seed=seed)
        ts = run_classical_simulation_of_quantum(
            x, y, CODE4, 2.0**-10, "sampled", k=2, seed=seed
        )
        assert tq.decision == ts.decision


def test_monte_carlo_determinism_and_seeding():
    cfg = ExperimentConfig(CODE4, "quantum", 500, 11, k=1)
    a, b = monte_carlo(cfg), monte_carlo(cfg)
    assert a == b
    assert trial_seed(11, 0) != trial_seed(11, 1)
    assert trial_seed(11, 0) == trial_seed(11, 0)


def test_monte_carlo_quantum_error_rate():
    rep = monte_carlo(ExperimentConfig(CODE4, "quantum", 20000, 5, k=1))
    lo, hi = rep.wilson_99
    assert lo <= 0.625 <= hi
    assert rep.false_not_equal == 0  # one-sided
    assert rep.mean_qubits == 10.0


def test_monte_carlo_validation():
    with pytest.raises(InputError):
        ExperimentConfig(CODE4, "bogus", 10, 0)
    with pytest.raises(InputError):
        ExperimentConfig(CODE4, "quantum", 0, 0)
    with pytest.raises(InputError):
        monte_carlo(ExperimentConfig(CODE4, "classical-sim", 1, 0))  # no eps_a


def test_wilson_interval_basics():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 100)[0] == 0.0
    assert wilson_interval(100, 100)[1] == 1.0


def test_communication_report_formulas():
    rows = communication_report(range(1, 11), k=1, p=16)
    for row in rows:
        assert row.q == row.n + 1
        assert row.qubits == 2 * row.q
        assert row.classical_bits == 2 * (2 ** (row.q + 1) * 16 + 64)
        assert row.ratio == math.log2(row.classical_bits) / row.qubits
    assert rows[0].classical_bits == 2 * (2**3 * 16 + 64)
    # the log-bits-to-qubits ratio crosses 0.9 only around n = 6
    by_n = {r.n: r.ratio for r in rows}
    assert by_n[6] > 0.9
    assert by_n[5] > 1.0
