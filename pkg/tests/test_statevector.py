"""Tests for the dense statevector oracle."""

import math

import numpy as np
import pytest
from scipy import stats as scistats

from designlab.pauli_chain import coll_exact_chain
from designlab.statevector import (
    COMPLETE_GRAPH,
    HAAR_FULL,
    LATTICE_1D,
    LATTICE_2D,
    CircuitRealization,
    EnsembleSpec,
    GateEvent,
    MonomialEstimate,
    NormDriftError,
    Statevector,
    _haar4_batch,
    anticoncentration_fraction,
    cg_collision_curve,
    collision,
    haar_unitary,
    iter_trial_records,
    mc_expected_collision,
    monomial_estimate,
    sample_circuit,
    scrambling_check,
    trial_rng,
)

HADAMARD_PAIR = np.kron(*[np.array([[1, 1], [1, -1]]) / math.sqrt(2)] * 2)


@pytest.fixture(scope="module")
def cg_curve_n3():
    return cg_collision_curve(3, 10, 20_000, seed=11)


# ---------------------------------------------------------------------------
# Haar sampler


def test_haar_unitary_is_unitary_sweep():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        u = haar_unitary(4, rng)
        worst = max(worst, float(np.abs(u.conj().T @ u - np.eye(4)).max()))
    assert worst < 1e-12


def test_haar_unitary_guards():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        haar_unitary(1, rng)
    with pytest.raises(ValueError):
        haar_unitary(128, rng)


def test_haar_unitary_deterministic():
    a = haar_unitary(8, np.random.default_rng(42))
    b = haar_unitary(8, np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_haar_entry_moments():
    # E|U00|^2 = 1/dim and E|U00|^4 = 2/(dim(dim+1)) at dim=4
    batch = _haar4_batch(np.random.default_rng(3), 100_000)
    p = np.abs(batch[:, 0, 0]) ** 2
    for samples, expect in ((p, 0.25), (p * p, 0.1)):
        err = samples.std(ddof=1) / math.sqrt(samples.size)
        assert abs(samples.mean() - expect) < 3 * err


def test_haar_translation_invariance_ks():
    # collision laws of U and VU are the same distribution for fixed V
    rng = np.random.default_rng(9)
    v = haar_unitary(4, rng)
    batch = _haar4_batch(rng, 5000)
    plain = [collision(CircuitRealization(2, (GateEvent(0, 1, u),))) for u in batch]
    shifted = [collision(CircuitRealization(2, (GateEvent(0, 1, v @ u),))) for u in batch]
    assert scistats.ks_2samp(plain, shifted).pvalue > 1e-3


# ---------------------------------------------------------------------------
# gates, specs, circuits


def test_gate_event_validation():
    rng = np.random.default_rng(1)
    u = haar_unitary(4, rng)
    with pytest.raises(ValueError):
        GateEvent(2, 2, u)
    with pytest.raises(ValueError):
        GateEvent(0, 1, u[:2, :2])
    with pytest.raises(ValueError):
        GateEvent(0, 1, 1.001 * u)


def test_ensemble_spec_guards():
    with pytest.raises(ValueError):
        EnsembleSpec("ring", n=4)
    with pytest.raises(ValueError):
        EnsembleSpec(COMPLETE_GRAPH, n=1, s=2)
    with pytest.raises(ValueError):
        EnsembleSpec(LATTICE_2D, n=6, s=1)
    with pytest.raises(ValueError):
        EnsembleSpec(HAAR_FULL, n=7)
    with pytest.raises(ValueError):
        EnsembleSpec(COMPLETE_GRAPH, n=4, s=-1)
    with pytest.raises(ValueError):
        EnsembleSpec(COMPLETE_GRAPH, n=4, s=2, d=3)
    with pytest.raises(ValueError):
        EnsembleSpec(COMPLETE_GRAPH, n=15, s=2)


def test_brickwork_layer_structure():
    circ = sample_circuit(EnsembleSpec(LATTICE_1D, n=4, s=1), np.random.default_rng(1))
    assert [(e.i, e.j) for e in circ.events] == [(0, 1), (2, 3), (1, 2)]
    circ = sample_circuit(EnsembleSpec(LATTICE_1D, n=5, s=1), np.random.default_rng(1))
    assert [(e.i, e.j) for e in circ.events] == [(0, 1), (2, 3), (1, 2), (3, 4)]
    circ = sample_circuit(EnsembleSpec(LATTICE_1D, n=4, s=3), np.random.default_rng(1))
    assert len(circ.events) == 9


def test_lattice_2d_structure():
    circ = sample_circuit(EnsembleSpec(LATTICE_2D, n=4, s=1, c=1), np.random.default_rng(1))
    assert len(circ.events) == 6
    rows = [{0, 1}, {2, 3}]
    cols = [{0, 2}, {1, 3}]
    for k, e in enumerate(circ.events):
        lines = cols if 2 <= k < 4 else rows
        assert any({e.i, e.j} <= line for line in lines)
    # (2c+1) passes of 2 gates/line * 3 lines on the 9-qubit lattice
    circ = sample_circuit(EnsembleSpec(LATTICE_2D, n=9, s=1, c=2), np.random.default_rng(1))
    assert len(circ.events) == 5 * 6


def test_complete_graph_structure():
    circ = sample_circuit(EnsembleSpec(COMPLETE_GRAPH, n=5, s=3), np.random.default_rng(2))
    assert len(circ.events) == 3
    for e in circ.events:
        assert 0 <= e.i < 5 and 0 <= e.j < 5 and e.i != e.j


def test_haar_full_realization():
    circ = sample_circuit(EnsembleSpec(HAAR_FULL, n=4), np.random.default_rng(3))
    assert circ.events == ()
    assert circ.global_unitary.shape == (16, 16)
    state = circ.apply()
    assert abs(state.norm() - 1.0) < 1e-12


def test_norm_preserved_through_lattice():
    circ = sample_circuit(EnsembleSpec(LATTICE_1D, n=6, s=10), np.random.default_rng(4))
    assert abs(circ.apply().norm() - 1.0) < 1e-10


def test_apply_gate_norm_drift_detected():
    st = Statevector.basis(2)
    st.amps *= 2.0
    ev = GateEvent(0, 1, haar_unitary(4, np.random.default_rng(0)))
    with pytest.raises(NormDriftError):
        st.apply_gate(ev)


# ---------------------------------------------------------------------------
# collision


def test_collision_empty_circuit():
    assert collision(CircuitRealization(n=3, events=())) == 1.0


def test_collision_flat_state():
    events = (GateEvent(0, 1, HADAMARD_PAIR), GateEvent(2, 3, HADAMARD_PAIR))
    assert collision(CircuitRealization(n=4, events=events)) == pytest.approx(1 / 16)


def test_collision_norm_drift_error():
    bad = 1.0001 * np.eye(4, dtype=complex)
    with pytest.raises(NormDriftError):
        collision(CircuitRealization(n=2, events=(), global_unitary=bad))


def test_collision_size_guard():
    with pytest.raises(ValueError):
        collision(CircuitRealization(n=15, events=()))


def test_mc_two_qubit_haar_value():
    # one Haar U(4) gate: collision has the n=2 Haar mean 2/5
    mean, err = mc_expected_collision(EnsembleSpec(COMPLETE_GRAPH, n=2, s=1), 20_000, seed=7)
    assert abs(mean - 0.4) < 3 * err


def test_mc_deterministic_and_guard():
    spec = EnsembleSpec(HAAR_FULL, n=3)
    assert mc_expected_collision(spec, 200, seed=5) == mc_expected_collision(spec, 200, seed=5)
    with pytest.raises(ValueError):
        mc_expected_collision(spec, 99, seed=5)


def test_curve_matches_exact_chain(cg_curve_n3):
    for s, mean, err in cg_curve_n3:
        assert abs(mean - coll_exact_chain(3, s)) < 3 * err, s


def test_curve_depth_monotone_within_noise(cg_curve_n3):
    for (s0, m0, e0), (s1, m1, e1) in zip(cg_curve_n3, cg_curve_n3[1:]):
        assert m1 <= m0 + 3 * (e0 + e1), (s0, s1)


def test_curve_guards():
    with pytest.raises(ValueError):
        cg_collision_curve(1, 5, 1000, 0)
    with pytest.raises(ValueError):
        cg_collision_curve(3, 0, 1000, 0)
    with pytest.raises(ValueError):
        cg_collision_curve(3, 5, 99, 0)


def test_trial_records_stream():
    spec = EnsembleSpec(COMPLETE_GRAPH, n=3, s=2)
    records = list(iter_trial_records(spec, 5, seed=13))
    assert [r["trial"] for r in records] == list(range(5))
    direct = collision(sample_circuit(spec, trial_rng(13, 2)))
    assert records[2]["collision"] == pytest.approx(direct, abs=1e-15)
    assert len(records[0]["amplitude0"]) == 2


# ---------------------------------------------------------------------------
# anti-concentration


def test_anticonc_identity_ensemble():
    frac = anticoncentration_fraction(EnsembleSpec(COMPLETE_GRAPH, n=3, s=0), 0.5, 50, seed=1)
    assert frac == 1.0


def test_anticonc_haar_porter_thomas():
    # Pr[p0 >= theta/2^n] = (1 - theta/2^n)^(2^n - 1) for Haar
    frac = anticoncentration_fraction(EnsembleSpec(HAAR_FULL, n=4), 0.5, 10_000, seed=2)
    expect = (1 - 0.5 / 16) ** 15
    sigma = math.sqrt(expect * (1 - expect) / 10_000)
    assert abs(frac - expect) < 3 * sigma


def test_anticonc_guards():
    spec = EnsembleSpec(HAAR_FULL, n=3)
    with pytest.raises(ValueError):
        anticoncentration_fraction(spec, 0.0, 100, seed=0)
    with pytest.raises(ValueError):
        anticoncentration_fraction(spec, 0.5, 0, seed=0)


# ---------------------------------------------------------------------------
# monomials


def test_monomial_first_moment_diagonal():
    est = monomial_estimate(EnsembleSpec(HAAR_FULL, n=2), 1, (0, 0), (0, 0), 20_000, seed=3)
    assert est.diagonal
    assert abs(est.mean - 0.25) < 3 * est.stderr
    assert abs(est.mean.imag) < 3 * est.stderr


def test_monomial_off_diagonal_vanishes():
    est = monomial_estimate(EnsembleSpec(HAAR_FULL, n=2), 1, (0, 1), (0, 0), 20_000, seed=4)
    assert not est.diagonal
    assert abs(est.mean) < 3 * est.stderr


def test_monomial_degree_two_weingarten_value():
    # E|U00|^2 |U11|^2 = Wg(identity; 2) = 1/3 for a Haar 2x2 unitary
    est = monomial_estimate(EnsembleSpec(HAAR_FULL, n=1), 2,
                            (0, 1, 0, 1), (0, 1, 0, 1), 30_000, seed=5)
    assert est.diagonal
    assert abs(est.mean - 1 / 3) < 3 * est.stderr


def test_monomial_guards():
    spec = EnsembleSpec(HAAR_FULL, n=2)
    with pytest.raises(ValueError):
        monomial_estimate(spec, 3, (0,) * 6, (0,) * 6, 100, seed=0)
    with pytest.raises(ValueError):
        monomial_estimate(spec, 1, (0, 4), (0, 0), 100, seed=0)
    with pytest.raises(ValueError):
        monomial_estimate(spec, 1, (0,), (0, 0), 100, seed=0)
    with pytest.raises(ValueError):
        monomial_estimate(EnsembleSpec(COMPLETE_GRAPH, n=9, s=1), 1,
                          (0, 0), (0, 0), 100, seed=0)
    assert isinstance(
        monomial_estimate(spec, 1, (0, 0), (0, 0), 100, seed=0), MonomialEstimate)


# ---------------------------------------------------------------------------
# scrambling


def test_scrambling_empty_circuit_exact():
    stats = scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=4, s=0), (0, 1), 5, seed=0)
    assert stats.trace_distance_mean == pytest.approx(1.5, abs=1e-12)
    assert stats.purity_mean == pytest.approx(1.0, abs=1e-12)
    assert stats.min_slack == pytest.approx(0.75, abs=1e-12)


def test_scrambling_deep_circuit_spot():
    # deep complete-graph circuits reach the Haar induced-measure values:
    # E Tr rho_S^2 = (d_S + d_E)/(d_S d_E + 1) = 4/13 at (n,|S|) = (6,2)
    stats = scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=6, s=120), (0, 1), 300, seed=5)
    assert stats.min_slack > -1e-9
    assert abs(stats.purity_mean - 4 / 13) < 0.01
    assert abs(stats.trace_distance_mean - 0.412) < 0.03


def test_scrambling_subset_position_irrelevant_when_deep():
    a = scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=5, s=80), (0, 1), 200, seed=6)
    b = scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=5, s=80), (2, 4), 200, seed=6)
    assert abs(a.trace_distance_mean - b.trace_distance_mean) < 0.05


def test_scrambling_guards():
    with pytest.raises(ValueError):
        scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=13, s=1), (0, 1), 10, seed=0)
    spec = EnsembleSpec(COMPLETE_GRAPH, n=4, s=1)
    with pytest.raises(ValueError):
        scrambling_check(spec, (), 10, seed=0)
    with pytest.raises(ValueError):
        scrambling_check(spec, (0, 0), 10, seed=0)
    with pytest.raises(ValueError):
        scrambling_check(spec, (0, 4), 10, seed=0)
    with pytest.raises(ValueError):
        scrambling_check(spec, (0, 1), 0, seed=0)
