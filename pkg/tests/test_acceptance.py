"""End-to-end acceptance suite: one test per numbered criterion.

Statistical criteria use fixed seeds and 3-sigma bands unless a tighter
tolerance is stated; exact criteria run in rational arithmetic with zero
tolerance.  conftest.py prints one PASS/FAIL line per criterion at the
end of the run.
"""

import hashlib
import json
import math
import pathlib
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from designlab.design_gap import (
    qinf_and_bounds,
    subspace_gap_brute,
    subspace_gap_gram,
)
from designlab.pauli_chain import (
    accelerated_samples,
    coll_exact_chain,
    coll_lower_bound,
    coll_upper_bound,
    coupled_x_samples,
    cumulative_hitting,
    decoupled_fixed_samples,
    decoupled_weight_samples,
    nu_tau,
    p_transition,
    p_walk_samples,
    poissonized_dist,
)
from designlab.perm_algebra import (
    DegeneracyError,
    compose,
    cycle_count,
    enumerate_sym,
    inverse,
    weingarten,
)
from designlab.spectral_chain import (
    box_mixing,
    eigen_system,
    krawtchouk,
    orthogonality_check,
    q_t_powering,
    q_t_spectral,
)
from designlab.pauli_chain import shifted_initial
from designlab.statevector import (
    COMPLETE_GRAPH,
    HAAR_FULL,
    EnsembleSpec,
    anticoncentration_fraction,
    cg_collision_curve,
    mc_expected_collision,
    scrambling_check,
)

ROOT = pathlib.Path(__file__).resolve().parents[1]


def _tv_against(samples: np.ndarray, dist) -> float:
    ref = dist.to_array()
    counts = np.bincount(samples, minlength=len(ref)) / len(samples)
    return 0.5 * float(np.abs(counts - ref).sum())


# --- 1: full-Haar baseline -------------------------------------------------

def test_criterion_01_haar_baseline_collision():
    start = time.monotonic()
    n, trials = 4, 100_000
    mean, err = mc_expected_collision(EnsembleSpec(HAAR_FULL, n=n), trials, seed=41)
    target = 2.0 / (2 ** n + 1)
    assert abs(mean - target) <= 3 * err
    assert time.monotonic() - start < 60.0


# --- 2: complete-graph depth curve matches the exact chain -----------------

def test_criterion_02_cg_collision_matches_chain():
    start = time.monotonic()
    for n in (2, 3, 4, 5):
        rows = cg_collision_curve(n, 30, 100_000, seed=300 + n)
        assert len(rows) == 30
        for s, mean, err in rows:
            assert abs(mean - coll_exact_chain(n, s)) <= 3 * err, (n, s)
    assert time.monotonic() - start < 600.0


# --- 3: two-qubit plateau ---------------------------------------------------

def test_criterion_03_two_qubit_plateau():
    mean, err = mc_expected_collision(
        EnsembleSpec(COMPLETE_GRAPH, n=2, s=2), 100_000, seed=43)
    # a single Haar pair already lands on the fixed point, 2/5
    assert coll_exact_chain(2, 1) == pytest.approx(0.4, abs=1e-15)
    assert abs(mean - 0.4) <= 3 * err


# --- 4: closed-form eigensystem ---------------------------------------------

def test_criterion_04_eigensystem_residuals_and_gap():
    for n in (2, 3, 10, 25, 37, 50):
        basis = eigen_system(n)
        assert basis.max_residual() < 1e-10, n
        assert basis.gap() == Fraction(4, 3 * n - 1)
    for n in (2, 5, 12, 30):
        exact = eigen_system(n, exact=True).eigenvalues_exact
        spacings = {exact[m] - exact[m + 1] for m in range(n - 1)}
        assert spacings == {Fraction(4, 3 * n - 1)}
    n, t = 30, 1000
    spectral = q_t_spectral(n, t, shifted_initial(n)).to_array()
    powered = q_t_powering(n, t, shifted_initial(n))
    rel = np.abs(spectral - powered).max() / np.abs(powered).max()
    assert rel <= 1e-8


# --- 5: exact identities, zero tolerance ------------------------------------

def test_criterion_05_exact_identities():
    # binomial-weight orthogonality of the p=3/4 family, exhaustive to N=15
    p = Fraction(3, 4)
    for big_n in range(1, 16):
        for t in range(big_n + 1):
            for s in range(t, big_n + 1):
                lhs, rhs = orthogonality_check(big_n, p, t, s)
                assert lhs == rhs, (big_n, t, s)

    # table symmetry, exhaustive to n=12
    for n in range(2, 13):
        for x in range(n):
            for t in range(n):
                lhs = Fraction(math.comb(n - 1, x) * krawtchouk(n, t, x), 3 ** t)
                rhs = Fraction(math.comb(n - 1, t) * krawtchouk(n, x, t), 3 ** x)
                assert lhs == rhs, (n, x, t)

    # stationarity and reversibility of the weight chain, exact to n=20
    for n in range(2, 21):
        rows = p_transition(n)
        pi = [Fraction(math.comb(n, k) * 3 ** k, 4 ** n - 1) for k in range(n + 1)]
        for k in range(n + 1):
            assert sum(pi[j] * rows[j][k] for j in range(n + 1)) == pi[k]
        for k in range(n):
            assert pi[k] * rows[k][k + 1] == pi[k + 1] * rows[k + 1][k]

    # Weingarten tables invert the cycle-count Gram matrix exactly
    for t, d in ((1, 2), (1, 3), (2, 2), (2, 3), (3, 3)):
        table = weingarten(t, d)
        perms = enumerate_sym(t)
        for a in perms:
            for b in perms:
                acc = sum(
                    table.value(compose(inverse(a), nu))
                    * d ** cycle_count(compose(inverse(nu), b))
                    for nu in perms)
                assert acc == (1 if a == b else 0), (t, d, a, b)
    for t, d in ((3, 2), (4, 2), (4, 3)):
        with pytest.raises(DegeneracyError):
            weingarten(t, d)


# --- 6: box-norm mixing envelope ---------------------------------------------

def test_criterion_06_box_mixing_envelope():
    start = time.monotonic()
    for n in (15, 20, 25, 30, 40):
        t = math.ceil(3 * n * math.log(n))
        assert box_mixing(n, t).weighted_sum <= 28.0 / 2 ** n, n
    assert time.monotonic() - start < 60.0


# --- 7: moment-method upper bound --------------------------------------------

def test_criterion_07_collision_upper_bound():
    for n in range(2, 7):
        t_min = math.floor(n * math.log(2 * n) / 2.0) + 1
        for t in range(t_min, t_min + 26):
            assert coll_upper_bound(n, t) + 1e-15 >= coll_exact_chain(n, t), (n, t)
    assert coll_upper_bound(20, 180) <= 29.0 / 2 ** 20


# --- 8: product lower bound ---------------------------------------------------

def test_criterion_08_collision_lower_bound():
    for n in range(2, 7):
        for t in range(51):
            assert coll_exact_chain(n, t) >= coll_lower_bound(n, t) - 1e-12, (n, t)


# --- 9: two routes to the restricted gap --------------------------------------

def test_criterion_09_gap_methods_agree():
    start = time.monotonic()
    gram = subspace_gap_gram(2, 2, 2)
    brute = subspace_gap_brute(2, 2, 2)
    assert abs(gram.gap_value - brute.gap_value) <= 1e-10
    assert gram.gap_value <= (gram.c_dnt * gram.q_inf) ** 2 + 1e-15
    q_inf, row_bound, perron = qinf_and_bounds(2, 2, 2)
    assert q_inf <= perron <= row_bound
    assert time.monotonic() - start < 60.0


# --- 10: anticoncentration fractions ------------------------------------------

def test_criterion_10_anticoncentration():
    start = time.monotonic()
    n, theta, trials = 5, 0.5, 10_000
    frac_cg = anticoncentration_fraction(
        EnsembleSpec(COMPLETE_GRAPH, n=n, s=80), theta, trials, seed=45)
    assert frac_cg >= 0.125
    frac_haar = anticoncentration_fraction(
        EnsembleSpec(HAAR_FULL, n=n), theta, trials, seed=46)
    target = math.exp(-theta)
    sigma = math.sqrt(target * (1 - target) / trials)
    assert abs(frac_haar - target) <= 3 * sigma
    assert time.monotonic() - start < 300.0


# --- 11: coupling reconstructs the slow walk -----------------------------------

def test_criterion_11_coupling_fidelity():
    n, t, trials = 20, 25, 100_000
    coupled = coupled_x_samples(n, t, trials, seed=47)
    direct = p_walk_samples(n, t, trials, seed=48)
    ref = np.bincount(direct, minlength=n + 1) / trials
    got = np.bincount(coupled, minlength=n + 1) / trials
    assert 0.5 * float(np.abs(got - ref).sum()) < 0.02

    # the no-wait chain reaches high weight no later than the decoupled one
    n, t, trials = 12, 15, 20_000
    fast = accelerated_samples(n, t, trials, seed=31)
    slow = decoupled_fixed_samples(n, 1, t, trials, seed=31)
    sigma = math.sqrt(0.5 / trials)
    for k in range(n + 1):
        assert np.mean(fast <= k) <= np.mean(slow <= k) + 3 * sigma, k


# --- 12: Poissonized law of the decoupled process -------------------------------

def test_criterion_12_poissonization():
    n, z, tau, trials = 12, 6, 8.0, 100_000
    samples = decoupled_weight_samples(n, z, tau, trials, seed=49)
    dist = poissonized_dist(n, z, tau)
    assert _tv_against(samples, dist) < 0.01
    assert abs(dist.mean() - nu_tau(n, z, tau)) <= 1e-12


# --- 13: hitting-time growth rate ----------------------------------------------

def test_criterion_13_hitting_rate():
    for n in (100, 300, 1000):
        level = math.ceil(3 * n / 4) - 1
        ratio = cumulative_hitting(n, level).simplified_bound / (n * math.log(n))
        assert abs(ratio / (5.0 / 3.0) - 1.0) <= 0.15, n


# --- 14: subsystem scrambling ----------------------------------------------------

def test_criterion_14_scrambling():
    start = time.monotonic()
    trials = 10_000
    stats = scrambling_check(
        EnsembleSpec(COMPLETE_GRAPH, n=6, s=120), (0, 1), trials, seed=51)
    assert stats.min_slack >= -1e-9
    # deep-circuit references: reduced purity (d_S+d_E)/(d_S d_E+1) exactly,
    # trace-distance mean 0.41148(5) from 2*10^6 direct induced-measure draws
    assert abs(stats.purity_mean - Fraction(4, 13)) <= 3 * 0.021 / math.sqrt(trials) + 1e-4
    assert abs(stats.trace_distance_mean - 0.41148) <= 3 * 0.074 / math.sqrt(trials) + 2e-4

    wide = scrambling_check(
        EnsembleSpec(COMPLETE_GRAPH, n=12, s=300), (0, 1), 500, seed=52)
    assert wide.min_slack >= -1e-9
    assert wide.trace_distance_mean <= 0.1
    assert time.monotonic() - start < 600.0


# --- 15: plot layer regenerates byte-identically ---------------------------------

PLOT_CASES = (
    ("mixing_curve", "mixing_curve.csv"),
    ("coll_vs_depth", "coll_vs_depth.csv"),
    ("spectrum", "spectrum.csv"),
    ("anticonc", "anticonc.csv"),
    ("gap_table", "gap_table.csv"),
)


def test_criterion_15_plot_regeneration(tmp_path):
    render = ROOT / "plots" / "render.py"
    fixtures = ROOT / "plots" / "fixtures"
    if not render.exists():
        pytest.skip("plot layer not built; the core suite stands alone")

    def render_once(kind: str, src: pathlib.Path, dst: pathlib.Path):
        return subprocess.run(
            [sys.executable, str(render), "--kind", kind,
             "--in", str(src), "--out", str(dst)],
            capture_output=True, text=True)

    digests = {}
    for kind, name in PLOT_CASES:
        src = fixtures / name
        first = tmp_path / f"{kind}.1.svg"
        second = tmp_path / f"{kind}.2.svg"
        for dst in (first, second):
            proc = render_once(kind, src, dst)
            assert proc.returncode == 0, proc.stderr
        blob = first.read_bytes()
        assert blob and blob == second.read_bytes(), kind
        digests[kind] = hashlib.sha256(blob).hexdigest()

    # pin against the committed digests; write them on first run
    ledger = fixtures / "checksums.json"
    if ledger.exists():
        assert json.loads(ledger.read_text()) == digests
    else:
        ledger.write_text(json.dumps(digests, indent=2, sort_keys=True) + "\n")

    # wrong table for the kind: loud failure naming the absent column
    proc = render_once("mixing_curve", fixtures / "gap_table.csv",
                       tmp_path / "bad.svg")
    assert proc.returncode != 0
    assert "column" in proc.stderr.lower()
    assert not (tmp_path / "bad.svg").exists()

    # header-only input: empty axes, clean exit
    empty = tmp_path / "empty.csv"
    empty.write_text("t,box_norm\n")
    proc = render_once("mixing_curve", empty, tmp_path / "empty.svg")
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "empty.svg").stat().st_size > 0
