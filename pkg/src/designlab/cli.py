"""Experiment driver: reproducible CSV/JSON artifacts and a verification suite.

Every subcommand resolves its parameters from CLI flags over an optional flat
config file, runs one experiment against the library modules, and writes a
CSV artifact (header row, 17-significant-digit floats) plus a JSON sidecar
echoing the resolved config and library version.  `designlab verify` runs the
invariant suite and exits nonzero on any failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .design_gap import subspace_gap_brute, subspace_gap_gram
from .pauli_chain import (
    coll_exact_chain,
    coll_lower_bound,
    coll_upper_bound,
    coupled_x_samples,
    coupon_bound,
    cumulative_hitting,
    decoupled_weight_samples,
    hitting_time,
    hitting_time_exact,
    closed_form_exact,
    nu_tau,
    p_transition,
    p_walk_samples,
    poissonized_dist,
    stationary_p,
)
from .perm_algebra import (
    SizeLimitError,
    compose,
    cycle_count,
    enumerate_sym,
    inverse,
    weingarten,
)
from .spectral_chain import (
    box_mixing,
    eigen_system,
    mixing_curve_rows,
    orthogonality_check,
    q_t_powering,
    q_t_spectral,
)
from .statevector import (
    COMPLETE_GRAPH,
    HAAR_FULL,
    LATTICE_1D,
    LATTICE_2D,
    EnsembleSpec,
    NormDriftError,
    anticoncentration_fraction,
    cg_collision_curve,
    collision,
    haar_unitary,
    mc_expected_collision,
    sample_circuit,
    scrambling_check,
    trial_rng,
)
from .pauli_chain import shifted_initial

ENSEMBLE_ALIASES = {
    "cg": COMPLETE_GRAPH,
    "complete_graph": COMPLETE_GRAPH,
    "1d": LATTICE_1D,
    "lattice_1d": LATTICE_1D,
    "2d": LATTICE_2D,
    "lattice_2d": LATTICE_2D,
    "haar": HAAR_FULL,
    "haar_full": HAAR_FULL,
}

SEEDED_COMMANDS = ("coll-mc", "anticonc", "waittime", "scramble")

CONFIG_KEY_TYPES = {
    "n": int, "d": int, "t": int, "s": int, "c": int, "m": int,
    "trials": int, "seed": int, "threads": int, "subset_size": int,
    "theta": float, "ensemble": str, "level": str, "out": str, "format": str,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved parameters of one experiment run; fully determines outputs."""

    experiment: str
    seed: int
    n: int | None = None
    d: int | None = None
    t: int | None = None
    s: int | None = None
    c: int | None = None
    m: int | None = None
    trials: int | None = None
    theta: float | None = None
    subset_size: int | None = None
    ensemble: str | None = None
    level: str | None = None
    threads: int = 1
    out: str = "."
    format: str = "csv"


def load_config_file(path: str) -> dict:
    """Flat key-value config: one `key = value` (or `key value`) per line,
    `#` comments.  Keys mirror the CLI flags."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, _, val = line.partition("=")
            else:
                key, _, val = line.partition(" ")
            key = key.strip().replace("-", "_")
            val = val.strip()
            if key not in CONFIG_KEY_TYPES or not val:
                raise ValueError(f"{path}:{lineno}: unknown or bare config key {key!r}")
            values[key] = CONFIG_KEY_TYPES[key](val)
    return values


def _require(value, flag: str):
    if value is None:
        raise ValueError(f"missing required flag {flag} (or config key)")
    return value


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_artifact(cfg: ExperimentConfig, name: str, header: tuple,
                   rows: list, extra: dict | None = None) -> list[str]:
    """Write one artifact in the configured format and return the paths."""
    os.makedirs(cfg.out, exist_ok=True)
    config_echo = asdict(cfg)
    if cfg.format == "csv":
        csv_path = os.path.join(cfg.out, f"{name}.csv")
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt_cell(v) for v in row])
        meta_path = os.path.join(cfg.out, f"{name}.meta.json")
        payload = {"experiment": name, "version": __version__,
                   "config": config_echo, "columns": list(header),
                   "row_count": len(rows)}
        if extra:
            payload["extra"] = extra
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return [csv_path, meta_path]
    json_path = os.path.join(cfg.out, f"{name}.json")
    payload = {"experiment": name, "version": __version__, "config": config_echo,
               "columns": list(header),
               "rows": [dict(zip(header, row)) for row in rows]}
    if extra:
        payload["extra"] = extra
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [json_path]


def _pooled_values(fn, trials: int, threads: int) -> np.ndarray:
    """Run fn(trial) for every trial index into a slot array.  Slot order,
    not completion order, fixes the reduction, so results do not depend on
    the thread count."""
    values = np.empty(trials)

    def work(bounds):
        lo, hi = bounds
        for i in range(lo, hi):
            values[i] = fn(i)

    if threads <= 1 or trials < 256:
        work((0, trials))
        return values
    step = math.ceil(trials / threads)
    chunks = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(work, chunks))
    return values


# ---------------------------------------------------------------------------
# experiment runners; each returns a list of (name, header, rows, extra)


def run_coll_mc(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    kind = ENSEMBLE_ALIASES[cfg.ensemble or "cg"]
    s = cfg.s if cfg.s is not None else 30
    trials = cfg.trials if cfg.trials is not None else 10_000
    if kind == COMPLETE_GRAPH:
        rows = cg_collision_curve(n, s, trials, cfg.seed)
        return [("coll-mc", ("s", "mean", "stderr"), rows, None)]
    spec = EnsembleSpec(kind, n=n, s=s, c=cfg.c if cfg.c is not None else 1)
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    values = _pooled_values(
        lambda i: collision(sample_circuit(spec, trial_rng(cfg.seed, i))),
        trials, cfg.threads)
    mean = math.fsum(values) / trials
    var = math.fsum((v - mean) ** 2 for v in values) / (trials - 1)
    rows = [(s, mean, math.sqrt(var / trials))]
    return [("coll-mc", ("s", "mean", "stderr"), rows, None)]


def run_coll_chain(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    t_max = cfg.t if cfg.t is not None else 30
    rows = [(t, coll_exact_chain(n, t)) for t in range(t_max + 1)]
    return [("coll-chain", ("t", "collision"), rows, None)]


def run_coll_bound(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    t_max = cfg.t if cfg.t is not None else math.ceil(n * math.log(n) ** 2)
    threshold = n * math.log(2 * n) / 2
    rows = []
    for t in range(1, t_max + 1):
        upper = coll_upper_bound(n, t) if t > threshold else math.nan
        rows.append((t, coll_lower_bound(n, t), upper))
    extra = {"admissible_from": math.floor(threshold) + 1}
    return [("coll-bound", ("t", "lower_bound", "upper_bound"), rows, extra)]


def run_spectral_mix(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    t_max = cfg.t if cfg.t is not None else math.ceil(3 * n * math.log(n))
    header, rows = mixing_curve_rows(n, range(1, t_max + 1))
    basis = eigen_system(n)
    spec_header, spec_rows = basis.csv_rows()
    return [
        ("spectral-mix", header, rows, {"reference_bound": 28.0 / 2 ** n}),
        ("spectral-spectrum", spec_header, spec_rows, None),
    ]


def run_gap_2d(cfg: ExperimentConfig):
    d = cfg.d if cfg.d is not None else 2
    m = cfg.m if cfg.m is not None else 2
    t = cfg.t if cfg.t is not None else 2
    reports = [subspace_gap_gram(d, m, t)]
    try:
        reports.append(subspace_gap_brute(d, m, t))
    except SizeLimitError:
        pass  # gram-only when the dense route is out of reach
    header = ("method", "d", "m", "t", "cos_angle", "gap_value", "q_inf",
              "c_dnt", "bound", "alt_cos_angle", "ordering")
    rows = [(r.method, r.d, r.m, r.t, r.cos_angle, r.gap_value, r.q_inf,
             r.c_dnt, r.bound, r.alt_cos_angle, r.ordering) for r in reports]
    extra = {"reports": [json.loads(r.to_json()) for r in reports]}
    return [("gap-2d", header, rows, extra)]


def run_anticonc(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    kind = ENSEMBLE_ALIASES[cfg.ensemble or "cg"]
    s = cfg.s if cfg.s is not None else 80
    theta = cfg.theta if cfg.theta is not None else 0.5
    trials = cfg.trials if cfg.trials is not None else 10_000
    spec = EnsembleSpec(kind, n=n, s=s, c=cfg.c if cfg.c is not None else 1)
    if theta <= 0:
        raise ValueError("threshold must be positive")
    cutoff = theta / 2 ** n
    values = _pooled_values(
        lambda i: abs(sample_circuit(spec, trial_rng(cfg.seed, i)).apply().amps[0]) ** 2,
        trials, cfg.threads)
    fraction = float(np.count_nonzero(values >= cutoff)) / trials
    rows = [(theta, fraction, trials)]
    return [("anticonc", ("theta", "fraction", "trials"), rows, None)]


def run_hitting(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    l_max = cfg.t if cfg.t is not None else math.ceil(3 * n / 4) - 1
    if l_max < 2:
        raise ValueError("sweep needs a target level of at least 2")
    rows = []
    for level in range(2, l_max + 1):
        ht = hitting_time(n, level)
        cum = cumulative_hitting(n, level)
        rows.append((level, ht.recurrence, ht.closed_form, ht.simplified_bound,
                     cum.recurrence, cum.simplified_bound))
    header = ("l", "level_steps", "level_closed_form", "level_simplified",
              "cum_steps", "cum_simplified")
    extra = {"normalization": "n*ln(n)", "n_log_n": n * math.log(n)}
    return [("hitting", header, rows, extra)]


def run_waittime(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    t = cfg.t if cfg.t is not None else 2 * n
    trials = cfg.trials if cfg.trials is not None else 20_000
    coupled = coupled_x_samples(n, t, trials, cfg.seed)
    direct = p_walk_samples(n, t, trials, cfg.seed + 1)
    rows = []
    tv = 0.0
    for k in range(n + 1):
        fc = float(np.count_nonzero(coupled == k)) / trials
        fd = float(np.count_nonzero(direct == k)) / trials
        tv += abs(fc - fd)
        rows.append((k, fc, fd))
    header = ("k", "coupled_fraction", "direct_fraction")
    return [("waittime", header, rows, {"tv_estimate": 0.5 * tv, "t": t})]


def run_scramble(cfg: ExperimentConfig):
    n = _require(cfg.n, "--n")
    s = cfg.s if cfg.s is not None else 20 * n
    trials = cfg.trials if cfg.trials is not None else 1000
    size = cfg.subset_size if cfg.subset_size is not None else 2
    spec = EnsembleSpec(COMPLETE_GRAPH, n=n, s=s)
    stats = scrambling_check(spec, tuple(range(size)), trials, cfg.seed)
    header = ("n", "s", "subset_size", "trace_distance_mean", "purity_mean",
              "min_slack", "trials")
    rows = [(n, s, size, stats.trace_distance_mean, stats.purity_mean,
             stats.min_slack, trials)]
    return [("scramble", header, rows, None)]


def run_perm_checks(cfg: ExperimentConfig):
    t = cfg.t if cfg.t is not None else 3
    d = cfg.d if cfg.d is not None else 3
    table = weingarten(t, d)
    rows = [("+".join(str(part) for part in ctype), str(value), float(value))
            for ctype, value in sorted(table.by_type.items(), reverse=True)]
    header = ("cycle_type", "value_exact", "value_float")
    return [("perm-checks", header, rows, {"degree": t, "dim": d})]


RUNNERS = {
    "coll-mc": run_coll_mc,
    "coll-chain": run_coll_chain,
    "coll-bound": run_coll_bound,
    "spectral-mix": run_spectral_mix,
    "gap-2d": run_gap_2d,
    "anticonc": run_anticonc,
    "hitting": run_hitting,
    "waittime": run_waittime,
    "scramble": run_scramble,
    "perm-checks": run_perm_checks,
}


# ---------------------------------------------------------------------------
# verification suite


@dataclass(frozen=True)
class CheckResult:
    check: str
    anchor: str
    kind: str        # deterministic | statistical
    status: str      # pass | fail
    measured: float
    expected: float
    tolerance: float
    comparison: str  # abs-diff | at-most


@dataclass(frozen=True)
class VerificationReport:
    level: str
    version: str
    elapsed_seconds: float
    entries: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(e.status == "pass" for e in self.entries)

    def to_json(self) -> str:
        return json.dumps({
            "level": self.level,
            "version": self.version,
            "elapsed_seconds": self.elapsed_seconds,
            "all_passed": self.all_passed,
            "entries": [asdict(e) for e in self.entries],
        }, indent=2, sort_keys=True)


def _close(check, anchor, kind, measured, expected, tol) -> CheckResult:
    status = "pass" if abs(measured - expected) <= tol else "fail"
    return CheckResult(check=check, anchor=anchor, kind=kind, status=status,
                       measured=float(measured), expected=float(expected),
                       tolerance=float(tol), comparison="abs-diff")


def _at_most(check, anchor, kind, measured, bound, tol=0.0) -> CheckResult:
    status = "pass" if measured <= bound + tol else "fail"
    return CheckResult(check=check, anchor=anchor, kind=kind, status=status,
                       measured=float(measured), expected=float(bound),
                       tolerance=float(tol), comparison="at-most")


def _weingarten_defect(t: int, d: int) -> float:
    table = weingarten(t, d)
    perms = enumerate_sym(t)
    worst = Fraction(0)
    for mu in perms:
        for sigma in perms:
            total = Fraction(0)
            for nu in perms:
                total += (table.value(compose(mu, inverse(nu)))
                          * d ** cycle_count(compose(inverse(nu), sigma)))
            target = 1 if mu == sigma else 0
            worst = max(worst, abs(total - target))
    return float(worst)


def _stationarity_defects(n: int) -> tuple[float, float]:
    rows = p_transition(n)
    pi = [Fraction(0)] + [Fraction(math.comb(n, k) * 3 ** k, 4 ** n - 1)
                          for k in range(1, n + 1)]
    fixed = Fraction(0)
    balance = Fraction(0)
    for j in range(n + 1):
        total = sum(pi[k] * rows[k][j] for k in range(n + 1))
        fixed = max(fixed, abs(total - pi[j]))
        for k in range(n + 1):
            balance = max(balance, abs(pi[k] * rows[k][j] - pi[j] * rows[j][k]))
    return float(fixed), float(balance)


def _tv_from_samples(samples: np.ndarray, dist) -> float:
    n = dist.n
    counts = np.bincount(samples.astype(int), minlength=n + 1)
    emp = counts / samples.size
    ref = dist.to_array()
    return 0.5 * float(np.abs(emp - ref).sum())


def _fast_checks() -> list[CheckResult]:
    out = []

    defect = _weingarten_defect(3, 3)
    out.append(_close(
        "weingarten-gram-inverse",
        "sum_nu Wg(mu nu^-1) d^#cycles(nu^-1 sigma) = [mu = sigma], t=3 d=3",
        "deterministic", defect, 0.0, 0.0))

    worst = Fraction(0)
    for t in range(9):
        for s in range(9):
            lhs, rhs = orthogonality_check(8, Fraction(3, 4), t, s)
            worst = max(worst, abs(lhs - rhs))
    out.append(_close(
        "krawtchouk-orthogonality",
        "binomial-weight orthogonality of the degree-t polynomials, N=8, p=3/4",
        "deterministic", float(worst), 0.0, 0.0))

    fixed, balance = _stationarity_defects(12)
    out.append(_close("p-stationarity", "pi P = pi in exact rationals, n=12",
                      "deterministic", fixed, 0.0, 0.0))
    out.append(_close("p-detailed-balance", "pi(k) P(k,j) = pi(j) P(j,k), n=12",
                      "deterministic", balance, 0.0, 0.0))

    basis = eigen_system(30)
    out.append(_at_most("eigen-residual", "Q v_m = lambda_m v_m, n=30",
                        "deterministic", basis.max_residual(), 1e-10))
    out.append(_close("eigen-gap", "top spectral gap equals 4/(3n-1), n=30",
                      "deterministic", float(abs(basis.gap() - Fraction(4, 89))),
                      0.0, 0.0))

    out.append(_close("chain-collision-n2", "weight-chain collision is 2/5 at n=2",
                      "deterministic", coll_exact_chain(2, 7), 0.4, 1e-15))
    out.append(_close("chain-deep-limit", "deep collision tends to 2/(2^n+1), n=5",
                      "deterministic", coll_exact_chain(5, 1500), 2 / 33, 1e-9))

    t_mix = math.ceil(3 * 20 * math.log(20))
    out.append(_at_most("box-mixing-20", "box norm at t = ceil(3 n ln n) is <= 28/2^n, n=20",
                        "deterministic", box_mixing(20, t_mix).weighted_sum, 28 / 2 ** 20))

    exact = coll_exact_chain(5, 12)
    slack = min(coll_upper_bound(5, 12) - exact, exact - coll_lower_bound(5, 12))
    out.append(_at_most("coll-bound-sandwich", "lower <= exact <= upper at n=5, t=12",
                        "deterministic", -slack, 0.0, 1e-12))

    gram = subspace_gap_gram(2, 2, 2)
    brute = subspace_gap_brute(2, 2, 2)
    out.append(_at_most("gap-two-methods", "gram and dense routes agree at (2,2,2)",
                        "deterministic", abs(gram.gap_value - brute.gap_value), 1e-10))
    out.append(_at_most("gap-vs-bound", "gap <= (c * q_inf)^2 at (2,2,2)",
                        "deterministic", gram.gap_value, gram.bound))

    worst = Fraction(0)
    for level in range(2, 10):
        worst = max(worst, abs(hitting_time_exact(14, level) - closed_form_exact(14, level)))
    out.append(_close("hitting-closed-form", "recurrence equals closed form exactly, n=14",
                      "deterministic", float(worst), 0.0, 0.0))

    dist = poissonized_dist(12, 6, 8.0)
    out.append(_close("poisson-mean", "poissonized weight law has mean nu_tau, (12,6,8)",
                      "deterministic", dist.mean(), nu_tau(12, 6, 8.0), 1e-12))

    out.append(_close("coupon-example", "untouched-site bound exp(-(n-h)t/n) at (10,10,0)",
                      "deterministic", coupon_bound(10, 10, 0), math.exp(-10.0), 1e-15))

    rng = np.random.default_rng(2024)
    worst_u = 0.0
    for _ in range(100):
        u = haar_unitary(4, rng)
        worst_u = max(worst_u, float(np.abs(u.conj().T @ u - np.eye(4)).max()))
    out.append(_at_most("haar-unitarity", "sampled gates are unitary to 1e-12",
                        "statistical", worst_u, 1e-12))

    mean, err = mc_expected_collision(EnsembleSpec(COMPLETE_GRAPH, n=2, s=2), 500, seed=101)
    out.append(_at_most("mc-collision-n2", "MC collision within 5 sigma of 2/5 at n=2",
                        "statistical", abs(mean - 0.4), 5 * err))

    frac = anticoncentration_fraction(EnsembleSpec(COMPLETE_GRAPH, n=3, s=0), 0.5, 30, seed=102)
    out.append(_close("anticonc-identity", "identity circuit always clears theta/2^n",
                      "statistical", frac, 1.0, 0.0))

    stats = scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=4, s=0), (0, 1), 5, seed=103)
    out.append(_close("scramble-pure-state", "empty circuit gives trace distance 3/2 on |S|=2",
                      "statistical", stats.trace_distance_mean, 1.5, 1e-12))

    return out


def _full_checks() -> list[CheckResult]:
    out = []

    worst_z = 0.0
    for n in (2, 3, 4, 5):
        for s, mean, err in cg_collision_curve(n, 10, 100_000, seed=200 + n):
            worst_z = max(worst_z, abs(mean - coll_exact_chain(n, s)) / err)
    out.append(_at_most("chain-vs-statevector",
                        "complete-graph MC collision matches the exact weight chain, n<=5",
                        "statistical", worst_z, 4.0))

    out.append(_at_most("eigen-residual-50", "Q v_m = lambda_m v_m, n=50",
                        "deterministic", eigen_system(50).max_residual(), 1e-10))

    f0 = shifted_initial(30)
    spectral = np.array(q_t_spectral(30, 1000, f0).values)
    powered = q_t_powering(30, 1000, f0)
    rel = float(np.max(np.abs(spectral - powered) / np.maximum(np.abs(powered), 1e-300)))
    out.append(_at_most("spectral-vs-powering", "eigenexpansion equals matrix powering, (30,1000)",
                        "deterministic", rel, 1e-8))

    coupled = coupled_x_samples(20, 25, 100_000, seed=210)
    direct = p_walk_samples(20, 25, 100_000, seed=211)
    cc = np.bincount(coupled.astype(int), minlength=21) / coupled.size
    dc = np.bincount(direct.astype(int), minlength=21) / direct.size
    out.append(_at_most("coupling-x-marginal", "coupled X marginal matches the direct walk, n=20",
                        "statistical", 0.5 * float(np.abs(cc - dc).sum()), 0.02))

    samples = decoupled_weight_samples(12, 6, 8.0, 100_000, seed=212)
    dist = poissonized_dist(12, 6, 8.0)
    out.append(_at_most("poissonization-law", "decoupled MC matches the binomial convolution, (12,6,8)",
                        "statistical", _tv_from_samples(samples, dist), 0.01))

    mean, err = mc_expected_collision(EnsembleSpec(HAAR_FULL, n=3), 100_000, seed=213)
    out.append(_at_most("haar-full-collision", "full-Haar MC collision equals 2/(2^n+1), n=3",
                        "statistical", abs(mean - 2 / 9), 4 * err))

    stats = scrambling_check(EnsembleSpec(COMPLETE_GRAPH, n=5, s=60), (0, 1), 2000, seed=214)
    out.append(_at_most("scramble-purity-bound",
                        "trace-norm^2 <= 2^|S| purity - 1 held on every sample, n=5",
                        "statistical", -stats.min_slack, 0.0, 1e-9))

    return out


def verify_suite(level: str) -> VerificationReport:
    """Run the invariant suite; fast is rational identities plus small MC,
    full adds the large-n spectral and 10^5-trial statistical checks."""
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    start = time.perf_counter()
    entries = _fast_checks()
    if level == "full":
        entries.extend(_full_checks())
    elapsed = time.perf_counter() - start
    return VerificationReport(level=level, version=__version__,
                              elapsed_seconds=elapsed, entries=tuple(entries))


def run_verify(cfg: ExperimentConfig) -> int:
    report = verify_suite(cfg.level or "fast")
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, f"verify-{report.level}.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    for e in report.entries:
        print(f"{e.status.upper():4s} {e.check}: {e.anchor} "
              f"(measured {e.measured:.3g}, expected {e.expected:.3g})")
    verdict = "all checks passed" if report.all_passed else "FAILURES PRESENT"
    print(f"{verdict}; {len(report.entries)} checks in {report.elapsed_seconds:.1f}s")
    print(f"wrote {path}")
    return 0 if report.all_passed else 1


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--n", type=int, default=None, help="system size (qubits/sites)")
    shared.add_argument("--d", type=int, default=None, help="local dimension")
    shared.add_argument("--t", type=int, default=None, help="time / degree / sweep end")
    shared.add_argument("--s", type=int, default=None, help="gates or brickwork rounds")
    shared.add_argument("--c", type=int, default=None, help="2-D lattice repetitions")
    shared.add_argument("--m", type=int, default=None, help="lattice side for gap runs")
    shared.add_argument("--trials", type=int, default=None, help="Monte Carlo trials")
    shared.add_argument("--seed", type=int, default=None, help="root RNG seed")
    shared.add_argument("--theta", type=float, default=None, help="anti-concentration threshold")
    shared.add_argument("--subset-size", type=int, default=None, help="scrambling subsystem size")
    shared.add_argument("--ensemble", choices=sorted(ENSEMBLE_ALIASES), default=None,
                        help="circuit ensemble")
    shared.add_argument("--level", choices=("fast", "full"), default=None,
                        help="verification depth")
    shared.add_argument("--threads", type=int, default=None,
                        help="worker pool size (default: DESIGNLAB_THREADS or all cores)")
    shared.add_argument("--out", type=str, default=None, help="output directory")
    shared.add_argument("--config", type=str, default=None, help="flat key-value config file")
    shared.add_argument("--format", choices=("csv", "json"), default=None,
                        help="artifact format")

    parser = argparse.ArgumentParser(
        prog="designlab",
        description="Random-circuit moment laboratory: chains, spectra, gaps, simulation.")
    sub = parser.add_subparsers(dest="command")
    descriptions = {
        "coll-mc": "Monte Carlo collision probability (full depth curve for cg)",
        "coll-chain": "exact weight-chain collision sweep over depth",
        "coll-bound": "collision lower/upper bounds over depth",
        "spectral-mix": "box-norm mixing curve and eigenvalue spectrum",
        "gap-2d": "row/column moment-space gap on the square lattice",
        "anticonc": "fraction of circuits clearing an output-probability threshold",
        "hitting": "expected hitting times of the weight chain",
        "waittime": "coupled-walk X marginal vs the direct chain",
        "scramble": "subsystem trace distance and purity under deep circuits",
        "perm-checks": "exact Weingarten table for (t, d)",
        "verify": "run the invariant suite and exit nonzero on failure",
    }
    for name, desc in descriptions.items():
        sub.add_parser(name, parents=[shared], help=desc, description=desc)
    return parser


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values = load_config_file(args.config) if args.config else {}
    for key in CONFIG_KEY_TYPES:
        flag_value = getattr(args, key)
        if flag_value is not None:
            values[key] = flag_value
    seed = values.pop("seed", None)
    if seed is None:
        if args.command in SEEDED_COMMANDS:
            seed = int(np.random.SeedSequence().entropy % 2 ** 63)
        else:
            seed = 0
    threads = values.pop("threads", None)
    if threads is None:
        threads = int(os.environ.get("DESIGNLAB_THREADS", 0)) or os.cpu_count() or 1
    out = values.pop("out", None) or "."
    fmt = values.pop("format", None) or ("json" if args.command == "gap-2d" else "csv")
    return ExperimentConfig(experiment=args.command, seed=seed, threads=threads,
                            out=out, format=fmt, **values)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    try:
        cfg = _resolve_config(args)
        if args.command == "verify":
            return run_verify(cfg)
        if args.command in SEEDED_COMMANDS:
            print(f"effective seed: {cfg.seed}")
        for name, header, rows, extra in RUNNERS[args.command](cfg):
            for path in write_artifact(cfg, name, header, rows, extra):
                print(f"wrote {path}")
        return 0
    except (ValueError, NormDriftError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
