"""Classical reduction of random-circuit second moments.

The two-site replacement process on Pauli words, its weight birth-death
chain on {0..n}, the affine accelerated chain on {0..n-1}, the wait-time
coupling between the two, the Poissonized decoupled variant, hitting
times, and the collision-probability formulas and bounds built on top.

Exact arithmetic (fractions) for transition matrices and stationary laws;
doubles for powering, Monte Carlo, and bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

P_CHAIN = "P_chain"
Q_CHAIN = "Q_chain"
DECOUPLED = "decoupled"


# ---------------------------------------------------------------------------
# distributions over weights

@dataclass(frozen=True)
class WeightDistribution:
    """A probability vector over integer weights.

    labels and values are aligned; values may be exact Fractions or doubles.
    """

    n: int
    labels: tuple[int, ...]
    values: tuple
    flavor: str

    def items(self):
        return zip(self.labels, self.values)

    def to_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])

    def total(self):
        return sum(self.values)

    def mean(self) -> float:
        return float(sum(k * float(v) for k, v in self.items()))

    def csv_rows(self):
        header = ("k", "value")
        return header, [(k, float(v)) for k, v in self.items()]


def binomial_initial(n: int) -> WeightDistribution:
    """Start law of the weight chain: C(n,k)/(2^n - 1) on {1..n}."""
    denom = 2 ** n - 1
    return WeightDistribution(
        n=n, labels=tuple(range(1, n + 1)),
        values=tuple(Fraction(math.comb(n, k), denom) for k in range(1, n + 1)),
        flavor=P_CHAIN)


def shifted_initial(n: int) -> WeightDistribution:
    """binomial_initial carried to the accelerated chain's {0..n-1} labels."""
    denom = 2 ** n - 1
    return WeightDistribution(
        n=n, labels=tuple(range(n)),
        values=tuple(Fraction(math.comb(n, i + 1), denom) for i in range(n)),
        flavor=Q_CHAIN)


def shift_down(dist: WeightDistribution) -> WeightDistribution:
    """Relabel a {1..n} distribution onto {0..n-1}. The only offset site."""
    return WeightDistribution(n=dist.n, labels=tuple(k - 1 for k in dist.labels),
                              values=dist.values, flavor=Q_CHAIN)


def shift_up(dist: WeightDistribution) -> WeightDistribution:
    return WeightDistribution(n=dist.n, labels=tuple(k + 1 for k in dist.labels),
                              values=dist.values, flavor=P_CHAIN)


# ---------------------------------------------------------------------------
# the two-site replacement process

@dataclass
class PauliString:
    """Length-n word over {0,1,2,3} plus the set of sites touched so far."""

    word: np.ndarray
    hit_set: set[int] = field(default_factory=set)

    @property
    def n(self) -> int:
        return len(self.word)

    def weight(self) -> int:
        return int(np.count_nonzero(self.word))


def initial_pauli(n: int, rng: np.random.Generator) -> PauliString:
    """Uniform word over {0,3}^n minus the all-zero word, empty hit set."""
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        word = 3 * rng.integers(0, 2, size=n, dtype=np.uint8)
        if word.any():
            return PauliString(word=word, hit_set=set())


# the 15 two-site values other than 00, in row-major order
_PAIR_VALUES = [(r >> 2, r & 3) for r in range(1, 16)]


def step_process(state: PauliString, rng: np.random.Generator) -> PauliString:
    """One step: pick a uniform pair; 00 stays 00, anything else is replaced
    by a uniform nonzero two-site value; the pair always joins the hit set."""
    n = state.n
    if n < 2:
        raise ValueError("the process needs at least two sites")
    i = int(rng.integers(0, n))
    j = int(rng.integers(0, n - 1))
    if j >= i:
        j += 1
    word = state.word.copy()
    if word[i] or word[j]:
        a, b = _PAIR_VALUES[int(rng.integers(0, 15))]
        word[i], word[j] = a, b
    hit = set(state.hit_set)
    hit.update((i, j))
    return PauliString(word=word, hit_set=hit)


def batched_process(n: int, steps: int, trials: int, seed: int,
                    start_words: np.ndarray | None = None,
                    track_hits: bool = False):
    """Vectorized Monte Carlo of the replacement process.

    Returns (words, hits) where words is (trials, n) uint8 at time `steps`
    and hits is a boolean (trials, n) coverage mask (None unless tracked).
    """
    rng = np.random.default_rng(np.random.Philox(key=seed))
    if start_words is None:
        words = 3 * rng.integers(0, 2, size=(trials, n), dtype=np.uint8)
        dead = ~words.any(axis=1)
        while dead.any():
            words[dead] = 3 * rng.integers(0, 2, size=(int(dead.sum()), n),
                                           dtype=np.uint8)
            dead = ~words.any(axis=1)
    else:
        words = np.array(start_words, dtype=np.uint8, copy=True)
    hits = np.zeros((trials, n), dtype=bool) if track_hits else None
    rows = np.arange(trials)
    for _ in range(steps):
        i = rng.integers(0, n, size=trials)
        j = rng.integers(0, n - 1, size=trials)
        j = j + (j >= i)
        v1 = words[rows, i]
        v2 = words[rows, j]
        r = rng.integers(1, 16, size=trials)
        update = (v1 != 0) | (v2 != 0)
        words[rows[update], i[update]] = (r[update] >> 2).astype(np.uint8)
        words[rows[update], j[update]] = (r[update] & 3).astype(np.uint8)
        if track_hits:
            hits[rows, i] = True
            hits[rows, j] = True
    return words, hits


# ---------------------------------------------------------------------------
# weight chain and accelerated chain, exact

def p_transition(n: int) -> list[list[Fraction]]:
    """Birth-death transition matrix of the word weight, on {0..n}.

    Up 6k(n-k)/(5n(n-1)), down 2k(k-1)/(5n(n-1)), rest stays; every row
    sums to 1 exactly.
    """
    if n < 2:
        raise ValueError("weight chain needs n >= 2")
    denom = 5 * n * (n - 1)
    rows = []
    for k in range(n + 1):
        row = [Fraction(0)] * (n + 1)
        up = Fraction(6 * k * (n - k), denom)
        down = Fraction(2 * k * (k - 1), denom)
        if k + 1 <= n:
            row[k + 1] = up
        if k - 1 >= 0:
            row[k - 1] = down
        row[k] = 1 - up - down
        rows.append(row)
    return rows


def q_transition(n: int) -> list[list[Fraction]]:
    """Accelerated chain on shifted labels {0..n-1}: affine in position.

    Up 3(n-i-1)/(3n-1), down i/(3n-1), stay 2(i+1)/(3n-1).
    """
    if n < 2:
        raise ValueError("accelerated chain needs n >= 2")
    denom = 3 * n - 1
    rows = []
    for i in range(n):
        row = [Fraction(0)] * n
        up = Fraction(3 * (n - i - 1), denom)
        down = Fraction(i, denom)
        if i + 1 < n:
            row[i + 1] = up
        if i - 1 >= 0:
            row[i - 1] = down
        row[i] = Fraction(2 * (i + 1), denom)
        assert up + down + row[i] == 1
        rows.append(row)
    return rows


def to_float_matrix(rows: list[list[Fraction]]) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in rows])


def stationary_p(n: int) -> WeightDistribution:
    """pi(k) = C(n,k) 3^k / (4^n - 1) on {1..n}; fixed point of p_transition."""
    denom = 4 ** n - 1
    return WeightDistribution(
        n=n, labels=tuple(range(1, n + 1)),
        values=tuple(Fraction(math.comb(n, k) * 3 ** k, denom) for k in range(1, n + 1)),
        flavor=P_CHAIN)


def stationary_q(n: int) -> WeightDistribution:
    """C(n-1,i) 3^i / 4^(n-1) on {0..n-1}; fixed point of q_transition."""
    denom = 4 ** (n - 1)
    return WeightDistribution(
        n=n, labels=tuple(range(n)),
        values=tuple(Fraction(math.comb(n - 1, i) * 3 ** i, denom) for i in range(n)),
        flavor=Q_CHAIN)


# ---------------------------------------------------------------------------
# norms

def _norm_items(f):
    if isinstance(f, WeightDistribution):
        return list(f.items())
    if isinstance(f, dict):
        return list(f.items())
    raise TypeError("expected a WeightDistribution or {weight: value} dict")


def star_norm(f) -> float:
    """Sum of |f(k)| / 3^k over weights k >= 1; weight 0 never contributes."""
    return float(sum(abs(float(v)) / 3 ** k for k, v in _norm_items(f) if k >= 1))


def box_norm(f, n: int) -> float:
    """Sum of |f(k)| * 3n/(k 3^k) over weights k >= 1."""
    return float(sum(abs(float(v)) * 3 * n / (k * 3 ** k)
                     for k, v in _norm_items(f) if k >= 1))


# ---------------------------------------------------------------------------
# exact collision probability by powering the full word process

MAX_EXACT_SITES = 7


def _apply_pair_average(v: np.ndarray, n: int) -> np.ndarray:
    """One step of the process averaged over the uniform pair choice,
    applied to a distribution over all 4^n words."""
    out = np.zeros_like(v)
    for i in range(n):
        for j in range(i + 1, n):
            w = v.reshape((4,) * n)
            w = np.moveaxis(w, (i, j), (0, 1)).reshape(4, 4, -1)
            total = w.sum(axis=(0, 1))
            zz = w[0, 0]
            spread = (total - zz) / 15.0
            block = np.repeat(spread[None, :], 16, axis=0).reshape(4, 4, -1)
            block[0, 0] = zz
            block = block.reshape((4, 4) + (4,) * (n - 2))
            out += np.moveaxis(block, (0, 1), (i, j)).reshape(-1)
    return out / (n * (n - 1) // 2)


def _diag_word_indices(n: int) -> np.ndarray:
    """Indices of words in {0,3}^n, base-4 little-endian, all-zero included."""
    idx = np.zeros(1, dtype=np.int64)
    for k in range(n):
        idx = np.concatenate([idx, idx + 3 * 4 ** k])
    return idx


def coll_exact_chain(n: int, t: int) -> float:
    """Expected collision probability after t steps, from the exact word
    process: (1/2^n)(1 + sum of return mass on nonzero {0,3}^n words).
    """
    if not 2 <= n <= MAX_EXACT_SITES:
        raise ValueError(f"n={n} outside 2..{MAX_EXACT_SITES} (4^n state space)")
    if t < 0:
        raise ValueError("t must be non-negative")
    diag = _diag_word_indices(n)
    v = np.zeros(4 ** n)
    v[diag] = 1.0 / (2 ** n - 1)
    v[0] = 0.0
    for _ in range(t):
        v = _apply_pair_average(v, n)
    returned = v[diag].sum() - v[0]
    return (1.0 + (2 ** n - 1) * returned) / 2 ** n


def coll_upper_bound(n: int, t: int, delta: float = 0.5) -> float:
    """Rigorous upper bound on the expected collision probability.

    Assembles 1/2^n + (1+delta) * sum_m C(n,m) e^(-tm/n) * (star norm of the
    t-step weight law on the n-m covered sites).  Sub-chain sizes 0 and 1
    contribute 1 and 1/3: no pair fits, so the weight is frozen.
    """
    threshold = n * math.log(2 * n) / 2.0
    if t <= threshold:
        raise ValueError(
            f"t={t} violates the bound's hypothesis t > n*ln(2n)/2 = {threshold:.3f} "
            f"(needs enough depth to cover all sites)")
    total = 0.0
    for m in range(n + 1):
        sub = n - m
        if sub == 0:
            star = 1.0
        elif sub == 1:
            star = 1.0 / 3.0
        else:
            mat = to_float_matrix(p_transition(sub))
            vec = np.zeros(sub + 1)
            denom = 2 ** sub - 1
            for k in range(1, sub + 1):
                vec[k] = math.comb(sub, k) / denom
            for _ in range(t):
                vec = vec @ mat
            star = float(sum(vec[k] / 3 ** k for k in range(1, sub + 1)))
        total += math.comb(n, m) * math.exp(-t * m / n) * star
    return 1.0 / 2 ** n + (1.0 + delta) * total


def coll_lower_bound(n: int, t: int) -> float:
    """Product-form lower bound (1/2^n)(1 + e^(-3t/n))^n."""
    return (1.0 + math.exp(-3.0 * t / n)) ** n / 2 ** n


# ---------------------------------------------------------------------------
# coupling between the weight chain and the accelerated chain

def wait_prob(n: int, x: int) -> float:
    """Idle probability of the slow walk at position x (positive only on the
    left region); 1 - 2x(3n-1)/(5n(n-1))."""
    return 1.0 - 2.0 * x * (3 * n - 1) / (5.0 * n * (n - 1))


def skip_prob(n: int, x: int) -> float:
    """Probability a right-region stall of the fast walk is skipped:
    (2x(3n-1) - 5n(n-1)) / (4x^2)."""
    return (2.0 * x * (3 * n - 1) - 5.0 * n * (n - 1)) / (4.0 * x * x)


MIN_GEOMETRIC_SUCCESS = 1e-12


def _geometric_extras(rng: np.random.Generator, idle_prob: float) -> int:
    # inverse-CDF count of idle repeats before the walk adopts the next move
    success = min(max(1.0 - idle_prob, MIN_GEOMETRIC_SUCCESS), 1.0)
    if success >= 1.0:
        return 0
    u = max(float(rng.random()), 1e-300)
    return int(math.log(u) // math.log(1.0 - success))


@dataclass(frozen=True)
class CoupledTrace:
    """Bookkeeping of one coupled run: the fast path in original weight
    labels, accumulated extra idle steps, skipped stalls, and the slow
    walk's elapsed clock s + t_left - t_right."""

    y_path: list[int]
    t_left: int
    t_right: int
    x_time: int


def _q_step_label(n: int, x: int, u: float) -> int:
    # accelerated chain in original labels {1..n}
    up = 3.0 * (n - x) / (3 * n - 1)
    down = (x - 1.0) / (3 * n - 1)
    if u < up:
        return x + 1
    if u < up + down:
        return x - 1
    return x


def coupled_walk(n: int, s: int, rng: np.random.Generator,
                 start: int = 1) -> CoupledTrace:
    """Run the fast (accelerated) walk for s steps, accumulating the idle
    waits and stall skips that reconstruct the slow walk's clock."""
    if n < 2:
        raise ValueError("coupling needs n >= 2")
    if not 1 <= start <= n:
        raise ValueError("start must lie in {1..n}")
    y = start
    path = [y]
    t_left = 0
    t_right = 0
    for _ in range(s):
        idle = wait_prob(n, y)
        if idle > 0:
            t_left += _geometric_extras(rng, idle)
        nxt = _q_step_label(n, y, float(rng.random()))
        if idle <= 0 and nxt == y and float(rng.random()) < skip_prob(n, y):
            t_right += 1
        y = nxt
        path.append(y)
    return CoupledTrace(y_path=path, t_left=t_left, t_right=t_right,
                        x_time=s + t_left - t_right)


def coupled_x_samples(n: int, t: int, trials: int, seed: int,
                      start: int = 1) -> np.ndarray:
    """Positions of the reconstructed slow walk at slow-clock time t,
    sampled from the coupling (vectorized over trials)."""
    rng = np.random.default_rng(np.random.Philox(key=seed))
    x = np.full(trials, start, dtype=np.int64)
    clock = np.zeros(trials, dtype=np.int64)
    denom = 3 * n - 1
    while True:
        active = clock < t
        if not active.any():
            break
        xa = x[active]
        idle_p = 1.0 - 2.0 * xa * denom / (5.0 * n * (n - 1))
        u = rng.random(xa.size)
        v = rng.random(xa.size)
        w = rng.random(xa.size)
        left = idle_p > 0
        waiting = left & (u < idle_p)
        up = 3.0 * (n - xa) / denom
        down = (xa - 1.0) / denom
        step = np.where(v < up, 1, np.where(v < up + down, -1, 0))
        stalled = ~left & (step == 0)
        skip_p = np.where(xa > 0, (2.0 * xa * denom - 5.0 * n * (n - 1)) / (4.0 * xa * xa), 0.0)
        skipped = stalled & (w < skip_p)
        advance = ~waiting & ~skipped
        xa = np.where(advance, xa + step, xa)
        xa = np.where(waiting, x[active], xa)
        consumed = ~skipped
        x[active] = xa
        clock[active] += consumed.astype(np.int64)
    return x


def p_walk_samples(n: int, t: int, trials: int, seed: int,
                   start: int = 1) -> np.ndarray:
    """Direct simulation of the weight chain, vectorized over trials."""
    rng = np.random.default_rng(np.random.Philox(key=seed))
    x = np.full(trials, start, dtype=np.int64)
    denom = 5.0 * n * (n - 1)
    for _ in range(t):
        up = 6.0 * x * (n - x) / denom
        down = 2.0 * x * (x - 1) / denom
        u = rng.random(trials)
        x = np.where(u < up, x + 1, np.where(u < up + down, x - 1, x))
    return x


def accelerated_samples(n: int, t: int, trials: int, seed: int,
                        start: int = 1) -> np.ndarray:
    """Direct simulation of the accelerated chain in original labels."""
    rng = np.random.default_rng(np.random.Philox(key=seed))
    x = np.full(trials, start, dtype=np.int64)
    denom = float(3 * n - 1)
    for _ in range(t):
        up = 3.0 * (n - x) / denom
        down = (x - 1.0) / denom
        u = rng.random(trials)
        x = np.where(u < up, x + 1, np.where(u < up + down, x - 1, x))
    return x


# ---------------------------------------------------------------------------
# decoupled chain and Poissonization

def decoupled_step(word: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform site; a 0 flips to 1; a 1 flips to 0 with probability 1/3."""
    n = len(word)
    if n < 1:
        raise ValueError("word must be nonempty")
    out = np.array(word, copy=True)
    i = int(rng.integers(0, n))
    if out[i] == 0:
        out[i] = 1
    elif rng.random() < 1.0 / 3.0:
        out[i] = 0
    return out


def decoupled_weight_samples(n: int, z: int, tau: float, trials: int,
                             seed: int) -> np.ndarray:
    """Weights after a Pois(tau)-distributed number of decoupled steps,
    started from a weight-z word; vectorized over trials."""
    rng = np.random.default_rng(np.random.Philox(key=seed))
    weights = np.full(trials, z, dtype=np.int64)
    remaining = rng.poisson(tau, size=trials)
    # tracking the weight alone suffices: a uniform site is a one w.p. w/n
    while (remaining > 0).any():
        act = remaining > 0
        wa = weights[act]
        u = rng.random(int(act.sum()))
        v = rng.random(int(act.sum()))
        pick_one = u < wa / n
        flip_down = pick_one & (v < 1.0 / 3.0)
        flip_up = ~pick_one
        weights[act] = wa + flip_up.astype(np.int64) - flip_down.astype(np.int64)
        remaining[act] -= 1
    return weights


def decoupled_fixed_samples(n: int, z: int, t: int, trials: int,
                            seed: int) -> np.ndarray:
    """Weights after exactly t decoupled steps from a weight-z word."""
    rng = np.random.default_rng(np.random.Philox(key=seed))
    weights = np.full(trials, z, dtype=np.int64)
    for _ in range(t):
        u = rng.random(trials)
        v = rng.random(trials)
        pick_one = u < weights / n
        down = pick_one & (v < 1.0 / 3.0)
        weights = weights + (~pick_one).astype(np.int64) - down.astype(np.int64)
    return weights


def nu_tau(n: int, z: int, tau: float) -> float:
    """Mean weight of the Poissonized decoupled chain."""
    decay = math.exp(-4.0 * tau / (3.0 * n))
    return z * decay + 0.75 * n * (1.0 - decay)


def poissonized_dist(n: int, z: int, tau: float) -> WeightDistribution:
    """Exact binomial-convolution law of the Poissonized decoupled weight.

    Sites that started at 0 are one with probability (3/4)(1 - e^(-4tau/3n));
    sites that started at 1 with probability 3/4 + (1/4)e^(-4tau/3n).
    """
    if not 0 <= z <= n:
        raise ValueError("z must lie in {0..n}")
    if tau < 0:
        raise ValueError("tau must be non-negative")
    decay = math.exp(-4.0 * tau / (3.0 * n))
    a = 0.75 * (1.0 - decay)
    b = 0.75 + 0.25 * decay

    def binom_pmf(m: int, p: float) -> np.ndarray:
        return np.array([math.comb(m, k) * p ** k * (1 - p) ** (m - k)
                         for k in range(m + 1)])

    pmf = np.convolve(binom_pmf(n - z, a), binom_pmf(z, b))
    return WeightDistribution(n=n, labels=tuple(range(n + 1)),
                              values=tuple(float(x) for x in pmf),
                              flavor=DECOUPLED)


def poisson_tail_bound(n: int, z: int, tau: float, x: int) -> float:
    """sqrt(tau) e exp(-(nu-x)^2 / (2 nu)) tail envelope for the Poissonized
    weight falling to x or below."""
    nu = nu_tau(n, z, tau)
    return math.sqrt(max(tau, 1.0)) * math.e * math.exp(-(nu - x) ** 2 / (2.0 * nu))


# ---------------------------------------------------------------------------
# hitting times of the weight chain

@dataclass(frozen=True)
class HittingTime:
    """Expected first-passage time from l-1 to l, three ways: exact
    recurrence, the equivalent closed form, and the simplified bound."""

    recurrence: float
    closed_form: float
    simplified_bound: float


def _up_prob(n: int, k: int) -> float:
    return 6.0 * k * (n - k) / (5.0 * n * (n - 1))


def _down_prob(n: int, k: int) -> float:
    return 2.0 * k * (k - 1) / (5.0 * n * (n - 1))


def _level_times(n: int, l_max: int) -> list[float]:
    # e[l] = expected time from l-1 to first visit of l; e[1] = 0 by convention
    e = [0.0] * (l_max + 1)
    for l in range(2, l_max + 1):
        k = l - 1
        e[l] = (1.0 + _down_prob(n, k) * e[l - 1]) / _up_prob(n, k)
    return e


def _closed_form_level(n: int, l: int) -> float:
    if l <= 1:
        return 0.0
    log_cn2 = math.lgamma(n - 1) - math.lgamma(l - 1) - math.lgamma(n - l + 1)
    total = 0.0
    for i in range(1, l):
        log_term = (math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
                    - log_cn2 - (l - i) * math.log(3.0))
        total += math.exp(log_term)
    return 2.5 * total


def _simplified_level(n: int, l: int) -> float:
    if l <= 1:
        return 0.0
    return (5.0 / 6.0) * n * (1.0 / (l - 1) + 1.0 / (0.75 * n - l + 1.75))


def hitting_time(n: int, l: int) -> HittingTime:
    """Expected time for the weight chain to first reach l from l-1."""
    if not 1 <= l <= n:
        raise ValueError(f"l={l} outside 1..{n}")
    return HittingTime(recurrence=_level_times(n, l)[l],
                       closed_form=_closed_form_level(n, l),
                       simplified_bound=_simplified_level(n, l))


def cumulative_hitting(n: int, l: int) -> HittingTime:
    """Expected time from weight 1 to first reach weight l, three ways."""
    if not 1 <= l <= n:
        raise ValueError(f"l={l} outside 1..{n}")
    levels = _level_times(n, l)
    return HittingTime(
        recurrence=float(sum(levels[2:l + 1])),
        closed_form=float(sum(_closed_form_level(n, j) for j in range(2, l + 1))),
        simplified_bound=float(sum(_simplified_level(n, j) for j in range(2, l + 1))))


def hitting_time_exact(n: int, l: int) -> Fraction:
    """Exact rational recurrence value of hitting_time, for cross-checks."""
    if not 1 <= l <= n:
        raise ValueError(f"l={l} outside 1..{n}")
    denom = 5 * n * (n - 1)
    e = Fraction(0)
    for j in range(2, l + 1):
        k = j - 1
        up = Fraction(6 * k * (n - k), denom)
        down = Fraction(2 * k * (k - 1), denom)
        e = (1 + down * e) / up
    return e


def closed_form_exact(n: int, l: int) -> Fraction:
    """Exact rational value of the closed-form hitting expression."""
    if l <= 1:
        return Fraction(0)
    c = math.comb(n - 2, l - 2)
    return Fraction(5, 2) * sum(
        Fraction(math.comb(n, i), c * 3 ** (l - i)) for i in range(1, l))


# ---------------------------------------------------------------------------
# coverage and scrambling statistics

def coupon_bound(n: int, t: int, h: int) -> float:
    """e^(-(n-h) t / n): chance the process has only touched a fixed set of
    h sites after t steps."""
    if not 0 <= h <= n:
        raise ValueError(f"h={h} outside 0..{n}")
    return math.exp(-(n - h) * t / n)


def scramble_weight_stats(n: int, t: int, threshold: float,
                          trials: int = 10_000, seed: int = 0) -> float:
    """Monte Carlo Pr[word weight <= threshold*n at time t], from the
    uniform nonzero {0,3}^n start."""
    words, _ = batched_process(n, t, trials, seed)
    weights = np.count_nonzero(words, axis=1)
    return float(np.mean(weights <= threshold * n))
