"""Dense statevector simulation of the random-circuit ensembles at small n.

Brute-force oracle for collision probability, balanced-monomial moments,
anti-concentration fractions, and subsystem scrambling.  Qubits only: the
chain modules carry the large-n theory, this module supplies ground truth
against which they are checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_QUBITS = 14
MAX_HAAR_DIM = 64
MONOMIAL_MAX_QUBITS = 8
MONOMIAL_MAX_DEGREE = 2
SCRAMBLE_MAX_QUBITS = 12
NORM_DRIFT_TOL = 1e-8
GATE_NORM_TOL = 1e-10
GATE_UNITARITY_TOL = 1e-12

COMPLETE_GRAPH = "complete_graph"
LATTICE_1D = "lattice_1d"
LATTICE_2D = "lattice_2d"
HAAR_FULL = "haar_full"
ENSEMBLE_KINDS = (COMPLETE_GRAPH, LATTICE_1D, LATTICE_2D, HAAR_FULL)


class NormDriftError(RuntimeError):
    """State norm drifted past tolerance; downstream numbers are untrustworthy."""


@lru_cache(maxsize=8)
def _root_stream(seed: int) -> np.random.Philox:
    # jumped() never mutates the root, so one instance serves all trials
    return np.random.Philox(key=seed)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-derived per-trial stream: trial i is reproducible in isolation."""
    return np.random.default_rng(_root_stream(seed).jumped(trial))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix.

    Column phases are fixed so the triangular factor has a positive real
    diagonal, which makes the factorization unique and the law exactly Haar.
    """
    if dim < 2 or dim > MAX_HAAR_DIM:
        raise ValueError(f"dimension {dim} outside the supported range [2, {MAX_HAAR_DIM}]")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _haar4_batch(rng: np.random.Generator, count: int) -> np.ndarray:
    # stacked QR; same construction as haar_unitary, one call for all trials
    z = rng.standard_normal((count, 4, 4)) + 1j * rng.standard_normal((count, 4, 4))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=1, axis2=2)
    return q * (diag / np.abs(diag))[:, None, :]


@dataclass(frozen=True, eq=False)
class GateEvent:
    """A 4x4 unitary acting on the ordered qubit pair (i, j)."""

    i: int
    j: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.i == self.j or self.i < 0 or self.j < 0:
            raise ValueError(f"gate needs two distinct qubits, got ({self.i}, {self.j})")
        if self.matrix.shape != (4, 4):
            raise ValueError("gate matrix must be 4x4")
        defect = np.abs(self.matrix.conj().T @ self.matrix - np.eye(4)).max()
        if defect > GATE_UNITARITY_TOL:
            raise ValueError(f"gate unitarity defect {defect:.2e} exceeds {GATE_UNITARITY_TOL}")


@dataclass(frozen=True)
class EnsembleSpec:
    """Which circuit family to sample.

    kind selects the family; s counts gates (complete graph) or brickwork
    rounds (lattices); c counts the outer row/column repetitions of the 2-D
    lattice.  d is fixed to 2: this module is qubit-only.
    """

    kind: str
    n: int
    s: int = 0
    c: int = 0
    d: int = 2

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}; expected one of {ENSEMBLE_KINDS}")
        if self.d != 2:
            raise ValueError("only qubits (d=2) are simulated here")
        if self.n < 1 or self.n > MAX_QUBITS:
            raise ValueError(f"need 1 <= n <= {MAX_QUBITS}, got {self.n}")
        if self.s < 0 or self.c < 0:
            raise ValueError("s and c must be non-negative")
        if self.kind in (COMPLETE_GRAPH, LATTICE_1D) and self.n < 2:
            raise ValueError(f"{self.kind} needs n >= 2")
        if self.kind == LATTICE_2D:
            m = math.isqrt(self.n)
            if m * m != self.n or m < 2:
                raise ValueError(f"2-D lattice needs a square qubit count >= 4, got {self.n}")
        if self.kind == HAAR_FULL and 2 ** self.n > MAX_HAAR_DIM:
            raise ValueError(f"full Haar sampling limited to 2^n <= {MAX_HAAR_DIM}")


@lru_cache(maxsize=512)
def _pair_indices(n: int, i: int, j: int) -> tuple[np.ndarray, ...]:
    """Amplitude indices grouped by the (x_i, x_j) bit pattern, gate basis order."""
    bi = 1 << (n - 1 - i)
    bj = 1 << (n - 1 - j)
    lo, hi = sorted((n - 1 - i, n - 1 - j))
    r = np.arange(1 << (n - 2))
    rest = (r & ((1 << lo) - 1)) | ((r >> lo) << (lo + 1))
    rest = (rest & ((1 << hi) - 1)) | ((rest >> hi) << (hi + 1))
    idx = (rest, rest + bj, rest + bi, rest + bi + bj)
    for a in idx:
        a.setflags(write=False)
    return idx


def _apply_two(amps: np.ndarray, n: int, i: int, j: int, u: np.ndarray) -> None:
    # in-place strided update; qubit 0 owns the most significant bit
    i00, i01, i10, i11 = _pair_indices(n, i, j)
    block = np.stack((amps[i00], amps[i01], amps[i10], amps[i11]))
    new = u @ block
    amps[i00] = new[0]
    amps[i01] = new[1]
    amps[i10] = new[2]
    amps[i11] = new[3]


@dataclass
class Statevector:
    """Amplitudes of an n-qubit pure state, big-endian basis order."""

    n: int
    amps: np.ndarray

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "Statevector":
        amps = np.zeros(2 ** n, dtype=np.complex128)
        amps[index] = 1.0
        return cls(n=n, amps=amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def apply_gate(self, event: GateEvent) -> None:
        _apply_two(self.amps, self.n, event.i, event.j, event.matrix)
        if abs(self.norm() - 1.0) > GATE_NORM_TOL:
            raise NormDriftError(
                f"norm {self.norm():.12f} after gate ({event.i},{event.j}) drifted past {GATE_NORM_TOL}")

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True, eq=False)
class CircuitRealization:
    """One sampled circuit: a gate sequence, or one global unitary."""

    n: int
    events: tuple[GateEvent, ...]
    global_unitary: np.ndarray | None = None

    def apply(self, column: int = 0) -> Statevector:
        """Evolve the basis state |column> through the circuit."""
        if self.global_unitary is not None:
            return Statevector(n=self.n, amps=self.global_unitary[:, column].copy())
        state = Statevector.basis(self.n, column)
        for event in self.events:
            state.apply_gate(event)
        return state


def _brickwork_events(qubits: Sequence[int], rounds: int,
                      rng: np.random.Generator) -> list[GateEvent]:
    """Brickwork rounds on a line of qubits: even-pair layer, then odd-pair
    layer; with an odd count the unpaired endpoint idles."""
    events = []
    for _ in range(rounds):
        for start in (0, 1):
            for k in range(start, len(qubits) - 1, 2):
                events.append(GateEvent(qubits[k], qubits[k + 1], haar_unitary(4, rng)))
    return events


def sample_circuit(spec: EnsembleSpec, rng: np.random.Generator) -> CircuitRealization:
    """Draw one circuit realization from the ensemble."""
    if spec.kind == HAAR_FULL:
        return CircuitRealization(n=spec.n, events=(),
                                  global_unitary=haar_unitary(2 ** spec.n, rng))
    if spec.kind == COMPLETE_GRAPH:
        events = []
        for _ in range(spec.s):
            i = int(rng.integers(spec.n))
            j = int(rng.integers(spec.n - 1))
            j += j >= i
            events.append(GateEvent(i, j, haar_unitary(4, rng)))
        return CircuitRealization(n=spec.n, events=tuple(events))
    if spec.kind == LATTICE_1D:
        events = _brickwork_events(range(spec.n), spec.s, rng)
        return CircuitRealization(n=spec.n, events=tuple(events))
    # 2-D lattice: rows pass, columns pass, repeated c times, then rows again
    m = math.isqrt(spec.n)
    events = []

    def rows_pass():
        for r in range(m):
            events.extend(_brickwork_events([r * m + k for k in range(m)], spec.s, rng))

    def cols_pass():
        for col in range(m):
            events.extend(_brickwork_events([k * m + col for k in range(m)], spec.s, rng))

    for _ in range(spec.c):
        rows_pass()
        cols_pass()
    rows_pass()
    return CircuitRealization(n=spec.n, events=tuple(events))


def collision(circuit: CircuitRealization) -> float:
    """Fourth-power sum of output amplitudes of the circuit applied to |0...0>."""
    if circuit.n > MAX_QUBITS:
        raise ValueError(f"collision limited to n <= {MAX_QUBITS}")
    state = circuit.apply()
    norm_sq = float(np.sum(np.abs(state.amps) ** 2))
    if abs(norm_sq - 1.0) > NORM_DRIFT_TOL:
        raise NormDriftError(f"squared norm {norm_sq} drifted past {NORM_DRIFT_TOL}")
    probs = np.abs(state.amps) ** 2
    return float(np.sum(probs * probs))


def mc_expected_collision(spec: EnsembleSpec, trials: int, seed: int) -> tuple[float, float]:
    """Monte Carlo mean and standard error of the collision probability."""
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    values = np.empty(trials)
    for trial in range(trials):
        circuit = sample_circuit(spec, trial_rng(seed, trial))
        values[trial] = collision(circuit)
    mean = math.fsum(values) / trials
    var = math.fsum((v - mean) ** 2 for v in values) / (trials - 1)
    return mean, math.sqrt(var / trials)


def iter_trial_records(spec: EnsembleSpec, trials: int, seed: int) -> Iterator[dict]:
    """Per-trial record stream: trial id, stream seed, collision, amplitude of 0."""
    for trial in range(trials):
        circuit = sample_circuit(spec, trial_rng(seed, trial))
        state = circuit.apply()
        probs = state.probabilities()
        yield {
            "trial": trial,
            "seed": seed,
            "collision": float(np.sum(probs * probs)),
            "amplitude0": [float(state.amps[0].real), float(state.amps[0].imag)],
        }


def cg_collision_curve(n: int, s_max: int, trials: int,
                       seed: int) -> list[tuple[int, float, float]]:
    """Collision mean and stderr at every depth s = 1..s_max of the
    complete-graph ensemble, all trials advanced together in one pass.

    One stream drives all trials (not the per-trial construction of
    mc_expected_collision); each depth's estimate is unbiased, and the whole
    sweep costs one simulation instead of s_max.  Gates are applied on the
    sorted pair, which leaves the sampled ensemble unchanged because the
    Haar law on U(4) is invariant under the fixed swap conjugation.
    """
    if n < 2 or n > MAX_QUBITS:
        raise ValueError(f"need 2 <= n <= {MAX_QUBITS}")
    if s_max < 1 or trials < 100:
        raise ValueError("need s_max >= 1 and trials >= 100")
    rng = np.random.default_rng(np.random.Philox(key=seed))
    states = np.zeros((trials, 2 ** n), dtype=np.complex128)
    states[:, 0] = 1.0
    rows = []
    for s in range(1, s_max + 1):
        first = rng.integers(0, n, size=trials)
        other = rng.integers(0, n - 1, size=trials)
        other = other + (other >= first)
        a = np.minimum(first, other)
        b = np.maximum(first, other)
        gates = _haar4_batch(rng, trials)
        for qa in range(n):
            for qb in range(qa + 1, n):
                sel = np.nonzero((a == qa) & (b == qb))[0]
                if sel.size == 0:
                    continue
                idx = np.stack(_pair_indices(n, qa, qb))
                sub = states[sel]
                sub[:, idx] = np.einsum("tuv,tvk->tuk", gates[sel], sub[:, idx])
                states[sel] = sub
        probs = np.abs(states) ** 2
        coll = np.sum(probs * probs, axis=1)
        mean = float(coll.mean())
        stderr = float(coll.std(ddof=1) / math.sqrt(trials))
        rows.append((s, mean, stderr))
    return rows


def anticoncentration_fraction(spec: EnsembleSpec, theta: float,
                               trials: int, seed: int) -> float:
    """Fraction of circuits whose |<0|C|0>|^2 clears theta/2^n."""
    if theta <= 0:
        raise ValueError("threshold must be positive")
    if trials < 1:
        raise ValueError("need at least one trial")
    cutoff = theta / 2 ** spec.n
    hits = 0
    for trial in range(trials):
        circuit = sample_circuit(spec, trial_rng(seed, trial))
        amp0 = circuit.apply().amps[0]
        if abs(amp0) ** 2 >= cutoff:
            hits += 1
    return hits / trials


@dataclass(frozen=True)
class MonomialEstimate:
    """Monte Carlo estimate of one balanced monomial in circuit entries."""

    mean: complex
    stderr: float
    diagonal: bool
    trials: int


def monomial_estimate(spec: EnsembleSpec, degree: int, rows: Sequence[int],
                      cols: Sequence[int], trials: int, seed: int) -> MonomialEstimate:
    """Estimate E[prod_a C_{rows[a], cols[a]} * prod_b conj(C_{rows[t+b], cols[t+b]})].

    The first `degree` index pairs are the plain factors, the last `degree`
    the conjugated ones.  Entries come from applying each sampled circuit to
    the needed basis columns; no full matrix is ever assembled.  A monomial
    is diagonal when the plain and conjugated index-pair multisets coincide,
    i.e. when it is a product of absolute squares.
    """
    if degree < 1 or degree > MONOMIAL_MAX_DEGREE:
        raise ValueError(f"need 1 <= degree <= {MONOMIAL_MAX_DEGREE}")
    if spec.n > MONOMIAL_MAX_QUBITS:
        raise ValueError(f"monomial estimation limited to n <= {MONOMIAL_MAX_QUBITS}")
    if len(rows) != 2 * degree or len(cols) != 2 * degree:
        raise ValueError(f"need 2*degree = {2 * degree} row and column indices")
    dim = 2 ** spec.n
    if any(not 0 <= r < dim for r in rows) or any(not 0 <= c < dim for c in cols):
        raise ValueError(f"matrix indices must lie in [0, {dim})")
    if trials < 2:
        raise ValueError("need at least two trials")

    plain = sorted(zip(rows[:degree], cols[:degree]))
    conj = sorted(zip(rows[degree:], cols[degree:]))
    needed = sorted(set(cols))
    samples = np.empty(trials, dtype=np.complex128)
    for trial in range(trials):
        circuit = sample_circuit(spec, trial_rng(seed, trial))
        columns = {c: circuit.apply(column=c).amps for c in needed}
        value = 1.0 + 0.0j
        for a in range(degree):
            value *= columns[cols[a]][rows[a]]
        for b in range(degree, 2 * degree):
            value *= np.conj(columns[cols[b]][rows[b]])
        samples[trial] = value
    mean = complex(math.fsum(samples.real) / trials, math.fsum(samples.imag) / trials)
    spread = math.fsum(abs(v - mean) ** 2 for v in samples) / (trials - 1)
    return MonomialEstimate(mean=mean, stderr=math.sqrt(spread / trials),
                            diagonal=plain == conj, trials=trials)


@dataclass(frozen=True)
class ScramblingStats:
    """Subsystem scrambling summary over sampled circuits.

    min_slack is the smallest observed value of
    2^|S| Tr(rho^2) - 1 - (trace distance)^2; non-negative means the
    per-sample Cauchy-Schwarz bound held on every sample.
    """

    trace_distance_mean: float
    purity_mean: float
    min_slack: float
    trials: int


def scrambling_check(spec: EnsembleSpec, subset: Sequence[int],
                     trials: int, seed: int) -> ScramblingStats:
    """Mean trace distance of rho_S to maximally mixed, and mean purity."""
    if spec.n > SCRAMBLE_MAX_QUBITS:
        raise ValueError(f"scrambling check limited to n <= {SCRAMBLE_MAX_QUBITS}")
    subset = tuple(subset)
    if len(subset) == 0 or len(set(subset)) != len(subset):
        raise ValueError("subset must be non-empty and duplicate-free")
    if any(not 0 <= q < spec.n for q in subset):
        raise ValueError(f"subset qubits must lie in [0, {spec.n})")
    if trials < 1:
        raise ValueError("need at least one trial")

    k = len(subset)
    dim_s = 2 ** k
    tdists = np.empty(trials)
    purities = np.empty(trials)
    min_slack = math.inf
    for trial in range(trials):
        circuit = sample_circuit(spec, trial_rng(seed, trial))
        tensor = circuit.apply().amps.reshape((2,) * spec.n)
        front = np.moveaxis(tensor, subset, range(k)).reshape(dim_s, -1)
        rho = front @ front.conj().T
        evals = np.linalg.eigvalsh(rho)
        tdist = float(np.sum(np.abs(evals - 1.0 / dim_s)))
        purity = float(np.sum(evals ** 2))
        tdists[trial] = tdist
        purities[trial] = purity
        min_slack = min(min_slack, dim_s * purity - 1.0 - tdist * tdist)
    return ScramblingStats(trace_distance_mean=math.fsum(tdists) / trials,
                           purity_mean=math.fsum(purities) / trials,
                           min_slack=min_slack, trials=trials)
