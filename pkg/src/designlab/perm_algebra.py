"""Exact symmetric-group combinatorics.

Transposition distances, permutation Gram matrices, Weingarten tables, and
the scalar sums that feed the subspace-angle bounds.  All arithmetic here is
exact (integers and ``fractions.Fraction``); floats appear only when a caller
asks for eigenvalues or evaluates the scalar sums at a real argument.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# One-line notation on {0..t-1}; lexicographic enumeration order is part of
# the contract so downstream matrices are reproducible bit-for-bit.
Perm = tuple[int, ...]

MAX_ENUM_DEGREE = 8
MAX_GRAM_DEGREE = 6
MAX_WEINGARTEN_DEGREE = 5


class SizeLimitError(ValueError):
    """A factorial-sized enumeration was requested beyond the supported degree."""


class DegeneracyError(ValueError):
    """The permutation Gram matrix is singular, so no Weingarten table exists."""

    def __init__(self, t: int, d: int):
        self.t = t
        self.d = d
        super().__init__(
            f"permutation Gram matrix over S_{t} at local dimension d={d} "
            f"is singular (requires d >= t={t})"
        )


def identity_perm(t: int) -> Perm:
    return tuple(range(t))


def compose(a: Perm, b: Perm) -> Perm:
    """(a o b)(i) = a[b[i]]."""
    return tuple(a[b[i]] for i in range(len(a)))


def inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, ai in enumerate(a):
        out[ai] = i
    return tuple(out)


def cycle_count(p: Perm) -> int:
    seen = [False] * len(p)
    count = 0
    for start in range(len(p)):
        if seen[start]:
            continue
        count += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = p[i]
    return count


def cycle_type(p: Perm) -> tuple[int, ...]:
    """Cycle lengths of p, sorted descending."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = p[i]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def enumerate_sym(t: int) -> list[Perm]:
    """All permutations of degree t in lexicographic one-line order.

    Raises SizeLimitError outside 1 <= t <= 8.
    """
    if not 1 <= t <= MAX_ENUM_DEGREE:
        raise SizeLimitError(f"degree t={t} outside supported range 1..{MAX_ENUM_DEGREE}")
    return [tuple(p) for p in itertools.permutations(range(t))]


def transposition_distance(a: Perm, b: Perm) -> int:
    """Minimal number of transpositions mapping a to b.

    Equals t minus the cycle count of a^-1 b; symmetric and a metric.
    """
    if len(a) != len(b):
        raise ValueError(f"degree mismatch: {len(a)} vs {len(b)}")
    return len(a) - cycle_count(compose(inverse(a), b))


@dataclass(frozen=True)
class GramMatrix:
    """Pairwise overlaps d^(-m*dist) of permutation states on m sites."""

    degree: int
    sites: int
    dim: int
    perms: tuple[Perm, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(e) for e in row] for row in self.entries])

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.to_numpy()).min())


def gram_matrix(t: int, m: int, d: int) -> GramMatrix:
    """Exact Gram matrix with entries d^(-m * dist(pi, sigma)) over S_t.

    Symmetric, unit diagonal, PSD, with minimum eigenvalue at least
    1 - t(t-1)/(2 d^m).
    """
    if not 1 <= t <= MAX_GRAM_DEGREE:
        raise SizeLimitError(f"degree t={t} outside supported range 1..{MAX_GRAM_DEGREE}")
    if d < 2:
        raise ValueError(f"local dimension d={d} must be >= 2")
    if m < 1:
        raise ValueError(f"site count m={m} must be >= 1")
    perms = enumerate_sym(t)
    rows = []
    for a in perms:
        rows.append(tuple(
            Fraction(1, d ** (m * transposition_distance(a, b))) for b in perms
        ))
    return GramMatrix(degree=t, sites=m, dim=d, perms=tuple(perms), entries=tuple(rows))


def f_t(t: int, alpha: float) -> float:
    """Sum over S_t of alpha^(-dist(e, sigma)).

    Satisfies f_t(alpha) <= 1 + 2 t^2 / alpha whenever alpha >= 2 t^2.
    """
    if alpha <= 1:
        raise ValueError(f"alpha={alpha} must exceed 1")
    e = identity_perm(t)
    return float(sum(float(alpha) ** (-transposition_distance(e, s))
                     for s in enumerate_sym(t)))


def h_func(base: float, t: int, sigmas: list[Perm]) -> float:
    """Sum over pi in S_t of base^(-sum_i dist(pi, sigma_i)).

    With M = len(sigmas) and not all sigma_i equal, the value is at most
    1/base + 1/base^(M-1) + 2 t^2 / base^M.
    """
    if not sigmas:
        raise ValueError("sigmas must be a nonempty list of permutations")
    if base <= 1:
        raise ValueError(f"base={base} must exceed 1")
    for s in sigmas:
        if len(s) != t:
            raise ValueError(f"degree mismatch: expected {t}, got {len(s)}")
    total = 0.0
    for pi in enumerate_sym(t):
        exponent = sum(transposition_distance(pi, s) for s in sigmas)
        total += float(base) ** (-exponent)
    return total


def _solve_fraction(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Exact Gauss-Jordan solve; None when the matrix is singular."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


@dataclass(frozen=True)
class WeingartenTable:
    """Exact Weingarten coefficients for degree t at local dimension d.

    Values depend only on cycle type; the table is the matrix inverse of
    [d^(#cycles(mu^-1 nu))] over S_t.
    """

    degree: int
    dim: int
    by_type: dict[tuple[int, ...], Fraction]

    def value(self, p: Perm) -> Fraction:
        return self.by_type[cycle_type(p)]

    def matrix(self) -> list[list[Fraction]]:
        perms = enumerate_sym(self.degree)
        return [[self.value(compose(inverse(a), b)) for b in perms] for a in perms]

    def to_json(self) -> str:
        payload = {
            "degree": self.degree,
            "dim": self.dim,
            "values": {
                "+".join(str(part) for part in ct): str(v)
                for ct, v in sorted(self.by_type.items(), reverse=True)
            },
        }
        return json.dumps(payload, indent=2)


def weingarten(t: int, d: int) -> WeingartenTable:
    """Exact rational inverse of the S_t Gram matrix [d^(#cycles)].

    Solved on the cycle-type-collapsed system: the inverse of a class
    element of the group algebra is again a class function, so one row per
    cycle type suffices.  Raises DegeneracyError when the matrix is
    singular, which happens exactly when d < t.
    """
    if not 1 <= t <= MAX_WEINGARTEN_DEGREE:
        raise SizeLimitError(f"degree t={t} outside supported range 1..{MAX_WEINGARTEN_DEGREE}")
    if d < 1:
        raise ValueError(f"local dimension d={d} must be >= 1")
    perms = enumerate_sym(t)
    types = sorted({cycle_type(p) for p in perms}, reverse=True)
    index = {ct: i for i, ct in enumerate(types)}
    reps = {}
    for p in perms:
        reps.setdefault(cycle_type(p), p)
    # Row for representative mu: sum_nu d^(#cycles(mu^-1 nu)) w[type(nu)] = [mu = e].
    a = [[Fraction(0)] * len(types) for _ in types]
    for ct, mu in reps.items():
        mu_inv = inverse(mu)
        row = a[index[ct]]
        for nu in perms:
            row[index[cycle_type(nu)]] += Fraction(d ** cycle_count(compose(mu_inv, nu)))
    rhs = [Fraction(0)] * len(types)
    rhs[index[(1,) * t]] = Fraction(1)
    solution = _solve_fraction(a, rhs)
    if solution is None:
        raise DegeneracyError(t, d)
    return WeingartenTable(degree=t, dim=d,
                           by_type={ct: solution[index[ct]] for ct in types})


def multiprod(vectors: list) -> float:
    """Sum over coordinates of the entrywise product of the vectors.

    Never decreases when every vector is sorted into descending order.
    """
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim != 2:
        raise ValueError("vectors must share a common length")
    if (arr < 0).any():
        raise ValueError("negative entry in multiprod input")
    return float(arr.prod(axis=0).sum())
