"""Spectral solution of the accelerated weight chain.

Closed-form eigenvalues with Krawtchouk-polynomial left eigenvectors,
exact orthogonality identities, fast t-step evolution, and the box-norm
mixing quantities consumed by the collision bounds.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pauli_chain import (
    Q_CHAIN,
    WeightDistribution,
    box_norm,
    q_transition,
    shift_up,
    shifted_initial,
    to_float_matrix,
)

EXACT_DEFAULT_LIMIT = 40
EXACT_HARD_LIMIT = 60


def krawtchouk(n: int, t: int, x: int) -> int:
    """Degree-t Krawtchouk value at x on {0..n-1}, exact integer:
    sum_i C(x,i) C(n-x-1, t-i) 3^(t-i) (-1)^i."""
    if not (0 <= t <= n - 1 and 0 <= x <= n - 1):
        raise ValueError(f"indices t={t}, x={x} outside 0..{n - 1}")
    return sum(
        math.comb(x, i) * math.comb(n - x - 1, t - i) * 3 ** (t - i) * (-1) ** i
        for i in range(t + 1))


def orthogonality_check(N: int, p, t: int, s: int) -> tuple[Fraction, Fraction]:
    """Exact binomial-weight orthogonality of the parameter-p family.

    Returns (lhs, rhs) with lhs = sum_x C(N,x) p^x q^(N-x) k_t(x) k_s(x)
    and rhs = delta_ts C(N,t) (pq)^t; the two are equal.
    """
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    if not (0 <= t <= N and 0 <= s <= N):
        raise ValueError("need 0 <= t, s <= N")
    q = 1 - p

    def poly(deg: int, x: int) -> Fraction:
        return sum(
            (-1) ** i * q ** i * p ** (deg - i)
            * math.comb(x, i) * math.comb(N - x, deg - i)
            for i in range(deg + 1))

    lhs = sum(
        math.comb(N, x) * p ** x * q ** (N - x) * poly(t, x) * poly(s, x)
        for x in range(N + 1))
    rhs = math.comb(N, t) * (p * q) ** t if t == s else Fraction(0)
    return Fraction(lhs), Fraction(rhs)


@dataclass(frozen=True)
class KrawtchoukBasis:
    """Left eigensystem of the accelerated chain on {0..n-1}.

    vectors[m] is the m-th left eigenvector; its i-th coordinate is
    scale0[m] times the integer table value at (i, m).  Eigenvalues are
    1 - 4m/(3n-1), so the spectral gap is exactly 4/(3n-1).
    """

    n: int
    eigenvalues: np.ndarray
    eigenvalues_exact: tuple
    vectors: np.ndarray
    duals: np.ndarray
    scale0: np.ndarray
    table: tuple
    exact_mode: bool
    fallback: bool

    def gap(self) -> Fraction:
        return Fraction(4, 3 * self.n - 1)

    def max_residual(self) -> float:
        """max_m ||x_m Q - lambda_m x_m||_inf / ||x_m||_inf."""
        q = to_float_matrix(q_transition(self.n))
        prod = self.vectors @ q
        resid = np.abs(prod - self.eigenvalues[:, None] * self.vectors)
        scale = np.abs(self.vectors).max(axis=1)
        return float((resid.max(axis=1) / scale).max())

    def orthonormality_defect(self) -> float:
        """Deviation of the Gram matrix under the 1/pi inner product from
        the identity; exact rational in exact mode (so 0.0 when it holds)."""
        n = self.n
        if self.exact_mode:
            worst = Fraction(0)
            inv_pi = [Fraction(4 ** (n - 1), math.comb(n - 1, i) * 3 ** i)
                      for i in range(n)]
            scale_sq = [Fraction(math.comb(n - 1, m) * 3 ** m, 4 ** (2 * n - 2))
                        for m in range(n)]
            for m in range(n):
                for l in range(m, n):
                    raw = sum(self.table[i][m] * self.table[i][l] * inv_pi[i]
                              for i in range(n))
                    if m == l:
                        worst = max(worst, abs(scale_sq[m] * raw - 1))
                    elif raw != 0:
                        # cross terms must vanish exactly; any leftover is a failure
                        return float("inf")
            return float(worst)
        gram = self.vectors @ self.duals.T
        return float(np.abs(gram - np.eye(n)).max())

    def csv_rows(self):
        header = ("m", "eigenvalue", "scale0")
        rows = [(m, float(self.eigenvalues[m]), float(self.scale0[m]))
                for m in range(self.n)]
        return header, rows


@functools.lru_cache(maxsize=16)
def eigen_system(n: int, exact: bool | None = None) -> KrawtchoukBasis:
    """Closed-form eigensystem of the accelerated chain.

    Exact integer tables always; the mode flag records whether the exact
    rational orthonormality path is active (automatic below n=40;
    requesting it above n=60 falls back to double and sets the flag).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    fallback = False
    if exact is None:
        exact_mode = n <= EXACT_DEFAULT_LIMIT
    elif exact and n > EXACT_HARD_LIMIT:
        exact_mode = False
        fallback = True
    else:
        exact_mode = exact
    denom = 3 * n - 1
    eig_exact = tuple(Fraction(denom - 4 * m, denom) for m in range(n))
    eigenvalues = np.array([float(e) for e in eig_exact])
    table = tuple(tuple(krawtchouk(n, i, m) for m in range(n)) for i in range(n))
    log_scale0 = np.array([
        0.5 * (math.log(math.comb(n - 1, m)) + m * math.log(3.0))
        - (n - 1) * math.log(4.0) for m in range(n)])
    scale0 = np.exp(log_scale0)
    vectors = np.empty((n, n))
    duals = np.empty((n, n))
    for m in range(n):
        for i in range(n):
            vectors[m, i] = scale0[m] * table[i][m]
            # dual coordinate x_m(i)/pi(i), kept exact until the final division
            duals[m, i] = scale0[m] * float(
                Fraction(table[i][m] * 4 ** (n - 1), math.comb(n - 1, i) * 3 ** i))
    return KrawtchoukBasis(n=n, eigenvalues=eigenvalues, eigenvalues_exact=eig_exact,
                           vectors=vectors, duals=duals, scale0=scale0, table=table,
                           exact_mode=exact_mode, fallback=fallback)


def _as_q_array(n: int, f0) -> np.ndarray:
    if isinstance(f0, WeightDistribution):
        arr = np.zeros(n)
        for k, v in f0.items():
            if not 0 <= k <= n - 1:
                raise ValueError(f"support point {k} outside 0..{n - 1}")
            arr[k] = float(v)
        return arr
    arr = np.asarray(f0, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"expected length-{n} vector on 0..{n - 1}")
    return arr


def expansion_coefficients(n: int, f0=None) -> np.ndarray:
    """Coefficients of f0 in the eigenbasis under the 1/pi inner product.
    Defaults to the shifted binomial start law."""
    basis = eigen_system(n)
    arr = _as_q_array(n, shifted_initial(n) if f0 is None else f0)
    return basis.duals @ arr


def q_t_spectral(n: int, t: int, f0) -> WeightDistribution:
    """t-step evolution under the accelerated chain via the eigenexpansion;
    agrees with direct matrix powering."""
    if t < 0:
        raise ValueError("t must be non-negative")
    basis = eigen_system(n)
    arr = _as_q_array(n, f0)
    alphas = basis.duals @ arr
    evolved = (alphas * basis.eigenvalues ** t) @ basis.vectors
    return WeightDistribution(n=n, labels=tuple(range(n)),
                              values=tuple(float(v) for v in evolved),
                              flavor=Q_CHAIN)


def q_t_powering(n: int, t: int, f0) -> np.ndarray:
    """Reference evolution by repeated multiplication with the transition
    matrix; the slow path the spectral route is checked against."""
    mat = to_float_matrix(q_transition(n))
    vec = _as_q_array(n, f0).copy()
    for _ in range(t):
        vec = vec @ mat
    return vec


@dataclass(frozen=True)
class BoxMixing:
    """Both box-norm readings of the t-step start-law evolution plus the
    spectral envelope that dominates the inner-product form."""

    n: int
    t: int
    weighted_sum: float
    inner_product: float
    spectral_bound: float


def box_mixing(n: int, t: int) -> BoxMixing:
    """Box-norm mixing diagnostics at time t from the shifted binomial start."""
    basis = eigen_system(n)
    f0 = _as_q_array(n, shifted_initial(n))
    alphas = basis.duals @ f0
    decayed = alphas * basis.eigenvalues ** t
    evolved = decayed @ basis.vectors
    dist = WeightDistribution(n=n, labels=tuple(range(n)),
                              values=tuple(float(v) for v in evolved),
                              flavor=Q_CHAIN)
    weighted = box_norm(shift_up(dist), n)
    inv_pi = np.array([float(Fraction(4 ** (n - 1), math.comb(n - 1, i) * 3 ** i))
                       for i in range(n)])
    overlap = float(np.dot(f0 * inv_pi, evolved))
    inner = (1.0 - 0.5 ** n) * (12.0 / 2 ** n) * overlap
    bound = (12.0 / 2 ** n) * float(np.dot(alphas * alphas, basis.eigenvalues ** t))
    return BoxMixing(n=n, t=t, weighted_sum=weighted,
                     inner_product=inner, spectral_bound=bound)


def mixing_curve_rows(n: int, times) -> tuple[tuple[str, str], list[tuple[int, float]]]:
    """CSV payload (t, box_norm) of the weighted-sum mixing curve."""
    header = ("t", "box_norm")
    rows = [(int(t), box_mixing(n, int(t)).weighted_sum) for t in times]
    return header, rows
