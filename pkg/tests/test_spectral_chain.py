import math
import time
from fractions import Fraction

import numpy as np
import pytest

from designlab.pauli_chain import shifted_initial, stationary_q
from designlab.spectral_chain import (
    BoxMixing,
    box_mixing,
    eigen_system,
    expansion_coefficients,
    krawtchouk,
    mixing_curve_rows,
    orthogonality_check,
    q_t_powering,
    q_t_spectral,
)


def test_krawtchouk_edge_rows():
    n = 9
    for x in range(n - 1):
        assert krawtchouk(n, 0, x) == 1
    for t in range(n - 1):
        assert krawtchouk(n, t, 0) == math.comb(n - 1, t) * 3 ** t


def test_krawtchouk_guards():
    with pytest.raises(ValueError):
        krawtchouk(5, 5, 0)
    with pytest.raises(ValueError):
        krawtchouk(5, 0, -1)


def test_krawtchouk_symmetry_exact():
    # C(n-1,x) 3^-t K_t(x) is symmetric in (x,t); exhaustive up to n=12
    for n in (7, 12):
        for x in range(n):
            for t in range(n):
                lhs = Fraction(math.comb(n - 1, x) * krawtchouk(n, t, x), 3 ** t)
                rhs = Fraction(math.comb(n - 1, t) * krawtchouk(n, x, t), 3 ** x)
                assert lhs == rhs


def test_orthogonality_examples():
    lhs, rhs = orthogonality_check(6, Fraction(3, 4), 0, 0)
    assert lhs == rhs == 1
    lhs, rhs = orthogonality_check(9, Fraction(3, 4), 1, 2)
    assert lhs == rhs == 0
    lhs, rhs = orthogonality_check(3, Fraction(3, 4), 1, 1)
    assert lhs == rhs == Fraction(9, 16)


def test_orthogonality_guards():
    with pytest.raises(ValueError):
        orthogonality_check(4, Fraction(5, 4), 1, 1)
    with pytest.raises(ValueError):
        orthogonality_check(4, Fraction(1, 2), 5, 1)


def test_orthogonality_exhaustive_small():
    for N in (1, 4, 8):
        for t in range(N + 1):
            for s in range(N + 1):
                lhs, rhs = orthogonality_check(N, Fraction(3, 4), t, s)
                assert lhs == rhs


def test_mainortho_normalization():
    # the reconciled constant is 4^(n-1), not 4^n
    for n in range(2, 13):
        for m in range(n):
            total = sum(
                Fraction(krawtchouk(n, t, m) ** 2, math.comb(n - 1, t) * 3 ** t)
                for t in range(n))
            assert total == Fraction(4 ** (n - 1), math.comb(n - 1, m) * 3 ** m)


def test_eigen_system_gap_and_top():
    for n in (2, 5, 23):
        basis = eigen_system(n)
        assert basis.eigenvalues_exact[0] == 1
        assert basis.gap() == Fraction(4, 3 * n - 1)
        assert basis.eigenvalues_exact[0] - basis.eigenvalues_exact[1] == basis.gap()
        spacing = np.diff(basis.eigenvalues)
        assert np.allclose(spacing, -4.0 / (3 * n - 1))


def test_eigen_system_top_vector_is_stationary():
    basis = eigen_system(6)
    pi = stationary_q(6).to_array()
    assert np.abs(basis.vectors[0] - pi).max() < 1e-14


def test_eigen_system_residuals():
    for n in (2, 10, 25, 50):
        assert eigen_system(n).max_residual() < 1e-10


def test_eigen_system_orthonormal():
    assert eigen_system(12).orthonormality_defect() == 0.0
    basis = eigen_system(50)
    assert not basis.exact_mode
    assert basis.orthonormality_defect() < 1e-9


def test_eigen_system_modes():
    assert eigen_system(30).exact_mode
    assert not eigen_system(30, exact=False).exact_mode
    forced = eigen_system(70, exact=True)
    assert forced.fallback and not forced.exact_mode
    ok = eigen_system(55, exact=True)
    assert ok.exact_mode and not ok.fallback
    with pytest.raises(ValueError):
        eigen_system(1)


def test_spectral_reconstruction_and_fixed_point():
    n = 8
    f0 = shifted_initial(n)
    assert np.abs(q_t_spectral(n, 0, f0).to_array() - f0.to_array()).max() < 1e-13
    pi = stationary_q(n)
    for t in (0, 3, 50):
        assert np.abs(q_t_spectral(n, t, pi).to_array() - pi.to_array()).max() < 1e-13


def test_spectral_matches_powering():
    for n, t in ((5, 7), (30, 1000), (100, 10_000)):
        f0 = shifted_initial(n)
        spectral = q_t_spectral(n, t, f0).to_array()
        direct = q_t_powering(n, t, f0)
        rel = np.abs(spectral - direct) / np.maximum(np.abs(direct), 1e-300)
        assert rel.max() < 1e-8, (n, t, rel.max())


def test_spectral_guards():
    with pytest.raises(ValueError):
        q_t_spectral(5, -1, shifted_initial(5))
    with pytest.raises(ValueError):
        q_t_spectral(5, 2, np.ones(4))


def test_box_mixing_forms():
    bm = box_mixing(12, 37)
    assert isinstance(bm, BoxMixing)
    # the inner-product reading is exactly three times the weighted sum
    assert bm.inner_product == pytest.approx(3.0 * bm.weighted_sum, rel=1e-12)
    assert bm.inner_product <= bm.spectral_bound * (1 + 1e-12)


def test_box_mixing_deep_limit():
    n = 10
    alphas = expansion_coefficients(n)
    limit = (1 - 0.5 ** n) * (12.0 / 2 ** n) * alphas[0] ** 2
    deep = box_mixing(n, 100_000)
    assert deep.inner_product == pytest.approx(limit, rel=1e-9)


def test_expansion_coefficient_bounds():
    n = 20
    alphas = expansion_coefficients(n)
    assert alphas[0] <= 1 + 0.5 ** (n - 1)
    for m in range(1, n):
        cap = math.sqrt(math.comb(n - 1, m) * 3 ** m) * 3 * n / (2 * (m + 1))
        assert abs(alphas[m]) <= cap + 1e-9


def test_box_mixing_at_mixing_time():
    n = 25
    t = math.ceil(3 * n * math.log(n))
    assert box_mixing(n, t).weighted_sum <= 28 / 2 ** n


def test_csv_payloads():
    header, rows = eigen_system(5).csv_rows()
    assert header == ("m", "eigenvalue", "scale0")
    assert len(rows) == 5
    assert rows[0][1] == 1.0
    header, rows = mixing_curve_rows(8, [0, 2, 4])
    assert header == ("t", "box_norm")
    assert [r[0] for r in rows] == [0, 2, 4]
    assert all(r[1] >= 0 for r in rows)
