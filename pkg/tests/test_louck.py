import math
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schurdist.errors import InvalidInput
from schurdist.louck import (hahn_eberlein_exact, krawtchouk, louck_coefficient, louck_coefficient_w,
                             louck_identity_residual, omega_from_x, r_tensor, r_tensor_box_exact_fraction,
                             r_tensor_box_maximizer, r_tensor_box_rate, r_tensor_bullet, rep_matrix,
                             rep_matrix_rate, weight_tensor, z_multiplicity)
from schurdist.partitions import enumerate_two_row
from schurdist.rates import extrapolate
from schurdist.schur import index_sequence, sequence_m

from conftest import random_invertible


def test_weight_tensor_marginals():
    w = weight_tensor([(0, 1, 1, 0), (1, 1, 0, 0), (0, 0, 0, 1)])
    assert w.n == 4 and w[0, 1, 0] == 1 and w[1, 1, 0] == 1
    assert [list(m) for m in w.marginals()] == [[2, 2], [2, 2], [3, 1]]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_louck_identity_exhaustive(n):
    for lam in enumerate_two_row(n):
        for a, b in product(range(2 ** n), repeat=2):
            s, sp = index_sequence(a, n), index_sequence(b, n)
            m, mp = sequence_m(s), sequence_m(sp)
            assert louck_identity_residual(lam, m, mp, s, sp) < 1e-12


def test_weight_variables_agree():
    n = 6
    for lam in enumerate_two_row(n):
        for twom, twomp in product(range(-n, n + 1, 2), repeat=2):
            u, v = (n + twom) // 2, (n + twomp) // 2
            for x in range(0, n + 1):
                try:
                    o = omega_from_x(n, Fraction(twom, 2), Fraction(twomp, 2), x)
                except InvalidInput:
                    continue
                a = louck_coefficient(lam, Fraction(twom, 2), Fraction(twomp, 2), o)
                b = louck_coefficient_w(lam, n - u, n - v, o)
                assert a == pytest.approx(b, abs=1e-14)


def brute_rep(lam, g):
    """D(g) from the n-fold tensor power on symmetrised highest-weight vectors: l2 singlets then 2j symmetric."""
    l1, l2 = lam
    n, twoj = l1 + l2, l1 - l2
    # symmetric power of g on spin j
    basis = []
    for k in range(twoj + 1):
        v = np.zeros(2 ** twoj)
        for idx in range(2 ** twoj):
            if bin(idx).count("1") == k:
                v[idx] = 1
        basis.append(v / np.linalg.norm(v))
    B = np.array(basis).T
    G = np.array([[1.0]])
    for _ in range(twoj):
        G = np.kron(G, g)
    return np.linalg.det(g) ** l2 * (B.T @ G @ B)


@pytest.mark.parametrize("lam", [(1, 0), (2, 0), (3, 1), (4, 0), (3, 3), (5, 2)])
def test_rep_matrix_bruteforce(lam):
    g = random_invertible(np.random.default_rng(sum(lam)))
    assert np.allclose(rep_matrix(lam, g), brute_rep(lam, g), atol=1e-10)


@given(st.integers(0, 6), st.integers(0, 4), st.integers(0, 2 ** 31))
def test_rep_matrix_homomorphism(l1p, l2, seed):
    lam = (l2 + l1p, l2)
    rng = np.random.default_rng(seed)
    g, h = random_invertible(rng), random_invertible(rng)
    assert np.allclose(rep_matrix(lam, g @ h), rep_matrix(lam, g) @ rep_matrix(lam, h), rtol=1e-9, atol=1e-9)


def test_rep_matrix_rate_limit():
    c, l2bar = 0.4, 0.2
    g = np.array([[1, c], [c, 1]])
    ns = (100, 120, 140)
    vals = []
    for n in ns:
        l2 = round(l2bar * n)
        D = rep_matrix((n - l2, l2), g)
        vals.append(math.log(D[(n - 2 * l2) // 2, (n - 2 * l2) // 2].real) / n)
    assert extrapolate(ns, vals) == pytest.approx(rep_matrix_rate((1 - l2bar, l2bar), c), abs=5e-3)


def test_krawtchouk_orthogonality():
    n = 9
    for k, l in product(range(n + 1), repeat=2):
        s = sum(math.comb(n, x) * krawtchouk(k, n, x) * krawtchouk(l, n, x) for x in range(n + 1))
        assert s == (2 ** n * math.comb(n, k) if k == l else 0)


def test_hahn_eberlein_coefficient_extraction():
    n = 9
    for l2, wp, w in [(2, 5, 4), (1, 7, 2), (3, 4, 3), (0, 6, 6)]:
        a, b = wp - l2, n - w - l2
        for x in range(0, 8):
            # coefficient of (yz)^x by explicit bivariate expansion
            tot = 0
            for k in range(l2 + 1):
                if x - k < 0:
                    continue
                tot += (-1) ** k * math.comb(l2, k) * math.comb(a, x - k) * math.comb(b, x - k)
            if x > wp or x > n - w or a < 0 or b < 0:
                assert hahn_eberlein_exact(l2, wp, w, x, n) == 0
            else:
                poly = np.zeros((n + 2, n + 2), dtype=object)
                for k in range(l2 + 1):
                    for i in range(a + 1):
                        for jj in range(b + 1):
                            poly[k + i, k + jj] += (-1) ** k * math.comb(l2, k) * math.comb(a, i) * math.comb(b, jj)
                assert poly[x, x] == tot
                assert hahn_eberlein_exact(l2, wp, w, x, n) == Fraction(tot, math.comb(wp, x) * math.comb(n - w, x))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bullet_r_tensor(n):
    for beta, gamma in product(enumerate_two_row(n), repeat=2):
        for twom, twomp in product(range(-n, n + 1, 2), repeat=2):
            assert r_tensor((n, 0), beta, gamma, Fraction(twom, 2), Fraction(twomp, 2)) == pytest.approx(
                r_tensor_bullet(beta, gamma, Fraction(twom, 2), Fraction(twomp, 2)), abs=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_box_r_tensor_two_routes(n):
    h = n // 2
    for b2, g2 in product(range(h + 1), repeat=2):
        assert float(r_tensor_box_exact_fraction(b2, g2, n)) == pytest.approx(
            r_tensor((h, h), (n - b2, b2), (n - g2, g2), 0, 0), abs=1e-12)


def test_box_r_vanishes_below_support():
    assert r_tensor_box_exact_fraction(1, 1, 8) == 0
    assert r_tensor_box_rate((0.8, 0.2), (0.8, 0.2)) == -math.inf


def test_box_rate_limit():
    # log R / n = r + (a log n + b)/n; fit the three unknowns from exact values
    ns = (200, 400, 600)
    ys = [math.log(float(r_tensor_box_exact_fraction(2 * n // 5, 2 * n // 5, n))) / n for n in ns]
    M = np.array([[1, math.log(n) / n, 1 / n] for n in ns])
    r = np.linalg.solve(M, ys)[0]
    assert r == pytest.approx(r_tensor_box_rate((0.6, 0.4), (0.6, 0.4)), abs=1e-3)


def test_box_rate_endpoints():
    assert r_tensor_box_rate((0.5, 0.5), (0.5, 0.5)) == pytest.approx(math.log(2))
    assert r_tensor_box_rate((1, 0), (0.5, 0.5)) == pytest.approx(0, abs=1e-15)
    assert 0 <= r_tensor_box_maximizer((0.6, 0.4), (0.7, 0.3)) <= 0.5


def words(counts):
    letters = [i for i, c in enumerate(counts) for _ in range(c)]
    return set(permutations(letters))


def brute_z(x, w):
    # pairs of words over {A, B, C} with letter counts w; x_i = positions with u = i and u' != i
    out = 0
    ws = words(w)
    for u in ws:
        for v in ws:
            if all(sum(1 for p in range(len(u)) if u[p] == i and v[p] != i) == x[i] for i in range(3)):
                out += 1
    return out


def test_z_worked_value():
    assert z_multiplicity(1, 1, 1, 1, 1, 1, 3) == 12


@pytest.mark.parametrize("w", [(1, 1, 1), (2, 1, 1), (2, 2, 1), (3, 1, 1), (2, 2, 2)])
def test_z_bruteforce(w):
    n = sum(w)
    for x in product(*(range(k + 1) for k in w)):
        assert z_multiplicity(*x, *w, n) == brute_z(x, w)
