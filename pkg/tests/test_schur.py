from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan as sympy_cg

from schurdist import _kernels
from schurdist.errors import InvalidInput, ResourceError
from schurdist.louck import rep_matrix
from schurdist.schur import (SchurLabel, block_slices, clebsch_gordan, index_sequence, inverse_schur_transform,
                             inverse_schur_transform_array, level, schur_amplitude, schur_matrix,
                             schur_transform, schur_transform_array)

from conftest import random_invertible


@pytest.mark.parametrize("twoj1", range(0, 7))
def test_cg_against_sympy(twoj1):
    j1, j2 = Fraction(twoj1, 2), Fraction(1, 2)
    for J in (j1 + j2, j1 - j2):
        if J < 0:
            continue
        for M in [J - k for k in range(int(2 * J) + 1)]:
            for m2 in (j2, -j2):
                m1 = M - m2
                if abs(m1) > j1:
                    continue
                ref = float(sympy_cg(*(Rational(x.numerator, x.denominator) for x in (j1, j2, J, m1, m2, M))))
                assert clebsch_gordan(j1, m1, j2, m2, J, M) == pytest.approx(ref, abs=1e-14)


def test_cg_general_spins():
    ref = float(sympy_cg(Rational(3, 2), 1, Rational(3, 2), Rational(1, 2), 1, Rational(3, 2)))
    assert clebsch_gordan(Fraction(3, 2), Fraction(1, 2), 1, 1, Fraction(3, 2), Fraction(3, 2)) == pytest.approx(ref)


@pytest.mark.parametrize("n", range(1, 8))
def test_amplitudes_match_fast_transform(n):
    S = schur_matrix(n)
    lv = level(n)
    for i, lab in enumerate(lv.labels()):
        for idx in range(2 ** n):
            assert schur_amplitude(lab, index_sequence(idx, n)) == pytest.approx(S[i, idx], abs=1e-13)


@pytest.mark.parametrize("n", range(1, 11))
def test_transform_orthogonal(n):
    S = schur_matrix(n)
    assert np.abs(S @ S.T - np.eye(2 ** n)).max() < 1e-12


def test_three_qubit_doublet_worked_value():
    # two-box spin-1/2 doublet component of |100>
    lab = SchurLabel(Fraction(1, 2), Fraction(-1, 2), (1, 1, 2))
    assert abs(schur_amplitude(lab, (0, 0, 1))) == pytest.approx(np.sqrt(2 / 3))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_intertwines_local_group(n):
    rng = np.random.default_rng(n)
    g = random_invertible(rng)
    G = g
    for _ in range(n - 1):
        G = np.kron(G, g)
    S = schur_matrix(n)
    X = S @ G @ S.T
    lv = level(n)
    for l2, rows in block_slices(n).items():
        D = rep_matrix((n - l2, l2), g)
        codes = lv.code[rows]
        for code in np.unique(codes):
            r = rows[codes == code]
            twom = lv.twom[r]
            assert list(twom) == sorted(twom)
            assert np.allclose(X[np.ix_(r, r)], D, atol=1e-10)
        others = np.setdiff1d(np.arange(2 ** n), rows)
        assert np.abs(X[np.ix_(rows, others)]).max(initial=0) < 1e-10


@pytest.mark.parametrize("n", [3, 4, 5])
def test_permutations_act_on_multiplicity_only(n):
    S = schur_matrix(n)
    lv = level(n)
    for perm in list(permutations(range(n)))[:12]:
        P = np.zeros((2 ** n, 2 ** n))
        for idx in range(2 ** n):
            bits = index_sequence(idx, n)
            new = tuple(bits[perm[k]] for k in range(n))
            P[int("".join(map(str, new)), 2), idx] = 1
        X = S @ P @ S.T
        same = (lv.twoj[:, None] == lv.twoj[None, :]) & (lv.twom[:, None] == lv.twom[None, :])
        assert np.abs(X[~same]).max() < 1e-12


@given(st.integers(1, 9), st.integers(0, 2 ** 31))
def test_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    c = schur_transform_array(v, n)
    assert np.allclose(inverse_schur_transform_array(c, n), v)
    assert np.linalg.norm(c) == pytest.approx(np.linalg.norm(v))


def test_dict_interface():
    coeffs = schur_transform({(1, 0, 0): 1.0}, 3)
    back = inverse_schur_transform(coeffs, 3)
    assert back[0b100] == pytest.approx(1.0) and np.abs(back).sum() == pytest.approx(1.0)


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not importable")
def test_backends_agree():
    v = np.random.default_rng(1).normal(size=(2 ** 8, 3))
    a = schur_transform_array(v, 8, kernels=_kernels.NUMPY_KERNELS)
    b = schur_transform_array(v, 8, kernels=_kernels.NUMBA_KERNELS)
    assert np.allclose(a, b, atol=1e-14)


def test_errors():
    with pytest.raises(ResourceError):
        schur_transform_array(np.zeros(2), 21)
    with pytest.raises(InvalidInput):
        schur_transform_array(np.zeros(3), 2)
    with pytest.raises(InvalidInput):
        SchurLabel(Fraction(1, 2), Fraction(3, 2), (1, 1, 2))
