import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurdist import _kernels
from schurdist.covariants import (apply_local, basis_state, covariant_power, ghz_family_factors, ghz_family_state,
                                  ghz_state, lu_inner_product, phi_norm_ghz, phi_norm_w, three_tangle, w_state)
from schurdist.errors import InvalidInput, ResourceError, UnsupportedRegion
from schurdist.kronecker import TripletLabel, kronecker_two_row
from schurdist.rates import (GHZ_ANGLES, bipartite_block_probability, bipartite_probability, bipartite_rate,
                             convexity_check, copy_probabilities, copy_probabilities_dense,
                             covariant_ratio_probability, extrapolate, ghz_bullet_probability,
                             ghz_facet_probability, keyl_werner_check, kkt_residual, local_spectra,
                             r_tensor_probability, rate_ghz_bullet, rate_ghz_facet, rate_w_general, rate_w_plane,
                             rate_w_relative, w_params_with_spectra, w_plane_probability)

from conftest import random_state

seeds = st.integers(0, 2 ** 32 - 1)
ANG = (0.5, 0.7, 1.0, 1.2, 0.3)


def max_gap(a, b):
    keys = set(a.entries) | set(b.entries)
    return max(abs(a.get(t) - b.get(t)) for t in keys)


# probabilities ---------------------------------------------------------------

@settings(max_examples=10)
@given(seeds, st.integers(1, 5))
def test_projection_matches_dense(seed, n):
    psi = random_state(np.random.default_rng(seed))
    assert max_gap(copy_probabilities(psi, n), copy_probabilities_dense(psi, n)) < 1e-12


@settings(max_examples=20)
@given(seeds, st.integers(1, 7))
def test_normalised_and_supported(seed, n):
    tab = copy_probabilities(random_state(np.random.default_rng(seed)), n)
    assert tab.total() == pytest.approx(1, abs=1e-9)
    assert all(kronecker_two_row(t) > 0 for t in tab.entries)


def test_product_state():
    for n in (3, 6):
        tab = copy_probabilities(basis_state("000"), n)
        assert tab.get(TripletLabel(0, 0, 0, n)) == pytest.approx(1)
        assert tab.total() == pytest.approx(1)


def test_ghz_two_copies_r_tensor():
    assert max_gap(copy_probabilities(ghz_state(), 2), r_tensor_probability(ghz_state(), 2)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_three_routes(n):
    psi = random_state(np.random.default_rng(100 + n))
    proj = copy_probabilities(psi, n)
    rt = r_tensor_probability(psi, n)
    cv = covariant_ratio_probability(psi, n)
    for t, p in cv.entries.items():
        assert abs(p - proj.get(t)) < 1e-10 and abs(rt.get(t) - proj.get(t)) < 1e-10
    assert max_gap(proj, rt) < 1e-10


def test_ratio_route_rejects_degenerate_triplets():
    from schurdist.kronecker import all_triplets
    from schurdist.rates import phi_norm
    t = next(t for t in all_triplets(12) if kronecker_two_row(t) > 1)
    with pytest.raises(UnsupportedRegion):
        phi_norm(ghz_state(), t)


def test_caps():
    with pytest.raises(ResourceError):
        copy_probabilities(ghz_state(), 11)
    with pytest.raises(ResourceError):
        copy_probabilities_dense(ghz_state(), 6)


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not importable")
def test_backends_agree():
    psi = random_state(np.random.default_rng(9))
    a = copy_probabilities(psi, 7, kernels=_kernels.NUMPY_KERNELS)
    b = copy_probabilities(psi, 7, kernels=_kernels.NUMBA_KERNELS)
    assert max_gap(a, b) < 1e-13


@pytest.mark.parametrize("n", [4, 6, 8])
def test_exact_closed_forms_against_projection(n):
    ghz = copy_probabilities(ghz_state(), n)
    for b in range(n // 2 + 1):
        assert ghz.get(TripletLabel(0, b, b, n)) == pytest.approx(ghz_bullet_probability(b, n), abs=1e-13)
    fam = copy_probabilities(ghz_family_state(*ANG), n)
    for b in range(n // 2 + 1):
        for c in range(n // 2 + 1):
            assert fam.get(TripletLabel(n // 2, b, c, n)) == pytest.approx(
                ghz_facet_probability(b, c, n, ANG), abs=1e-13)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_w_plane_probability(n):
    a, b, c, d = 0.2, 0.3, 0.4, 0.1
    tab = copy_probabilities(w_state(a, b, c, d), n)
    for x in range(n // 2 + 1):
        for y in range(n // 2 + 1):
            z = n - x - y
            if 0 <= z <= n // 2:
                t = TripletLabel(x, y, z, n)
                assert tab.get(t) == pytest.approx(w_plane_probability(a, b, c, d, t), abs=1e-14)


# two qubits --------------------------------------------------------------------

def test_bipartite_binomial():
    s = 1 / math.sqrt(2)
    assert bipartite_probability(s, s, 6, 2) == pytest.approx(math.comb(6, 2) / 64)
    assert bipartite_rate(0.3, (0.3, 0.7)) == pytest.approx(0)
    assert bipartite_rate(1.0, (0.5, 0.5)) == pytest.approx(math.log(2))
    with pytest.raises(InvalidInput):
        bipartite_probability(1, 1, 3, 1)


@given(st.floats(0.01, 0.99), st.integers(1, 30))
def test_bipartite_blocks_sum_to_one(x, n):
    a, b = math.sqrt(x), math.sqrt(1 - x)
    assert sum(bipartite_block_probability(a, b, n, (n - 2 * k) / 2) for k in range(n // 2 + 1)) == \
        pytest.approx(1, abs=1e-12)


def test_bipartite_equal_amplitudes_limit():
    n, s = 5, 1 / math.sqrt(2)
    for k in range(3):
        twoj = n - 2 * k
        from schurdist.partitions import syt_count
        assert bipartite_block_probability(s, s, n, twoj / 2) == pytest.approx(
            syt_count((n - k, k)) * (twoj + 1) / 2 ** n)
        near = bipartite_block_probability(math.sqrt(0.5 + 1e-7), math.sqrt(0.5 - 1e-7), n, twoj / 2)
        assert near == pytest.approx(bipartite_block_probability(s, s, n, twoj / 2), rel=1e-6)


@pytest.mark.parametrize("n", [4, 7])
def test_bipartite_blocks_from_projection(n):
    x = 0.3
    psi = math.sqrt(1 - x) * basis_state("000") + math.sqrt(x) * basis_state("011")
    tab = copy_probabilities(psi, n)
    for k in range(n // 2 + 1):
        assert tab.get(TripletLabel(0, k, k, n)) == pytest.approx(
            bipartite_block_probability(math.sqrt(x), math.sqrt(1 - x), n, (n - 2 * k) / 2), abs=1e-13)


# W class -------------------------------------------------------------------------

def test_w_plane_examples():
    assert rate_w_plane(1 / 3, 1 / 3, 1 / 3, 1 / 3, 1 / 3, 1 / 3).value == pytest.approx(0, abs=1e-15)
    a, b, c = 0.2, 0.3, 0.5
    rel = rate_w_plane(0.5, 0.5, 0, a, b, c).value - rate_w_plane(0.5, 0.5, 0, 1 / 3, 1 / 3, 1 / 3).value
    assert rel == pytest.approx(-math.log(3 * math.sqrt(a * b)))
    assert rate_w_plane(0.5, 0.5, 0, 0, 0.5, 0.5).value == math.inf
    assert rate_w_plane(0, 0.5, 0.5, 0, 0.5, 0.5).value == pytest.approx(0, abs=1e-15)
    with pytest.raises(InvalidInput):
        rate_w_plane(0.2, 0.2, 0.2, 0.3, 0.3, 0.4)


@given(st.data())
def test_w_plane_nonnegative(data):
    x = data.draw(st.floats(0, 0.5))
    y = data.draw(st.floats(max(0, 0.5 - x), 0.5))
    a = data.draw(st.floats(0.05, 0.5))
    b = data.draw(st.floats(max(0.05, 0.5 - a), 0.5))
    pt, par = (x, y, 1 - x - y), (a, b, 1 - a - b)
    assert rate_w_plane(*pt, *par).value >= -1e-12
    assert rate_w_plane(*par, *par).value == pytest.approx(0, abs=1e-12)


def test_w_plane_finite_n_converges():
    a, b, c = 0.2, 0.3, 0.5
    for pt in [(1 / 3, 1 / 3, 1 / 3), (0.1, 0.4, 0.5)]:
        ns, gaps = (30, 60, 90), []
        for n in ns:
            t = TripletLabel(round(pt[0] * n), round(pt[1] * n), n - round(pt[0] * n) - round(pt[1] * n), n)
            gaps.append(-math.log(w_plane_probability(a, b, c, 0, t)) / n)
        target = rate_w_plane(*pt, a, b, c).value
        assert gaps[0] - target > gaps[1] - target > gaps[2] - target > 0
        assert abs(extrapolate(ns, gaps) - target) < 0.05


def test_w_plane_nine_copies_gap():
    # at n = 9 the non-exponential prefactor dominates; the gap is recorded, not bounded by 0.25
    tab = copy_probabilities(w_state(), 9)
    p = tab.get(TripletLabel(3, 3, 3, 9))
    assert -math.log(p) / 9 == pytest.approx(0.395164063874357, abs=1e-9)


def test_w_general_reduces_to_plane():
    for pt in [(0.3, 0.3, 0.4), (0.5, 0.25, 0.25), (0.2, 0.4, 0.4)]:
        assert rate_w_general(*pt, 0.2, 0.3, 0.5).value == pytest.approx(rate_w_plane(*pt, 0.2, 0.3, 0.5).value,
                                                                      abs=1e-9)


def test_w_general_origin_matches_inner_products():
    r = rate_w_general(0, 0, 0, 0.25, 0.25, 0.25, 0.25)
    P = covariant_power(w_state(0.25, 0.25, 0.25, 0.25), (20, 0, 0, 0, 0, 0))
    assert r.value >= 0
    assert r.value == pytest.approx(-math.log(lu_inner_product(P, P).real) / 20, abs=0.1)
    assert r.method == "optimized"


def test_w_relative_rate_limit():
    a, b, c, d = 0.2, 0.3, 0.35, 0.15
    pt = (0.2, 0.25, 0.3)
    ns = (40, 80, 160)
    vals = [-math.log(phi_norm_w(a, b, c, d, TripletLabel(*(round(x * n) for x in pt), n), n)) / n for n in ns]
    assert extrapolate(ns, vals) == pytest.approx(rate_w_relative(*pt, a, b, c, d).value, abs=5e-3)


@pytest.mark.parametrize("pt", [(0.2, 0.25, 0.3), (0.1, 0.1, 0.1), (0.05, 0.3, 0.3)])
def test_w_general_kkt_and_sign(pt):
    r = rate_w_general(*pt, 0.2, 0.3, 0.35, 0.15)
    assert r.diagnostics["kkt_residual"] < 1e-6
    assert r.value >= -1e-9
    assert len(r.maximizer) == 3


def test_w_general_zero_at_spectra():
    par = (0.2, 0.3, 0.35, 0.15)
    sp = local_spectra(w_state(*par))
    assert rate_w_general(*sp, *par).value == pytest.approx(0, abs=1e-8)
    star = w_params_with_spectra(sp)
    assert np.allclose(star, par, atol=1e-7)


def test_w_general_errors():
    with pytest.raises(UnsupportedRegion):
        rate_w_general(0.05, 0.05, 0.3, 0.2, 0.3, 0.5)
    with pytest.raises(InvalidInput):
        rate_w_general(0.1, 0.1, 0.1, 0.6, 0.3, 0.5)


# GHZ class -----------------------------------------------------------------------

def test_ghz_facet_reference_values():
    assert rate_ghz_facet(0.5, 0.5).value == pytest.approx(0, abs=1e-12)
    assert rate_ghz_facet(0, 0.5).value == pytest.approx(math.log(2))
    assert rate_ghz_facet(0.5, 0).value == pytest.approx(math.log(2))
    with pytest.raises(UnsupportedRegion):
        rate_ghz_facet(0.1, 0.2)


def fit_with_log(ns, vals):
    """Intercept of r + (a log n + b)/n through three points."""
    M = np.array([[1, math.log(n) / n, 1 / n] for n in ns])
    return float(np.linalg.solve(M, vals)[0])


@pytest.mark.parametrize("b,g", [(0.5, 0.5), (0.3, 0.4), (0.1, 0.45), (0.25, 0.25)])
def test_ghz_facet_finite_n(b, g):
    cand = [n for n in range(120, 281, 20)
            if ghz_facet_probability(round(b * n), round(g * n), n, ANG) > 0][-3:]
    vals = [-math.log(ghz_facet_probability(round(b * n), round(g * n), n, ANG)) / n for n in cand]
    assert fit_with_log(cand, vals) == pytest.approx(rate_ghz_facet(b, g, ANG).value, abs=2e-3)


def test_ghz_vertex_is_half_log_tangle():
    rng = np.random.default_rng(4)
    for _ in range(10):
        ang = tuple(rng.uniform(0.2, 1.3, 5))
        tau = three_tangle(ghz_family_state(*ang))
        assert rate_ghz_facet(0.5, 0.5, ang).value == pytest.approx(-0.5 * math.log(tau), abs=1e-9)
        assert rate_ghz_facet(0.5, 0.5, ang, form="stated").value == pytest.approx(-math.log(tau), abs=1e-9)


def test_ghz_facet_accepts_states_and_factors():
    psi = ghz_family_state(*ANG)
    ref = rate_ghz_facet(0.3, 0.4, ANG).value
    assert rate_ghz_facet(0.3, 0.4, psi).value == pytest.approx(ref, abs=1e-9)
    assert rate_ghz_facet(0.3, 0.4, ghz_family_factors(*ANG)).value == pytest.approx(ref, abs=1e-12)


def test_ghz_facet_routes_agree():
    d = rate_ghz_facet(0.3, 0.4, ANG).diagnostics
    assert abs(d["route_discrepancy"]) < 1e-12
    # the covariant inner products confirm the relative rate at finite n
    ns = (200, 300, 400)
    vals = []
    for n in ns:
        t = TripletLabel(n // 2, round(0.3 * n), round(0.4 * n), n)
        vals.append(-math.log(phi_norm_ghz(*ANG, t, n) / phi_norm_ghz(*GHZ_ANGLES, t, n)) / n)
    assert fit_with_log(ns, vals) == pytest.approx(d["delta_phi_covariant"], abs=1e-3)


def test_ghz_bullet():
    assert rate_ghz_bullet(0.5).value == pytest.approx(math.log(2))
    assert rate_ghz_bullet(0).value == pytest.approx(math.log(4))
    assert rate_ghz_bullet(0.2, form="endpoint").value == pytest.approx(math.log(2))
    ns = (60, 80, 100)
    for b in (0.0, 0.2, 0.4):
        vals = [-math.log(ghz_bullet_probability(round(b * n), n)) / n for n in ns]
        assert extrapolate(ns, vals) == pytest.approx(math.log(2), abs=0.02)


# checks ------------------------------------------------------------------------------

def test_convexity():
    assert convexity_check("w-plane", (0.2, 0.3, 0.5)) < 1e-9
    assert convexity_check("ghz-box", ANG) < 1e-6
    assert convexity_check("w-plane", (1 / 3, 1 / 3, 1 / 3)) == 0
    with pytest.raises(InvalidInput):
        convexity_check("bulk")


def test_keyl_werner_examples():
    r = keyl_werner_check(basis_state("000"), 6)
    assert r["argmax"] == (0, 0, 0) and max(r["deviation"]) == 0
    # maximally mixed marginals: the mode sits O(1/sqrt n) below 1/2
    g = keyl_werner_check(ghz_state(), 8)
    assert g["argmax"] == (2, 2, 2)
    w = keyl_werner_check(w_state(0.2, 0.3, 0.35, 0.15), 8)
    assert max(w["deviation"]) <= 2 / 8


def test_keyl_werner_bipartite_mode_is_one_box_low():
    psi = apply_local(math.sqrt(0.8) * basis_state("000") + math.sqrt(0.2) * basis_state("011"),
                      np.eye(2), np.eye(2), np.eye(2))
    r = keyl_werner_check(psi, 40, route="bipartite")
    assert r["lambda_bar"][1] == pytest.approx(0.175)


def test_extrapolate_linear():
    ns = (10, 20, 40, 80)
    assert extrapolate(ns, [1.5 + 2 / n for n in ns]) == pytest.approx(1.5)
