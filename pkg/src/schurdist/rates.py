"""n-copy block probabilities p(alpha, beta, gamma | psi) and their exponential rates.

Three independent routes give the probabilities:
  * copy_probabilities: Schur transform of psi^{(x)n} on the three qubit slots;
  * r_tensor_probability: GHZ-class states written as (A x B x C)|GHZ>;
  * covariant_ratio_probability: <Phi(psi)|Phi(psi)> against a reference state.
All rates are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .covariants import (apply_local, as_psi, covariant_power, ghz_decomposition, ghz_family_factors,
                         ghz_family_state, ghz_bullet_sum, lu_inner_product, reduced_density, w_state)
from .errors import InvalidInput, ResourceError, UnsupportedRegion
from .kronecker import TripletLabel, all_triplets, fundamental_decompositions, kronecker_two_row
from .louck import (r_tensor, r_tensor_box_exact_fraction, r_tensor_box_rate, r_tensor_w_plane_exact,
                    rep_matrix, rep_matrix_element, rep_matrix_rate)
from .partitions import syt_count
from .schur import block_slices, level, schur_matrix

COPY_CAP = 10
DENSE_CAP = 5
R_TENSOR_CAP = 8


@dataclass
class ProbTable:
    n: int
    entries: dict = field(default_factory=dict)

    def total(self) -> float:
        return float(sum(self.entries.values()))

    def get(self, t: TripletLabel) -> float:
        return self.entries.get(t, 0.0)

    def support(self) -> list:
        return sorted(t for t, p in self.entries.items() if p > 0)

    def argmax(self) -> TripletLabel:
        """Most likely triplet; ties go to the lexicographically smallest."""
        best = max(self.entries.values())
        return min(t for t, p in self.entries.items() if p == best)


@dataclass
class RateResult:
    value: float
    maximizer: tuple | None = None
    method: str = "closed-form"
    diagnostics: dict = field(default_factory=dict)


def _table_from_array(P, n, tol=1e-10) -> ProbTable:
    out = ProbTable(n)
    for t in all_triplets(n):
        p = float(P[t.rows])
        if kronecker_two_row(t) == 0:
            if p > tol:
                raise ArithmeticError(f"probability {p} on a g=0 triplet {t}")
            continue
        out.entries[t] = max(p, 0.0)
    return out


# direct projection -----------------------------------------------------------

def _canonical_codes(t: int) -> set:
    codes = set()
    for k in range(t // 2 + 1):
        mu = (1, 2) * k + (1,) * (t - 2 * k)
        c = 0
        for e in mu:
            c = 2 * c + (e - 1)
        codes.add(c)
    return codes


@lru_cache(maxsize=None)
def _a_tree(t: int):
    """Rows of level(t) on the canonical A paths with parents re-indexed to level t-1's rows."""
    lv = level(t)
    rows = np.flatnonzero(np.isin(lv.code, list(_canonical_codes(t))))
    if t == 1:
        pmap = np.array([0])
    else:
        prev = _a_tree(t - 1)[0]
        pmap = -np.ones(level(t - 1).size, dtype=np.int64)
        pmap[prev] = np.arange(len(prev))

    def remap(p):
        return np.where(p >= 0, pmap[np.maximum(p, 0)], -1)

    return rows, remap(lv.p0[rows]), lv.c0[rows], remap(lv.p1[rows]), lv.c1[rows]


def _couple_bc(W, lb, lc, kern):
    RB, _, RC, _ = W.shape
    X = kern.couple(np.ascontiguousarray(W.reshape(RB, 2, RC * 2)), lb.p0, lb.c0, lb.p1, lb.c1)
    RBn = X.shape[0]
    X = np.ascontiguousarray(X.reshape(RBn, RC, 2).transpose(1, 2, 0))
    Y = kern.couple(X, lc.p0, lc.c0, lc.p1, lc.c1)
    return Y.T


def copy_probabilities(state, n: int, cap: int = COPY_CAP, kernels=None) -> ProbTable:
    """Block probabilities via a recursive Schur transform on all three slots.

    Every S_n-symmetric vector has equal weight on each Yamanouchi basis vector of
    a frame, so qubit A follows one canonical path per frame and the result is
    multiplied by f^alpha.
    """
    psi = as_psi(state)
    if n < 1:
        raise InvalidInput("n must be positive")
    if n > cap:
        raise ResourceError(f"copy_probabilities capped at n={cap} (cost grows as 4^n)")
    kern = kernels or _kernels.K
    cplx = np.iscomplexobj(psi) and np.any(psi.imag != 0)
    dt = complex if cplx else float
    psi = psi.astype(dt) if cplx else psi.real.astype(float)
    phi = np.ones((1, 1, 1), dtype=dt)
    h = n // 2
    P = np.zeros((h + 1, h + 1, h + 1))
    for t in range(1, n + 1):
        rows, p0, c0, p1, c1 = _a_tree(t)
        lb = level(t)
        last = t == n
        if last:
            jb = (n - lb.twoj) // 2
            onehot = np.zeros((h + 1, lb.size))
            onehot[jb, np.arange(lb.size)] = 1.0
        else:
            new = None
        for r in range(len(rows)):
            W = 0
            for p, c, bit in ((p0[r], c0[r], 0), (p1[r], c1[r], 1)):
                if p >= 0 and c != 0:
                    W = W + c * np.einsum("bc,jk->bjck", phi[p], psi[bit])
            if isinstance(W, int):
                blk = np.zeros((lb.size, lb.size), dtype=dt)
            else:
                blk = _couple_bc(W, lb, lb, kern)
            if last:
                a2 = (n - int(lb.twoj[rows[r]])) // 2
                P[a2] += onehot @ (np.abs(blk) ** 2) @ onehot.T
            else:
                if new is None:
                    new = np.empty((len(rows), lb.size, lb.size), dtype=dt)
                new[r] = blk
        if not last:
            phi = new
    for a2 in range(h + 1):
        P[a2] *= syt_count((n - a2, a2))
    return _table_from_array(P, n)


def copy_probabilities_dense(state, n: int) -> ProbTable:
    """Oracle: build psi^{(x)n} explicitly and apply the dense Schur matrix per slot."""
    psi = as_psi(state)
    if n > DENSE_CAP:
        raise ResourceError(f"dense oracle capped at n={DENSE_CAP}")
    T = psi.copy()
    for _ in range(n - 1):
        T = np.einsum("abc,ijk->aibjck", T, psi).reshape(T.shape[0] * 2, T.shape[1] * 2, T.shape[2] * 2)
    S = schur_matrix(n)
    X = np.einsum("pa,qb,rc,abc->pqr", S, S, S, T)
    sl = block_slices(n)
    h = n // 2
    P = np.zeros((h + 1, h + 1, h + 1))
    for a in range(h + 1):
        for b in range(h + 1):
            for c in range(h + 1):
                P[a, b, c] = np.sum(np.abs(X[np.ix_(sl[a], sl[b], sl[c])]) ** 2)
    return _table_from_array(P, n)


# R-tensor route ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _r_cached(a2, b2, c2, n, twom1, twom2):
    return r_tensor((n - a2, a2), (n - b2, b2), (n - c2, c2), twom1 / 2, twom2 / 2)


def r_tensor_block(t: TripletLabel, A, B, C) -> float:
    """p(t | (A x B x C)|GHZ>) = 2^-n sum_{m, m'} prod D_{m m'}(X^dag X) R_{m' m}."""
    n = t.n
    js = [n - 2 * x for x in t.rows]          # 2j per frame
    twoj = min(js)
    Ds = [rep_matrix((n - x, x), X.conj().T @ X) for x, X in zip(t.rows, (A, B, C))]
    tot = 0j
    for twom1 in range(-twoj, twoj + 1, 2):
        for twom2 in range(-twoj, twoj + 1, 2):
            R = _r_cached(*t.rows, n, twom2, twom1)
            if R == 0:
                continue
            prod = 1
            for D, tj in zip(Ds, js):
                prod = prod * D[(tj + twom1) // 2, (tj + twom2) // 2]
            tot += prod * R
    return float(tot.real) / 2 ** n


def r_tensor_probability(state, n: int, cap: int = R_TENSOR_CAP) -> ProbTable:
    if n > cap:
        raise ResourceError(f"R-tensor route capped at n={cap}")
    A, B, C = ghz_decomposition(state)
    out = ProbTable(n)
    for t in all_triplets(n):
        if kronecker_two_row(t) > 0:
            out.entries[t] = r_tensor_block(t, A, B, C)
    return out


# covariant-ratio route ---------------------------------------------------------

REFERENCE_ANGLES = (0.61, 0.93, 1.12, 0.84, 0.41)


def phi_norm(state, t: TripletLabel) -> float:
    """<Phi|Phi> (eta = 1) of the unique covariant product on a g = 1 triplet."""
    decs = fundamental_decompositions(t)
    if len(decs) != 1:
        raise UnsupportedRegion(f"covariant route needs g=1, got g={len(decs)} at {t}")
    P = covariant_power(state, decs[0].n_vec)
    return float(lu_inner_product(P, P).real)


def covariant_ratio_probability(state, n: int, reference=None, reference_table: ProbTable | None = None) -> ProbTable:
    """p(t|psi) = p(t|ref) <Phi(psi)>/<Phi(ref)> on every g = 1 triplet."""
    ref = ghz_family_state(*REFERENCE_ANGLES) if reference is None else as_psi(reference)
    table = reference_table or copy_probabilities_dense(ref, n)
    out = ProbTable(n)
    for t in all_triplets(n):
        if kronecker_two_row(t) != 1:
            continue
        den = phi_norm(ref, t)
        if den <= 0:
            raise UnsupportedRegion(f"reference has <Phi|Phi> = 0 at {t}")
        out.entries[t] = table.get(t) * phi_norm(state, t) / den
    return out


# two qubits --------------------------------------------------------------------

def _split_amps(alpha_amp, beta_amp):
    x, y = abs(alpha_amp) ** 2, abs(beta_amp) ** 2
    if abs(x + y - 1) > 1e-9:
        raise InvalidInput("|alpha|^2 + |beta|^2 must be 1")
    return x, y


def bipartite_probability(alpha_amp, beta_amp, n: int, k: int) -> float:
    x, y = _split_amps(alpha_amp, beta_amp)
    if not 0 <= k <= n:
        raise InvalidInput("need 0 <= k <= n")
    return math.comb(n, k) * x ** k * y ** (n - k)


def kl_divergence(p, q) -> float:
    """sum p log(p/q) with 0 log 0 = 0; +inf where q = 0 < p."""
    tot = 0.0
    for a, b in zip(p, q):
        if a > 0:
            if b <= 0:
                return math.inf
            tot += a * math.log(a / b)
    return tot


def bipartite_rate(k_bar, spec) -> float:
    if not 0 <= k_bar <= 1:
        raise InvalidInput("k_bar must lie in [0, 1]")
    return kl_divergence((k_bar, 1 - k_bar), spec)


def bipartite_block_probability(alpha_amp, beta_amp, n: int, j) -> float:
    """Probability of the frame with spin j for alpha|00> + beta|11>: f^lam s_lam(|a|^2, |b|^2)."""
    x, y = _split_amps(alpha_amp, beta_amp)
    twoj = int(round(2 * float(j)))
    if twoj < 0 or twoj > n or (n - twoj) % 2:
        raise InvalidInput(f"j={j} incompatible with n={n}")
    l2 = (n - twoj) // 2
    if abs(x - y) < 1e-13:
        schur = (twoj + 1) * (x * y) ** l2 * ((x + y) / 2) ** twoj
    else:
        schur = (x * y) ** l2 * (y ** (twoj + 1) - x ** (twoj + 1)) / (y - x)
    return syt_count((n - l2, l2)) * schur


# W class ---------------------------------------------------------------------

def _entropy(ps) -> float:
    return -sum(p * math.log(p) for p in ps if p > 0)


def _w_params(a, b, c, d=None):
    if d is None:
        d = 1.0 - a - b - c
    if min(a, b, c) < 0 or d < -1e-12:
        raise InvalidInput("W parameters must be non-negative and sum to 1")
    return a, b, c, max(d, 0.0)


def rate_w_plane(alpha_bar, beta_bar, gamma_bar, a, b, c) -> RateResult:
    """-H(alpha, beta, gamma) - sum alpha_i log a_i on the plane alpha+beta+gamma = 1."""
    pt = (alpha_bar, beta_bar, gamma_bar)
    if abs(sum(pt) - 1) > 1e-9:
        raise InvalidInput("point must lie on the plane alpha+beta+gamma = 1")
    if any(x < 0 or x > 0.5 + 1e-12 for x in pt):
        raise InvalidInput("normalised second rows must lie in [0, 1/2]")
    val = -_entropy(pt)
    for x, p in zip(pt, (a, b, c)):
        if x > 0:
            if p <= 0:
                return RateResult(math.inf, pt, "closed-form", {"infinite": "zero parameter with nonzero exponent"})
            val -= x * math.log(p)
    return RateResult(val, pt, "closed-form")


def w_plane_probability(a, b, c, d, t: TripletLabel) -> float:
    """Exact p(t | W(a,b,c,d)) on the plane alpha2+beta2+gamma2 = n."""
    n = t.n
    a2, b2, c2 = t.rows
    if a2 + b2 + c2 != n:
        raise InvalidInput("triplet must lie on the plane alpha2+beta2+gamma2 = n")
    if min(a, b, c) <= 0:
        raise InvalidInput("need a, b, c > 0")
    R = float(r_tensor_w_plane_exact(a2, b2, c2, n))
    return (3.0 ** -n * (c * a) ** a2 * c ** (n - 2 * a2) * (9 * b / c) ** b2 * 3.0 ** (n - 2 * b2) * R)


def _xlogx(x):
    return np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)


def s_bar(k, point, params):
    """Limit of (1/n) log of one term of the W inner-product sum (prefactor included).

    k = (k1, k2, k3) normalised by n; returns -inf outside the feasible region.
    """
    k = np.atleast_2d(np.asarray(k, dtype=float))
    pt = np.asarray(point, dtype=float)
    a = np.asarray(params[:3], dtype=float)
    d = float(params[3])
    m = 1.0 - pt.sum()
    N = 1.0 - 2 * pt
    k4 = m - k.sum(axis=1)
    feas = (k4 >= -1e-15) & np.all(k >= -1e-15, axis=1) & np.all(k <= N + 1e-15, axis=1)
    kc = np.clip(k, 0, None)
    k4c = np.clip(k4, 0, None)
    Nk = np.clip(N - kc, 0, None)
    val = 2 * (_xlogx(np.array(m)) - _xlogx(kc).sum(axis=1) - _xlogx(k4c))
    val = val - (_xlogx(N).sum() - _xlogx(kc).sum(axis=1) - _xlogx(Nk).sum(axis=1))
    for i in range(3):
        e = pt[i] + kc[:, i]
        if a[i] > 0:
            val = val + e * math.log(a[i])
        else:
            val = np.where(e > 0, -np.inf, val)
    if d > 0:
        val = val + k4c * math.log(d)
    else:
        val = np.where(k4c > 1e-15, -np.inf, val)
    return np.where(feas, val, -np.inf)


def _sup_s_bar(point, params, grid=32):
    from scipy.optimize import minimize

    pt = np.asarray(point, dtype=float)
    m = 1.0 - pt.sum()
    if m < -1e-12:
        raise UnsupportedRegion("point lies above the plane alpha+beta+gamma = 1")
    m = max(m, 0.0)
    hi = np.minimum(1.0 - 2 * pt, m)
    axes = [np.linspace(0, h, grid) for h in hi]
    G = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, 3)
    G = G[G.sum(axis=1) <= m + 1e-15]
    vals = s_bar(G, pt, params)
    order = np.lexsort((G[:, 1], G[:, 0], -vals))
    best_k, best_v = G[order[0]], vals[order[0]]
    if m == 0:
        return float(best_v), tuple(best_k)
    for start in G[order[:6]]:
        res = minimize(lambda x: -float(s_bar(x, pt, params)[0]) if np.isfinite(s_bar(x, pt, params)[0]) else 1e300,
                       start, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        v = float(s_bar(res.x, pt, params)[0])
        if v > best_v + 1e-13 or (abs(v - best_v) <= 1e-13 and tuple(res.x[:2]) < tuple(best_k[:2])):
            best_v, best_k = v, np.clip(res.x, 0, None)
    return float(best_v), tuple(float(x) for x in best_k)


def kkt_residual(k, point, params) -> float:
    """Largest residual of k4^2 a_i = d k_i (N_i - k_i) over coordinates strictly inside their bounds."""
    pt = np.asarray(point, dtype=float)
    a = np.asarray(params[:3], dtype=float)
    d = float(params[3])
    k = np.asarray(k, dtype=float)
    N = 1.0 - 2 * pt
    k4 = 1.0 - pt.sum() - k.sum()
    res = 0.0
    if k4 <= 1e-9:
        return 0.0
    for i in range(3):
        if 1e-9 < k[i] < N[i] - 1e-9:
            res = max(res, abs(k4 ** 2 * a[i] - d * k[i] * (N[i] - k[i])))
    return res


def rate_w_relative(alpha_bar, beta_bar, gamma_bar, a, b, c, d=None) -> RateResult:
    """-lim (1/n) log <Phi|Phi> for the W-class state, as a supremum over k."""
    params = _w_params(a, b, c, d)
    pt = (alpha_bar, beta_bar, gamma_bar)
    v, k = _sup_s_bar(pt, params)
    return RateResult(-v, k, "optimized", {"kkt_residual": kkt_residual(k, pt, params)})


def w_params_with_spectra(point, tol: float = 1e-12) -> tuple:
    """W-class parameters (a, b, c, d) whose smallest local eigenvalues equal the point."""
    from scipy.optimize import least_squares

    pt = np.asarray(point, dtype=float)
    if pt.sum() >= 1 - 1e-12:
        return (float(pt[0]), float(pt[1]), float(pt[2]), 0.0)

    live = np.flatnonzero(pt > 0)
    if len(live) == 0:
        return (0.0, 0.0, 0.0, 1.0)

    def params(x):
        e = np.zeros(3)
        e[live] = np.exp(x)
        return e / (e.sum() + 1.0)

    def resid(x):
        a, b, c = params(x)
        return np.array(local_spectra(w_state(a, b, c, max(1 - a - b - c, 0.0))))[live] - pt[live]

    x0 = np.log(pt[live] / max(1 - pt.sum(), 1e-6))
    res = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if np.max(np.abs(res.fun)) > 1e-9:
        raise UnsupportedRegion(f"no W-class state with local spectra {tuple(pt)}")
    a, b, c = params(res.x)
    return (float(a), float(b), float(c), float(max(1 - a - b - c, 0.0)))


def rate_w_general(alpha_bar, beta_bar, gamma_bar, a, b, c, d=None, form: str = "absolute") -> RateResult:
    """Rate of p(alpha, beta, gamma | W(a,b,c,d)) in the W region.

    form="relative" is -lim (1/n) log <Phi|Phi>.  form="absolute" subtracts the
    relative rate of the W-class state whose local spectra are the point itself,
    where the probability does not decay.
    """
    params = _w_params(a, b, c, d)
    pt = (alpha_bar, beta_bar, gamma_bar)
    if any(x < 0 or x > 0.5 + 1e-12 for x in pt):
        raise InvalidInput("normalised second rows must lie in [0, 1/2]")
    for l in range(3):
        if pt[l] > sum(pt) - pt[l] + 1e-12:
            raise UnsupportedRegion("point violates the polytope inequalities")
    rel = rate_w_relative(*pt, *params)
    if form == "relative":
        return rel
    if form != "absolute":
        raise InvalidInput(f"unknown form {form!r}")
    star = w_params_with_spectra(pt)
    norm = rate_w_relative(*pt, *star)
    diag = dict(rel.diagnostics)
    diag.update(relative=rel.value, normalisation=norm.value, normalising_state=star)
    return RateResult(rel.value - norm.value, rel.maximizer, "optimized", diag)


# GHZ class ---------------------------------------------------------------------

GHZ_ANGLES = (math.pi / 4, math.pi / 2, math.pi / 2, math.pi / 2, 0.0)


def _factors(params):
    if params is None:
        params = GHZ_ANGLES
    if isinstance(params, np.ndarray) and params.size == 8:
        return ghz_decomposition(params)
    if len(params) == 5:
        return ghz_family_factors(*params)
    if len(params) == 3:
        return tuple(np.asarray(x, dtype=complex) for x in params)
    raise InvalidInput("params must be five angles, a state, or three local operators")


def _gram_rate(l2_bar, X) -> float:
    """lim (1/n) log D^lambda_{00}(X^dag X)."""
    G = X.conj().T @ X
    g00, g11 = G[0, 0].real, G[1, 1].real
    c = G[0, 1] / math.sqrt(g00 * g11)
    det = float(np.linalg.det(G).real) / (g00 * g11)
    base = 0.5 * math.log(g00 * g11)
    if l2_bar >= 0.5:
        return base + 0.5 * math.log(det)
    return base + rep_matrix_rate((1 - l2_bar, l2_bar), c, det)


def _second_bar(x):
    return float(x[1]) if isinstance(x, (tuple, list)) else float(x)


def rate_ghz_facet(beta_bar, gamma_bar, params=None, form: str = "exact") -> RateResult:
    """Rate on the facet alpha = box: log 2 - sum log D_00 rates - R^{box} rate.

    form="stated" doubles the determinant terms (the variant that reads the
    vertex rate as -log tau3); the default follows the exact single-term
    probability 2^-n |det A|^n D_00 D_00 R.
    """
    b2, g2 = _second_bar(beta_bar), _second_bar(gamma_bar)
    if b2 + g2 < 0.5 - 1e-12:
        raise UnsupportedRegion("facet rate needs beta2 + gamma2 >= 1/2 (support of R^box)")
    A, B, C = _factors(params)
    la, lb, lc = _gram_rate(0.5, A), _gram_rate(b2, B), _gram_rate(g2, C)
    box = r_tensor_box_rate((1 - b2, b2), (1 - g2, g2))
    if form == "exact":
        val = math.log(2) - la - lb - lc - box
    elif form == "stated":
        dets = [float(np.linalg.det(X.conj().T @ X).real) for X in (A, B, C)]
        val = (math.log(2) - math.log(dets[0]) - 2 * b2 * math.log(dets[1]) - 2 * g2 * math.log(dets[2])
               - (lb - b2 * math.log(dets[1])) - (lc - g2 * math.log(dets[2])) - box)
    else:
        raise InvalidInput(f"unknown form {form!r}")
    diag = {"gram_terms": (la, lb, lc), "box_term": box}
    if params is not None and not isinstance(params, np.ndarray) and len(params) == 5 \
            and tuple(params) != GHZ_ANGLES:
        louck = val - rate_ghz_facet(b2, g2, GHZ_ANGLES, form).value
        cov = ghz_facet_relative_covariant(b2, g2, params)
        diag.update(delta_phi_louck=louck, delta_phi_covariant=cov, route_discrepancy=louck - cov)
    return RateResult(val, (0.5, b2, g2), "closed-form", diag)


def ghz_facet_relative_covariant(beta_bar, gamma_bar, params) -> float:
    """Relative rate delta phi(box, beta, gamma) from the asymptotics of the covariant inner products."""
    b2, g2 = _second_bar(beta_bar), _second_bar(gamma_bar)
    d, e, th, vp, ph = params
    K = 1.0 / (1 + 2 * math.cos(d) * math.sin(d) * math.cos(e) * math.cos(th) * math.cos(vp) * math.cos(ph))
    return (-math.log(2 * K * abs(math.cos(d) * math.sin(d) * math.sin(e)))
            - 2 * b2 * math.log(abs(math.sin(th))) - 2 * g2 * math.log(abs(math.sin(vp)))
            - (1 - 2 * b2) * math.log(1 + abs(math.cos(th))) - (1 - 2 * g2) * math.log(1 + abs(math.cos(vp))))


def ghz_facet_probability(beta2: int, gamma2: int, n: int, params=None) -> float:
    """Exact p(box, beta, gamma | psi) = 2^-n D^box_00 D^beta_00 D^gamma_00 R^{box beta gamma}_00."""
    if n % 2:
        raise InvalidInput("box frame needs even n")
    A, B, C = _factors(params)
    out = float(r_tensor_box_exact_fraction(beta2, gamma2, n)) * 2.0 ** -n
    for x, X in zip((n // 2, beta2, gamma2), (A, B, C)):
        out *= rep_matrix_element((n - x, x), X.conj().T @ X, 0, 0).real
    return out


def ghz_bullet_probability(beta2: int, n: int) -> float:
    """Exact p(bullet, beta, beta | GHZ) = f^beta 2^-n sum_k 1/binom(n, k+beta)."""
    return syt_count((n - beta2, beta2)) * ghz_bullet_sum(beta2, n)


def _binary_entropy(x):
    return _entropy((x, 1 - x))


def rate_ghz_bullet(beta_bar, form: str = "stated") -> RateResult:
    """form="stated": log 4 - H(beta); form="endpoint": the limit of the exact sum, log 2."""
    b2 = _second_bar(beta_bar)
    if not 0 <= b2 <= 0.5:
        raise InvalidInput("beta2 must lie in [0, 1/2]")
    if form == "stated":
        return RateResult(math.log(4) - _binary_entropy(b2), (0.0, b2, b2), "closed-form")
    if form == "endpoint":
        return RateResult(math.log(2), (0.0, b2, b2), "closed-form",
                          {"note": "k = 0 and k = n - 2 beta terms dominate the sum"})
    raise InvalidInput(f"unknown form {form!r}")


# checks ---------------------------------------------------------------------------

def extrapolate(ns, values) -> float:
    """Intercept of a least-squares fit of values against 1/n over the three largest n."""
    pairs = sorted(zip(ns, values))[-3:]
    x = np.array([1.0 / n for n, _ in pairs])
    y = np.array([v for _, v in pairs])
    slope, icpt = np.polyfit(x, y, 1)
    return float(icpt)


def finite_n_rate(prob_fn, ns) -> RateResult:
    vals = [-math.log(prob_fn(n)) / n for n in ns]
    return RateResult(extrapolate(ns, vals), None, "finite-n-extrapolated",
                      {"ns": list(ns), "estimates": vals})


def convexity_check(facet: str, state_params=None, grid_resolution: int = 50) -> float:
    """Max |delta phi(point) - convex combination of the vertex delta phi| over a facet grid."""
    if facet == "w-plane":
        a, b, c = state_params if state_params is not None else (0.2, 0.3, 0.5)

        def dphi(pt):
            return rate_w_plane(*pt, a, b, c).value - rate_w_plane(*pt, 1 / 3, 1 / 3, 1 / 3).value

        verts = [(0, 0.5, 0.5), (0.5, 0, 0.5), (0.5, 0.5, 0)]
        vv = [dphi(v) for v in verts]
        worst = 0.0
        for i in range(grid_resolution + 1):
            for j in range(grid_resolution + 1 - i):
                x, y = 0.5 * i / grid_resolution, 0.5 * j / grid_resolution
                z = 1 - x - y
                if z > 0.5 + 1e-12 or z < -1e-12:
                    continue
                pt = (x, y, min(z, 0.5))
                w = [1 - 2 * p for p in pt]
                worst = max(worst, abs(dphi(pt) - sum(wi * v for wi, v in zip(w, vv))))
        return worst
    if facet == "ghz-box":
        params = state_params if state_params is not None else (0.5, 0.7, 1.0, 1.2, 0.3)

        def dphi(b2, g2):
            return rate_ghz_facet(b2, g2, params).value - rate_ghz_facet(b2, g2, GHZ_ANGLES).value

        v0, vb, vg = dphi(0.5, 0.5), dphi(0.0, 0.5), dphi(0.5, 0.0)
        worst = 0.0
        for i in range(grid_resolution + 1):
            for j in range(grid_resolution + 1):
                b2, g2 = 0.5 * i / grid_resolution, 0.5 * j / grid_resolution
                if b2 + g2 < 0.5:
                    continue
                db, dg = 1 - 2 * b2, 1 - 2 * g2
                worst = max(worst, abs(dphi(b2, g2) - ((1 - db - dg) * v0 + db * vb + dg * vg)))
        return worst
    raise InvalidInput(f"unknown facet {facet!r}")


def local_spectra(state) -> tuple:
    """Smallest eigenvalue of each normalised one-qubit marginal."""
    psi = as_psi(state)
    psi = psi / np.linalg.norm(psi)
    return tuple(float(np.linalg.eigvalsh(reduced_density(psi, s))[0]) for s in "ABC")


def keyl_werner_check(state, n: int, route: str = "exact") -> dict:
    """Deviation of the most likely normalised frame(s) from the sorted local spectra."""
    spec = local_spectra(state)
    if route == "exact":
        tab = copy_probabilities(state, n)
        t = tab.argmax()
        lam = t.bar
    elif route == "bipartite":
        lam = []
        for s in spec:
            x = math.sqrt(s)
            y = math.sqrt(1 - s)
            ps = [bipartite_block_probability(x, y, n, (n - 2 * k) / 2) for k in range(n // 2 + 1)]
            best = max(ps)
            lam.append(ps.index(best) / n)
        lam = tuple(lam)
        t = None
    else:
        raise InvalidInput(f"unknown route {route!r}")
    return {"n": n, "route": route, "argmax": None if t is None else t.rows, "lambda_bar": tuple(lam),
            "spectra": spec, "deviation": tuple(abs(l - s) for l, s in zip(lam, spec))}
