"""Weight tensors, Louck coefficients, GL(2) representation matrices,
Krawtchouk / Hahn-Eberlein polynomials and the R tensors.

Index conventions: a 2x2 weight matrix W(s o s') has entry [a, b] equal to
the number of positions with s_i = a and s'_i = b. Spin projections follow
`schur` (bit 1 -> +1/2), so m = -j is the all-zeros corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidInput
from .partitions import TwoRowPartition, as_partition, syt_count
from .schur import half

EXACT_N_MAX = 40


@dataclass(frozen=True)
class WeightTensor:
    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if (c < 0).any():
            raise InvalidInput("weight tensor entries must be non-negative")
        object.__setattr__(self, "counts", c)

    @property
    def shape(self):
        return self.counts.shape

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def __getitem__(self, idx):
        return int(self.counts[idx])

    def marginals(self) -> list:
        axes = range(self.counts.ndim)
        return [self.counts.sum(axis=tuple(a for a in axes if a != k)) for k in axes]


def weight_tensor(sequences) -> WeightTensor:
    seqs = [tuple(int(b) for b in s) for s in sequences]
    if not seqs:
        raise InvalidInput("need at least one sequence")
    n = len(seqs[0])
    if any(len(s) != n for s in seqs):
        raise InvalidInput("sequences must share a length")
    counts = np.zeros((2,) * len(seqs), dtype=np.int64)
    for pos in zip(*seqs):
        counts[pos] += 1
    return WeightTensor(counts)


def multinomial(n: int, parts) -> int:
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(int(p))
    return out


def _omega2(omega) -> np.ndarray:
    o = omega.counts if isinstance(omega, WeightTensor) else np.asarray(omega, dtype=np.int64)
    if o.shape != (2, 2):
        raise InvalidInput("expected a 2x2 weight matrix")
    return o


def omega_from_x(n: int, m, m_prime, x: int) -> np.ndarray:
    """Weight matrix for s ~ m (rows) and s' ~ m' (columns) with Omega[1,0] = x."""
    m, mp = half(m), half(m_prime)
    u, v = int(n / 2 + m), int(n / 2 + mp)
    o = np.array([[n - v - x, v - u + x], [x, u - x]], dtype=np.int64)
    if (o < 0).any():
        raise InvalidInput("x outside the admissible range")
    return o


# Louck coefficients -----------------------------------------------------------

def _louck_sum(n: int, h: int, o) -> Fraction:
    """sum_k binom(h,k) Omega! (-1)^k / ((o01-k)!(o10-k)!(o00-h+k)!(o11-h+k)!)."""
    o00, o01, o10, o11 = (int(v) for v in (o[0, 0], o[0, 1], o[1, 0], o[1, 1]))
    ofact = math.factorial(o00) * math.factorial(o01) * math.factorial(o10) * math.factorial(o11)
    total = Fraction(0)
    for k in range(max(0, h - o00, h - o11), min(h, o01, o10) + 1):
        den = (math.factorial(o01 - k) * math.factorial(o10 - k)
               * math.factorial(o00 - h + k) * math.factorial(o11 - h + k))
        total += Fraction((-1) ** k * math.comb(h, k) * ofact, den)
    return total


def _compatible(o, n, m, mp) -> bool:
    ones_s = int(o[1, 0] + o[1, 1])
    ones_sp = int(o[0, 1] + o[1, 1])
    return int(o.sum()) == n and 2 * ones_s - n == 2 * m and 2 * ones_sp - n == 2 * mp


def louck_coefficient_parts(lam, m, m_prime, omega) -> tuple:
    """(sqrt_arg, rational) with C = sqrt(sqrt_arg) * rational, both exact."""
    lam = as_partition(lam)
    n, j = lam.n, lam.j
    m, mp = half(m), half(m_prime)
    o = _omega2(omega)
    if abs(m) > j or abs(mp) > j or not _compatible(o, n, m, mp):
        return Fraction(0), Fraction(0)
    f = lambda v: math.factorial(int(v))
    root = Fraction(f(j + m) * f(j - m) * f(j + mp) * f(j - mp))
    rat = _louck_sum(n, lam.lambda2, o) / math.factorial(n)
    return root, rat


def louck_coefficient(lam, m, m_prime, omega) -> float:
    """C^lambda_{m,m'}(Omega), angular-momentum form; zero for incompatible marginals."""
    root, rat = louck_coefficient_parts(lam, m, m_prime, omega)
    if rat == 0:
        return 0.0
    return math.sqrt(root) * float(rat)


def louck_coefficient_w(lam, w, w_prime, omega) -> float:
    """Same coefficient in weight variables (w = number of zeros of the sequence)."""
    lam = as_partition(lam)
    o = _omega2(omega)
    n, l1, l2 = lam.n, lam.lambda1, lam.lambda2
    if not (l2 <= w <= l1 and l2 <= w_prime <= l1):
        return 0.0
    zeros_s = int(o[0, 0] + o[0, 1])
    zeros_sp = int(o[0, 0] + o[1, 0])
    if int(o.sum()) != n or zeros_s != w or zeros_sp != w_prime:
        return 0.0
    f = math.factorial
    root = f(l1 - w) * f(w - l2) * f(l1 - w_prime) * f(w_prime - l2)
    return math.sqrt(root) * float(_louck_sum(n, l2, o) / f(n))


def louck_identity_residual(lam, m, m_prime, s, s_prime) -> float:
    """|sum_mu <lam m mu|s><s'|lam m' mu> - f^lam C_{m,m'}(W(s o s'))|."""
    from .schur import SchurLabel, schur_amplitude
    from .partitions import yamanouchi_symbols
    lam = as_partition(lam)
    m, mp = half(m), half(m_prime)
    lhs = 0.0
    if abs(m) <= lam.j and abs(mp) <= lam.j:
        for mu in yamanouchi_symbols(lam):
            a = schur_amplitude(SchurLabel(lam.j, m, mu.entries), s)
            if a:
                lhs += a * schur_amplitude(SchurLabel(lam.j, mp, mu.entries), s_prime)
    rhs = syt_count(lam) * louck_coefficient(lam, m, mp, weight_tensor([s, s_prime]))
    return abs(lhs - rhs)


# representation matrices ----------------------------------------------------

def rep_matrix(lam, g) -> np.ndarray:
    """D^lambda(g) on the weight basis m = -j..j (rows m', columns m).

    Entry [m', m] equals <lam, m', mu| g^{(x)n} |lam, m, mu> for every mu.
    """
    lam = as_partition(lam)
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise InvalidInput("g must be 2x2")
    if not np.isfinite(g).all():
        raise InvalidInput("g has non-finite entries")
    twoj = lam.twoj
    # relabel so that the all-zeros corner pairs with g[0,0]
    h00, h01, h10, h11 = g[1, 1], g[1, 0], g[0, 1], g[0, 0]
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    D = np.zeros((twoj + 1, twoj + 1), dtype=complex)
    lf = [math.lgamma(k + 1) for k in range(twoj + 1)]
    J = twoj  # work with integers a = j+m etc.
    for ip in range(twoj + 1):          # j + m'
        for i in range(twoj + 1):       # j + m
            a, ap = i, ip
            pre = 0.5 * (lf[a] + lf[J - a] + lf[ap] + lf[J - ap])
            tot = 0j
            for x in range(max(ap - a, 0), min(J - a, ap) + 1):
                tot += (h01 ** x * h10 ** (a - ap + x) * h11 ** (J - a - x) * h00 ** (ap - x)
                        * math.exp(pre - lf[ap - x] - lf[x] - lf[a - ap + x] - lf[J - a - x]))
            D[ip, i] = tot
    return det ** lam.lambda2 * D


def rep_matrix_element(lam, g, twom_prime: int, twom: int) -> complex:
    """Single entry D^lambda_{m', m}(g), with both projections given doubled."""
    lam = as_partition(lam)
    g = np.asarray(g, dtype=complex)
    J = lam.twoj
    if abs(twom) > J or abs(twom_prime) > J or (J - twom) % 2 or (J - twom_prime) % 2:
        raise InvalidInput("projection out of range")
    a, ap = (J + twom) // 2, (J + twom_prime) // 2
    h00, h01, h10, h11 = g[1, 1], g[1, 0], g[0, 1], g[0, 0]
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    lf = math.lgamma
    pre = 0.5 * (lf(a + 1) + lf(J - a + 1) + lf(ap + 1) + lf(J - ap + 1))
    tot = 0j
    for x in range(max(ap - a, 0), min(J - a, ap) + 1):
        tot += (h01 ** x * h10 ** (a - ap + x) * h11 ** (J - a - x) * h00 ** (ap - x)
                * math.exp(pre - lf(ap - x + 1) - lf(x + 1) - lf(a - ap + x + 1) - lf(J - a - x + 1)))
    return det ** lam.lambda2 * tot


def rep_matrix_rate(lambda_bar, c, det_g: float | None = None) -> float:
    """Limit of log D^lambda_{00}(g)/n for g = [[1, c], [conj c, 1]].

    det_g defaults to 1 - |c|^2.
    """
    l1, l2 = lambda_bar
    if det_g is None:
        det_g = 1.0 - abs(c) ** 2
    out = (l1 - l2) * math.log1p(abs(c))
    if l2 > 0:
        out += l2 * math.log(det_g)
    return out


# discrete orthogonal polynomials --------------------------------------------

def krawtchouk(k: int, n: int, x: int) -> int:
    """Coefficient of y^k in (1-y)^x (1+y)^(n-x)."""
    if not (0 <= k <= n and 0 <= x <= n):
        raise InvalidInput("need 0 <= k, x <= n")
    return sum((-1) ** i * math.comb(x, i) * math.comb(n - x, k - i) for i in range(0, min(k, x) + 1))


def hahn_eberlein_exact(lambda2: int, w_prime: int, w: int, x: int, n: int) -> Fraction:
    """coef_{(yz)^x}[(1-yz)^lam (1+y)^(w'-lam) (1+z)^(n-w-lam)] / (binom(w',x) binom(n-w,x))."""
    a, b = w_prime - lambda2, n - w - lambda2
    if x < 0 or x > w_prime or x > n - w or a < 0 or b < 0:
        return Fraction(0)
    tot = sum((-1) ** k * math.comb(lambda2, k) * math.comb(a, x - k) * math.comb(b, x - k)
              for k in range(0, min(lambda2, x) + 1))
    return Fraction(tot, math.comb(w_prime, x) * math.comb(n - w, x))


def hahn_eberlein(lambda2: int, w_prime: int, w: int, x: int, n: int) -> float:
    return float(hahn_eberlein_exact(lambda2, w_prime, w, x, n))


# R tensors --------------------------------------------------------------------

def _binom_m(n: int, m) -> int:
    return math.comb(n, int(Fraction(n, 2) + half(m)))


def r_tensor_bullet(beta, gamma, m, m_prime) -> float:
    """R^{(n,0) beta gamma}_{m,m'} = delta_{beta,gamma} f^beta / sqrt(binom(n, n/2+m) binom(n, n/2+m'))."""
    beta, gamma = as_partition(beta), as_partition(gamma)
    if beta.n != gamma.n:
        raise InvalidInput("partitions of different n")
    if beta != gamma:
        return 0.0
    m, mp = half(m), half(m_prime)
    if abs(m) > beta.j or abs(mp) > beta.j:
        return 0.0
    n = beta.n
    return syt_count(beta) / math.sqrt(_binom_m(n, m) * _binom_m(n, mp))


def r_tensor_exact_parts(alpha, beta, gamma, m, m_prime) -> tuple:
    """R^{alpha beta gamma}_{m,m'} as (sqrt_arg, rational), summing over weight matrices.

    R_{m,m'} = f^a f^b f^c sum_Omega binom(n,Omega) C^a_{m,m'} C^b_{m,m'} C^c_{m,m'},
    Omega running over 2x2 weight matrices with rows from s ~ m and columns from s' ~ m'.
    """
    parts = [as_partition(p) for p in (alpha, beta, gamma)]
    n = parts[0].n
    if any(p.n != n for p in parts):
        raise InvalidInput("partitions of different n")
    m, mp = half(m), half(m_prime)
    if any(abs(m) > p.j or abs(mp) > p.j for p in parts):
        return Fraction(0), Fraction(0)
    ones, ones_p = int(n / 2 + m), int(n / 2 + mp)
    root = Fraction(1)
    f = lambda v: math.factorial(int(v))
    for p in parts:
        root *= f(p.j + m) * f(p.j - m) * f(p.j + mp) * f(p.j - mp)
    total = Fraction(0)
    for x in range(max(0, ones + ones_p - n), min(ones, ones_p) + 1):
        o = np.array([[n - ones - ones_p + x, ones_p - x], [ones - x, x]])
        term = Fraction(multinomial(n, o.flat))
        for p in parts:
            term *= _louck_sum(n, p.lambda2, o)
        total += term
    scale = syt_count(parts[0]) * syt_count(parts[1]) * syt_count(parts[2])
    return root, scale * total / Fraction(math.factorial(n)) ** 3


def r_tensor(alpha, beta, gamma, m, m_prime) -> float:
    root, rat = r_tensor_exact_parts(alpha, beta, gamma, m, m_prime)
    if rat == 0:
        return 0.0
    return math.sqrt(root) * float(rat)


@lru_cache(maxsize=4096)
def r_tensor_box_exact_fraction(beta2: int, gamma2: int, n: int) -> Fraction:
    """R^{box beta gamma}_{0,0} from the alternating Hahn-Eberlein sum (exact)."""
    if n % 2:
        raise InvalidInput("box frame needs even n")
    h = n // 2
    if beta2 + gamma2 < h:
        return Fraction(0)
    tot = Fraction(0)
    for x in range(h + 1):
        tot += ((-1) ** x * math.comb(h, x) * hahn_eberlein_exact(beta2, h, h, x, n)
                * hahn_eberlein_exact(gamma2, h, h, x, n))
    f = syt_count((h, h)) * syt_count((n - beta2, beta2)) * syt_count((n - gamma2, gamma2))
    return f * tot / Fraction(math.comb(n, h)) ** 2


def r_tensor_box_exact(beta, gamma, n: int | None = None) -> float:
    beta, gamma = as_partition(beta), as_partition(gamma)
    n = beta.n if n is None else n
    if beta.n != n or gamma.n != n:
        raise InvalidInput("partitions must have the given n")
    return float(r_tensor_box_exact_fraction(beta.lambda2, gamma.lambda2, n))


def _entropy(ps) -> float:
    return -sum(p * math.log(p) for p in ps if p > 0)


def r_tensor_box_rate(beta_bar, gamma_bar) -> float:
    """Limit of log R^{box beta gamma}_{0,0} / n; -inf outside beta_2 + gamma_2 >= 1/2."""
    b1, b2 = beta_bar
    g1, g2 = gamma_bar
    if b2 + g2 < 0.5 - 1e-12:
        return -math.inf
    args = [g1 * g2 + b1 * b1 - 0.25, g1 * g2 + b2 * b2 - 0.25,
            b1 * b2 + g1 * g1 - 0.25, b1 * b2 + g2 * g2 - 0.25]
    args = [max(a, 0.0) for a in args]
    return 0.5 * _entropy(args)


def r_tensor_box_maximizer(beta_bar, gamma_bar) -> float:
    """Location of the dominant Krawtchouk index, normalised by n."""
    b2, g2 = beta_bar[1], gamma_bar[1]
    return b2 - g2 + g2 * g2 - b2 * b2 + 0.25


# W-class multiplicity ---------------------------------------------------------

def z_multiplicity(x1, x2, x3, w1, w2, w3, n) -> int:
    """Number of sexttuples of sequences over the one-excitation alphabet with
    diagonal weights w_i = w_i' and off-diagonal counts x_i (one free parameter k)."""
    if w1 + w2 + w3 != n:
        raise InvalidInput("w1 + w2 + w3 must equal n")
    xs, ws = (x1, x2, x3), (w1, w2, w3)
    if any(x < 0 for x in xs) or any(w - x < 0 for w, x in zip(ws, xs)):
        return 0
    f = math.factorial
    diag = f(w1 - x1) * f(w2 - x2) * f(w3 - x3)
    total = 0
    for k in range(0, n + 1):
        entries = (k, x1 - k, x2 - k, x1 + x2 - x3 - k, x3 - x1 + k, x3 - x2 + k)
        if min(entries) < 0:
            continue
        prod = diag
        for e in entries:
            prod *= f(e)
        total += f(n) // prod
    return total


def louck_corner(lam, x: int) -> Fraction:
    """C^lambda_{-j,-j} for the diagonal-weight matrix with off-diagonal count x."""
    lam = as_partition(lam)
    n, l2 = lam.n, lam.lambda2
    if x < 0 or x > l2:
        return Fraction(0)
    return Fraction((-1) ** x, math.comb(n, l2) * math.comb(n - l2, x))


def r_tensor_w_plane_exact(alpha2: int, beta2: int, gamma2: int, n: int) -> Fraction:
    """R for the W alphabet on the plane alpha2+beta2+gamma2 = n at m_i = m_i' = -j_i."""
    if alpha2 + beta2 + gamma2 != n:
        raise InvalidInput("triplet must lie on the plane alpha2+beta2+gamma2 = n")
    ws = (alpha2, beta2, gamma2)
    tot = Fraction(0)
    for x1 in range(alpha2 + 1):
        for x2 in range(beta2 + 1):
            for x3 in range(gamma2 + 1):
                z = z_multiplicity(x1, x2, x3, *ws, n)
                if z:
                    tot += Fraction((-1) ** (x1 + x2 + x3) * z,
                                    math.comb(n - alpha2, x1) * math.comb(n - beta2, x2)
                                    * math.comb(n - gamma2, x3))
    f = 1
    den = 1
    for w in ws:
        f *= syt_count((n - w, w))
        den *= math.comb(n, w)
    return f * tot / den
