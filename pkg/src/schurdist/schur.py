"""Qubit Schur transform built from Clebsch-Gordan couplings.

Conventions
-----------
* bit 1 carries spin projection +1/2, bit 0 carries -1/2.
* a bit sequence s = (s_1, ..., s_n) is the integer sum s_i 2^(n-i) when an
  array index is needed (s_1 is the most significant bit).
* Yamanouchi entry 1 couples j -> j+1/2, entry 2 couples j -> j-1/2.
* the canonical Schur-label order is: j descending, then Yamanouchi symbol
  lexicographically, then m ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import InvalidInput, ResourceError
from .partitions import TwoRowPartition, YamanouchiSymbol

HALF = Fraction(1, 2)
TRANSFORM_CAP = 20


def half(x) -> Fraction:
    """Coerce to an exact half-integer, rejecting anything else."""
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidInput(f"not a half-integer: {x}")
        f = Fraction(x).limit_denominator(2)
        if float(f) != x:
            raise InvalidInput(f"not a half-integer: {x}")
    else:
        f = Fraction(x)
    if (2 * f).denominator != 1:
        raise InvalidInput(f"not a half-integer: {x}")
    return f


@dataclass(frozen=True)
class SchurLabel:
    j: Fraction
    m: Fraction
    mu: tuple

    def __post_init__(self):
        object.__setattr__(self, "j", half(self.j))
        object.__setattr__(self, "m", half(self.m))
        object.__setattr__(self, "mu", tuple(self.mu))
        sym = YamanouchiSymbol(self.mu)
        if sum(sym.partial_j()[-1:]) != self.j:
            raise InvalidInput("j does not match the Yamanouchi symbol")
        if abs(self.m) > self.j or (self.j - self.m).denominator != 1:
            raise InvalidInput("m out of range for j")

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def partition(self) -> TwoRowPartition:
        return TwoRowPartition.from_j(self.n, self.j)


def sequence_index(bits) -> int:
    v = 0
    for b in bits:
        v = 2 * v + int(b)
    return v


def index_sequence(idx: int, n: int) -> tuple:
    return tuple((idx >> (n - 1 - i)) & 1 for i in range(n))


def sequence_m(bits) -> Fraction:
    ones = sum(int(b) for b in bits)
    return Fraction(2 * ones - len(bits), 2)


# Clebsch-Gordan -------------------------------------------------------------

def _fact(x: Fraction) -> int:
    return math.factorial(int(x))


def clebsch_gordan_exact(j1, m1, j2, m2, J, M) -> tuple:
    """Return (sign, square) with CG = sign * sqrt(square), square a Fraction."""
    j1, m1, j2, m2, J, M = (half(v) for v in (j1, m1, j2, m2, J, M))
    if min(j1, j2, J) < 0:
        raise InvalidInput("negative angular momentum")
    for jj, mm in ((j1, m1), (j2, m2), (J, M)):
        if abs(mm) > jj or (jj - mm).denominator != 1:
            return 0, Fraction(0)
    if M != m1 + m2 or J < abs(j1 - j2) or J > j1 + j2 or (j1 + j2 - J).denominator != 1:
        return 0, Fraction(0)
    pre = Fraction((2 * J + 1).numerator * _fact(J + j1 - j2) * _fact(J - j1 + j2) * _fact(j1 + j2 - J),
                   _fact(j1 + j2 + J + 1))
    pre *= (_fact(J + M) * _fact(J - M) * _fact(j1 - m1) * _fact(j1 + m1)
            * _fact(j2 - m2) * _fact(j2 + m2))
    total = Fraction(0)
    kmin = int(max(0, j2 - J - m1, j1 + m2 - J))
    kmax = int(min(j1 + j2 - J, j1 - m1, j2 + m2))
    for k in range(kmin, kmax + 1):
        den = (math.factorial(k) * _fact(j1 + j2 - J - k) * _fact(j1 - m1 - k) * _fact(j2 + m2 - k)
               * _fact(J - j2 + m1 + k) * _fact(J - j1 - m2 + k))
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0, Fraction(0)
    return (1 if total > 0 else -1), pre * total * total


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """Condon-Shortley Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>."""
    sign, sq = clebsch_gordan_exact(j1, m1, j2, m2, J, M)
    return sign * math.sqrt(sq)


def _half_step_exact(j: Fraction, up: bool, s: Fraction, M: Fraction) -> tuple:
    """<j, M-s; 1/2, s | j +- 1/2, M> as (sign, square)."""
    m = M - s
    if abs(m) > j:
        return 0, Fraction(0)
    J = j + HALF if up else j - HALF
    if J < 0 or abs(M) > J:
        return 0, Fraction(0)
    den = 2 * j + 1
    plus, minus = (j + M + HALF) / den, (j - M + HALF) / den
    if up:
        return 1, (plus if s > 0 else minus)
    return (-1, minus) if s > 0 else (1, plus)


def schur_amplitude_exact(label: SchurLabel, s) -> tuple:
    bits = tuple(int(b) for b in s)
    if len(bits) != label.n:
        raise InvalidInput("label and sequence lengths differ")
    if sequence_m(bits) != label.m:
        return 0, Fraction(0)
    if label.mu[0] != 1:
        return 0, Fraction(0)
    sign, sq = 1, Fraction(1)
    j = HALF
    M = HALF if bits[0] else -HALF
    for mu_k, b in zip(label.mu[1:], bits[1:]):
        sk = HALF if b else -HALF
        up = mu_k == 1
        sg, q = _half_step_exact(j, up, sk, M + sk)
        if sg == 0:
            return 0, Fraction(0)
        sign *= sg
        sq *= q
        j = j + HALF if up else j - HALF
        M = M + sk
    return sign, sq


def schur_amplitude(label: SchurLabel, s) -> float:
    """<j, m, mu | s> as the telescoping product of CG coefficients."""
    sign, sq = schur_amplitude_exact(label, s)
    return sign * math.sqrt(sq)


# level tables ---------------------------------------------------------------

@dataclass
class Level:
    """Schur labels after t qubits plus the coupling from level t-1."""

    t: int
    code: np.ndarray    # Yamanouchi symbol as an integer, entry 2 -> bit 1
    twoj: np.ndarray
    twom: np.ndarray
    p0: np.ndarray      # parent index along bit 0 (-1 if none)
    c0: np.ndarray
    p1: np.ndarray
    c1: np.ndarray

    @property
    def size(self) -> int:
        return len(self.code)

    def label(self, i: int) -> SchurLabel:
        t, code = self.t, int(self.code[i])
        mu = tuple(1 + ((code >> (t - 1 - k)) & 1) for k in range(t))
        return SchurLabel(Fraction(int(self.twoj[i]), 2), Fraction(int(self.twom[i]), 2), mu)

    def labels(self) -> list:
        return [self.label(i) for i in range(self.size)]


def _half_coef(twoj_parent, up, bit, twoM):
    """Vectorised float CG for coupling j (parent) with a spin-1/2 bit."""
    den = 2.0 * (twoj_parent + 1)
    plus = np.sqrt(np.maximum(twoj_parent + twoM + 1, 0) / den)
    minus = np.sqrt(np.maximum(twoj_parent - twoM + 1, 0) / den)
    if up:
        return plus if bit else minus
    return -minus if bit else plus


def _sorted_level(code, twoj, twom):
    order = np.lexsort((twom, code, -twoj))
    return code[order], twoj[order], twom[order]


@lru_cache(maxsize=None)
def level(t: int) -> Level:
    if t < 1:
        raise ValueError("t >= 1")
    one = np.ones(2)
    if t == 1:
        code = np.zeros(2, dtype=np.int64)
        twoj = np.ones(2, dtype=np.int64)
        twom = np.array([-1, 1], dtype=np.int64)
        return Level(1, code, twoj, twom,
                     np.array([0, -1]), one * np.array([1.0, 0.0]),
                     np.array([-1, 0]), one * np.array([0.0, 1.0]))
    prev = level(t - 1)
    # one entry per distinct parent path
    first = np.flatnonzero(np.r_[True, prev.code[1:] != prev.code[:-1]])
    pcode, ptwoj = prev.code[first], prev.twoj[first]
    child_code, child_twoj, child_twom = [], [], []
    for up in (True, False):
        keep = np.ones_like(ptwoj, dtype=bool) if up else ptwoj >= 1
        cc = 2 * pcode[keep] + (0 if up else 1)
        cj = ptwoj[keep] + (1 if up else -1)
        reps = cj + 1
        child_code.append(np.repeat(cc, reps))
        child_twoj.append(np.repeat(cj, reps))
        offs = np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
        child_twom.append(-np.repeat(cj, reps) + 2 * offs)
    code, twoj, twom = _sorted_level(np.concatenate(child_code), np.concatenate(child_twoj),
                                     np.concatenate(child_twom))
    parent_code = code >> 1
    up = (code & 1) == 0
    parent_twoj = np.where(up, twoj - 1, twoj + 1)
    # locate parent path blocks
    srt = np.argsort(pcode)
    pos = srt[np.searchsorted(pcode[srt], parent_code)]
    start = first[pos]
    out = []
    for bit in (0, 1):
        pm = twom - (1 if bit else -1)
        ok = np.abs(pm) <= parent_twoj
        idx = np.where(ok, start + (pm + parent_twoj) // 2, -1)
        coef = np.where(up, _half_coef(parent_twoj, True, bit, twom),
                        _half_coef(parent_twoj, False, bit, twom))
        coef = np.where(ok, coef, 0.0)
        out += [idx.astype(np.int64), coef.astype(np.float64)]
    return Level(t, code, twoj, twom, out[0], out[1], out[2], out[3])


def schur_labels(n: int) -> list:
    return level(n).labels()


# transforms -----------------------------------------------------------------

def _check_cap(n, cap):
    if n < 1:
        raise InvalidInput("n must be positive")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the Schur transform cap {cap}")


def schur_transform_array(vec, n: int, cap: int = TRANSFORM_CAP, kernels=None) -> np.ndarray:
    """Schur-basis coefficients (canonical order) of a length-2^n vector.

    Extra trailing axes are carried along, so a (2^n, M) array transforms M
    vectors at once.
    """
    _check_cap(n, cap)
    kern = kernels or _kernels.K
    v = np.asarray(vec)
    if v.shape[0] != 2 ** n:
        raise InvalidInput(f"expected leading axis 2^{n}")
    tail = v.shape[1:]
    arr = v.reshape(1, -1)
    for t in range(1, n + 1):
        lv = level(t)
        arr = kern.couple(arr.reshape(arr.shape[0], 2, -1), lv.p0, lv.c0, lv.p1, lv.c1)
    return arr.reshape((level(n).size,) + tail)


def inverse_schur_transform_array(coeffs, n: int, cap: int = TRANSFORM_CAP) -> np.ndarray:
    _check_cap(n, cap)
    arr = np.asarray(coeffs)
    tail = arr.shape[1:]
    arr = arr.reshape(arr.shape[0], -1)
    for t in range(n, 0, -1):
        lv = level(t)
        nprev = 1 if t == 1 else level(t - 1).size
        new = np.zeros((nprev, 2, arr.shape[1]), dtype=np.result_type(arr.dtype, np.float64))
        for bit, (p, c) in enumerate(((lv.p0, lv.c0), (lv.p1, lv.c1))):
            ok = p >= 0
            np.add.at(new[:, bit, :], p[ok], c[ok, None] * arr[ok])
        arr = new.reshape(nprev, -1)
    return arr.reshape((2 ** n,) + tail)


def schur_matrix(n: int) -> np.ndarray:
    """G[label, sequence] = <label | s>, rows in canonical label order."""
    if n > 12:
        raise ResourceError("dense Schur matrix limited to n <= 12")
    return schur_transform_array(np.eye(2 ** n), n)


def schur_transform(amplitudes, n: int, cap: int = TRANSFORM_CAP) -> dict:
    """Map from SchurLabel to coefficient.

    `amplitudes` is either a length-2^n array indexed by sequence_index or a
    mapping from bit tuples to amplitudes (missing sequences are zero).
    """
    _check_cap(n, cap)
    if isinstance(amplitudes, dict):
        v = np.zeros(2 ** n, dtype=complex)
        for s, a in amplitudes.items():
            if len(s) != n:
                raise InvalidInput("sequence length mismatch")
            v[sequence_index(s)] = a
    else:
        v = np.asarray(amplitudes, dtype=complex)
    coeffs = schur_transform_array(v, n, cap)
    lv = level(n)
    return {lv.label(i): complex(coeffs[i]) for i in range(lv.size)}


def inverse_schur_transform(coeffs: dict, n: int) -> np.ndarray:
    lv = level(n)
    index = {lab: i for i, lab in enumerate(lv.labels())}
    arr = np.zeros(lv.size, dtype=complex)
    for lab, c in coeffs.items():
        arr[index[lab]] = c
    return inverse_schur_transform_array(arr, n)


def block_slices(n: int) -> dict:
    """Row indices of each j-block (keyed by second row lambda2) in canonical order."""
    lv = level(n)
    out = {}
    for lam2 in range(n // 2 + 1):
        out[lam2] = np.flatnonzero(lv.twoj == n - 2 * lam2)
    return out
