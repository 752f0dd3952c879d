"""Kronecker coefficients of two-row triplets, fundamental-triplet decompositions,
a character-table oracle and the three-qubit compatibility polytope."""

from __future__ import annotations

import json
import math
import os
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .errors import InvalidInput, ResourceError
from .partitions import TwoRowPartition

BRUTEFORCE_CAP = 10
SCAN_CAP = 200


@dataclass(frozen=True, order=True)
class TripletLabel:
    """Second rows (alpha2, beta2, gamma2) of three two-row frames of n boxes."""

    alpha2: int
    beta2: int
    gamma2: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("n must be positive")
        for v in (self.alpha2, self.beta2, self.gamma2):
            if not isinstance(v, (int, np.integer)) or v < 0 or 2 * v > self.n:
                raise InvalidInput(f"second row {v} invalid for n={self.n}")

    @property
    def rows(self) -> tuple:
        return (self.alpha2, self.beta2, self.gamma2)

    @property
    def partitions(self) -> tuple:
        return tuple(TwoRowPartition(self.n - x, x) for x in self.rows)

    @property
    def bar(self) -> tuple:
        return tuple(x / self.n for x in self.rows)

    def permuted(self, order) -> "TripletLabel":
        r = self.rows
        return TripletLabel(r[order[0]], r[order[1]], r[order[2]], self.n)


def all_triplets(n: int) -> list:
    h = n // 2
    return [TripletLabel(a, b, c, n) for a, b, c in product(range(h + 1), repeat=3)]


# closed formula ----------------------------------------------------------------

def kronecker_two_row(t: TripletLabel) -> int:
    a, b, c = t.rows
    lam = a + b + c
    y = (lam - 2 * max(a, b, c)) // 2
    return sum(1 for k in range(min(a, b, c) // 2 + 1) if y >= k and t.n - lam + 2 * k >= 0)


@dataclass(frozen=True)
class FundamentalDecomposition:
    """Multiplicities of the six fundamental triplets (A, B200, B020, B002, C111, D000)."""

    n_vec: tuple

    def triplet(self) -> TripletLabel:
        n1, n2, n3, n4, n5, n6 = self.n_vec
        n = n1 + 2 * (n2 + n3 + n4) + 3 * n5 + 4 * n6
        return TripletLabel(n3 + n4 + n5 + 2 * n6, n2 + n4 + n5 + 2 * n6, n2 + n3 + n5 + 2 * n6, n)


def fundamental_decompositions(t: TripletLabel) -> list:
    """All n-vectors with n5 <= 1 reconstructing the triplet, ordered by n6."""
    a, b, c = t.rows
    lam = a + b + c
    n5 = lam % 2
    out = []
    for n6 in range(min(a, b, c) // 2 + 1):
        n2 = (b + c - a - n5) // 2 - n6
        n3 = (a + c - b - n5) // 2 - n6
        n4 = (a + b - c - n5) // 2 - n6
        n1 = t.n - lam + 2 * n6
        if min(n1, n2, n3, n4) >= 0 and (b + c - a - n5) % 2 == 0:
            out.append(FundamentalDecomposition((n1, n2, n3, n4, n5, n6)))
    return out


def fundamental_decompositions_bruteforce(t: TripletLabel) -> list:
    """Enumerate every 6-tuple with n5 in {0, 1}; oracle for the direct solve."""
    n = t.n
    out = []
    for n5 in (0, 1):
        for n6 in range((n - 3 * n5) // 4 + 1):
            rest = n - 3 * n5 - 4 * n6
            for n2 in range(rest // 2 + 1):
                for n3 in range((rest - 2 * n2) // 2 + 1):
                    for n4 in range((rest - 2 * n2 - 2 * n3) // 2 + 1):
                        n1 = rest - 2 * (n2 + n3 + n4)
                        d = FundamentalDecomposition((n1, n2, n3, n4, n5, n6))
                        if d.triplet() == t:
                            out.append(d)
    return sorted(out, key=lambda d: d.n_vec[5])


def in_w_region(t: TripletLabel) -> bool:
    """Triplet reachable without D000 (a decomposition with n6 = 0)."""
    return any(d.n_vec[5] == 0 for d in fundamental_decompositions(t))


# character oracle -----------------------------------------------------------

def partitions_of(n: int, max_part: int | None = None) -> list:
    max_part = n if max_part is None else max_part
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, max_part), 0, -1):
        out.extend((k,) + rest for rest in partitions_of(n - k, k))
    return out


@lru_cache(maxsize=None)
def mn_character(lam: tuple, mu: tuple) -> int:
    """chi^lam at cycle type mu by Murnaghan-Nakayama rim-hook removal on beta-sets."""
    lam = tuple(x for x in lam if x > 0)
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    L = len(lam)
    beta = [lam[i] + (L - 1 - i) for i in range(L)]
    bset = set(beta)
    total = 0
    for x in beta:
        y = x - r
        if y < 0 or y in bset:
            continue
        sign = (-1) ** sum(1 for z in beta if y < z < x)
        nb = sorted((bset - {x}) | {y}, reverse=True)
        new = tuple(nb[i] - (L - 1 - i) for i in range(L))
        total += sign * mn_character(new, rest)
    return total


def class_size(mu: tuple) -> int:
    n = sum(mu)
    z = 1
    for part in set(mu):
        m = mu.count(part)
        z *= part ** m * math.factorial(m)
    return math.factorial(n) // z


_memo_lock = threading.Lock()
_memo: dict | None = None


def _memo_path():
    d = os.environ.get("SCHURDIST_CACHE_DIR")
    return os.path.join(d, "kronecker_bruteforce.json") if d else None


def _load_memo() -> dict:
    global _memo
    if _memo is None:
        _memo = {}
        path = _memo_path()
        if path and os.path.exists(path):
            try:
                with open(path) as fh:
                    _memo = json.load(fh)
            except (OSError, ValueError):
                _memo = {}
    return _memo


def _store_memo(key, value):
    with _memo_lock:
        memo = _load_memo()
        memo[key] = value
        path = _memo_path()
        if path:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp = f"{path}.{os.getpid()}.tmp"
            with open(tmp, "w") as fh:
                json.dump(memo, fh)
            os.replace(tmp, path)


def kronecker_bruteforce(t: TripletLabel) -> int:
    """(1/n!) sum_classes |class| chi^alpha chi^beta chi^gamma, exact."""
    n = t.n
    if n > BRUTEFORCE_CAP:
        raise ResourceError(f"character oracle capped at n={BRUTEFORCE_CAP}")
    key = f"{n}:{t.alpha2}:{t.beta2}:{t.gamma2}"
    memo = _load_memo()
    if key in memo:
        return memo[key]
    a, b, c = (tuple(p) for p in t.partitions)
    tot = sum(class_size(mu) * mn_character(a, mu) * mn_character(b, mu) * mn_character(c, mu)
              for mu in partitions_of(n))
    q = Fraction(tot, math.factorial(n))
    if q.denominator != 1:
        raise ArithmeticError("non-integral character inner product")
    _store_memo(key, int(q))
    return int(q)


# polytope -------------------------------------------------------------------

def _check_unit(vals):
    for v in vals:
        if not (0 <= v <= 0.5):
            raise InvalidInput(f"smallest eigenvalue {v} outside [0, 1/2]")


def polytope_membership(lamA, lamB, lamC, tol: float = 1e-12) -> bool:
    """Higuchi inequalities for three qubits, given the smallest local eigenvalues."""
    lams = (lamA, lamB, lamC)
    _check_unit(lams)
    big = [1 - x for x in lams]
    return all(sum(big) - big[l] <= 1 + big[l] + tol for l in range(3))


def class_region_membership(cls, lamA, lamB, lamC, tol: float = 1e-12) -> bool:
    from .covariants import EntClass

    cls = EntClass(cls)
    _check_unit((lamA, lamB, lamC))
    if cls is EntClass.NULL:
        return False
    if cls is EntClass.SEP:
        return max(lamA, lamB, lamC) <= tol
    if cls is EntClass.AB_C:
        return lamC <= tol and abs(lamA - lamB) <= tol
    if cls is EntClass.A_BC:
        return lamA <= tol and abs(lamB - lamC) <= tol
    if cls is EntClass.AC_B:
        return lamB <= tol and abs(lamA - lamC) <= tol
    inside = polytope_membership(lamA, lamB, lamC, tol)
    if cls is EntClass.W:
        return inside and lamA + lamB + lamC <= 1 + tol
    return inside


def _kron_slab(args):
    n, a = args
    h = n // 2
    b, c = np.meshgrid(np.arange(h + 1), np.arange(h + 1), indexing="ij")
    lam = a + b + c
    y = (lam - 2 * np.maximum(np.maximum(a, b), c)) // 2
    mn = np.minimum(np.minimum(a, b), c)
    g = np.zeros_like(b)
    for k in range(h // 2 + 1):
        g += ((k <= mn // 2) & (k <= y) & (n - lam + 2 * k >= 0)).astype(b.dtype)
    return g


def kronecker_table(n: int, jobs: int | None = 1, kernels=None) -> np.ndarray:
    """g[alpha2, beta2, gamma2] for every two-row triplet of S_n."""
    if n < 1:
        raise InvalidInput("n must be positive")
    if n > SCAN_CAP:
        raise ResourceError(f"scan capped at n={SCAN_CAP}")
    if jobs is not None and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            slabs = list(pool.map(_kron_slab, [(n, a) for a in range(n // 2 + 1)]))
        return np.stack(slabs).astype(np.int64)
    kern = kernels or _kernels.K
    return np.asarray(kern.kron_scan(n), dtype=np.int64)


def polytope_scan(n: int, jobs: int | None = 1, kernels=None) -> list:
    """All triplets with g > 0, sorted, as (TripletLabel, g)."""
    g = kronecker_table(n, jobs, kernels)
    idx = np.argwhere(g > 0)
    return [(TripletLabel(int(a), int(b), int(c), n), int(g[a, b, c])) for a, b, c in idx]


def polytope_violation(point) -> float:
    """Euclidean distance lower bound from a point to the polytope (0 inside)."""
    x = np.asarray(point, dtype=float)
    v = [max(0.0, -x.min()), max(0.0, x.max() - 0.5)]
    for l in range(3):
        others = [x[k] for k in range(3) if k != l]
        v.append(max(0.0, (x[l] - sum(others)) / math.sqrt(3)))
    return float(max(v))


def support_deviation(n: int, grid: int = 60, jobs: int | None = 1) -> dict:
    """Hausdorff-type deviation between the normalised g>0 support and the polytope.

    outside: worst distance of a support point from the polytope.
    coverage: worst distance from a polytope grid point to the nearest support point.
    """
    from scipy.spatial import cKDTree

    pts = np.array([t.bar for t, _ in polytope_scan(n, jobs)])
    outside = max(polytope_violation(p) for p in pts)
    ax = np.linspace(0, 0.5, grid + 1)
    G = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), -1).reshape(-1, 3)
    keep = (G[:, 0] <= G[:, 1] + G[:, 2] + 1e-12) & (G[:, 1] <= G[:, 0] + G[:, 2] + 1e-12) \
        & (G[:, 2] <= G[:, 0] + G[:, 1] + 1e-12)
    dist, _ = cKDTree(pts).query(G[keep])
    return {"n": n, "outside": outside, "coverage": float(dist.max()),
            "hausdorff": float(max(outside, dist.max()))}


def w_region_support(n: int) -> list:
    return [t for t, _ in polytope_scan(n) if in_w_region(t)]
