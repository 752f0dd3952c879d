"""Two-row partitions, standard/semistandard tableau counts and Yamanouchi symbols."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

EXACT_FACTORIAL_MAX = 64


@dataclass(frozen=True)
class TwoRowPartition:
    """A Young frame (lambda1, lambda2) with at most two rows."""

    lambda1: int
    lambda2: int

    def __post_init__(self):
        if not (isinstance(self.lambda1, int) and isinstance(self.lambda2, int)):
            raise TypeError("partition rows must be integers")
        if self.lambda2 < 0 or self.lambda1 < self.lambda2:
            raise ValueError(f"invalid two-row partition ({self.lambda1}, {self.lambda2})")

    @property
    def n(self) -> int:
        return self.lambda1 + self.lambda2

    @property
    def j(self) -> Fraction:
        return Fraction(self.lambda1 - self.lambda2, 2)

    @property
    def twoj(self) -> int:
        return self.lambda1 - self.lambda2

    @classmethod
    def from_second_row(cls, n: int, lambda2: int) -> "TwoRowPartition":
        return cls(n - lambda2, lambda2)

    @classmethod
    def from_j(cls, n: int, j) -> "TwoRowPartition":
        twoj = int(2 * Fraction(j))
        if (n - twoj) % 2:
            raise ValueError(f"j={j} incompatible with n={n}")
        return cls((n + twoj) // 2, (n - twoj) // 2)

    def __iter__(self):
        yield self.lambda1
        yield self.lambda2

    def __repr__(self):
        return f"({self.lambda1},{self.lambda2})"


def as_partition(lam) -> TwoRowPartition:
    if isinstance(lam, TwoRowPartition):
        return lam
    l1, l2 = lam
    return TwoRowPartition(int(l1), int(l2))


@dataclass(frozen=True)
class YamanouchiSymbol:
    """Row index (1 or 2) of each box in order of insertion."""

    entries: tuple

    def __post_init__(self):
        ones = twos = 0
        for e in self.entries:
            if e == 1:
                ones += 1
            elif e == 2:
                twos += 1
            else:
                raise ValueError("Yamanouchi entries must be 1 or 2")
            if twos > ones:
                raise ValueError(f"prefix violates lattice condition: {self.entries}")
        if self.entries and self.entries[0] != 1:
            raise ValueError("first entry must be 1")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> TwoRowPartition:
        twos = sum(1 for e in self.entries if e == 2)
        return TwoRowPartition(len(self.entries) - twos, twos)

    def partial_j(self) -> list:
        """Running angular momentum j_k after each box."""
        out, acc = [], Fraction(0)
        for e in self.entries:
            acc += Fraction(1, 2) if e == 1 else Fraction(-1, 2)
            out.append(acc)
        return out

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def factorial(k: int):
    """Exact factorial for k <= 64, float (via lgamma) beyond."""
    if k < 0:
        raise ValueError("negative factorial")
    if k <= EXACT_FACTORIAL_MAX:
        return math.factorial(k)
    return math.exp(math.lgamma(k + 1))


def log_factorial(k: int) -> float:
    return math.lgamma(k + 1)


def enumerate_two_row(n: int) -> list:
    """All (n-k, k) for 0 <= k <= n//2, in decreasing dominance order."""
    if n < 1:
        raise ValueError("n must be positive")
    return [TwoRowPartition(n - k, k) for k in range(n // 2 + 1)]


@lru_cache(maxsize=None)
def _f(l1: int, l2: int) -> int:
    # hook formula specialised to two rows
    n = l1 + l2
    return math.comb(n, l2) * (l1 - l2 + 1) // (l1 + 1)


def syt_count(lam) -> int:
    """Number of standard Young tableaux f^lambda."""
    lam = as_partition(lam)
    return _f(lam.lambda1, lam.lambda2)


def hook_product(lam) -> int:
    lam = as_partition(lam)
    rows = [r for r in (lam.lambda1, lam.lambda2) if r > 0]
    prod = 1
    for i, r in enumerate(rows):
        for c in range(r):
            arm = r - c - 1
            leg = sum(1 for rr in rows[i + 1:] if rr > c)
            prod *= arm + leg + 1
    return prod


def ssyt_count(lam, N: int) -> int:
    """Number of SSYT of shape lambda with entries in 1..N (dimension of the GL(N) irrep)."""
    lam = as_partition(lam)
    if N < 1:
        raise ValueError("N must be positive")
    nonzero = 2 if lam.lambda2 > 0 else (1 if lam.lambda1 > 0 else 0)
    if N < nonzero:
        return 0
    rows = ([lam.lambda1, lam.lambda2] + [0] * N)[:N]
    num = Fraction(1)
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            num *= Fraction(rows[i] - rows[j] + j - i, j - i)
    return int(num)


def yamanouchi_symbols(lam) -> list:
    """All Yamanouchi symbols of shape lambda in lexicographic order."""
    lam = as_partition(lam)
    out = []
    n, l2 = lam.n, lam.lambda2

    def rec(prefix, ones, twos):
        if len(prefix) == n:
            out.append(YamanouchiSymbol(tuple(prefix)))
            return
        if ones < lam.lambda1:
            prefix.append(1)
            rec(prefix, ones + 1, twos)
            prefix.pop()
        if twos < l2 and twos < ones:
            prefix.append(2)
            rec(prefix, ones, twos + 1)
            prefix.pop()

    rec([], 0, 0)
    return out


def dominates(lam, mu) -> bool:
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.n != mu.n:
        raise ValueError(f"incomparable sizes {lam.n} and {mu.n}")
    return lam.lambda1 >= mu.lambda1


def normalized(lam) -> tuple:
    lam = as_partition(lam)
    return (lam.lambda1 / lam.n, lam.lambda2 / lam.n)
