"""Three-qubit SLOCC covariants, entanglement measures and the covariant-to-state map.

Covariants are polynomials in auxiliary variables x, y, z.  A CovariantPoly of
multidegree (p, q, r) stores its coefficients densely as coef[a0, b0, c0], the
coefficient of x0^a0 x1^(p-a0) y0^b0 y1^(q-b0) z0^c0 z1^(r-c0).

Conventions (checked numerically in the tests):
  gamma^A_{i1 i2} = 1/2 eps^{j1 j2} eps^{k1 k2} psi_{i1 j1 k1} psi_{i2 j2 k2}, so
  gamma^A_00 = psi000 psi011 - psi001 psi010;
  D000 = -4 det gamma^A, the Cayley hyperdeterminant (1/4 on |GHZ>), tau3 = 4|D000|;
  C111 has coefficients T_{cjk} = eps_{ab} psi_{ajk} gamma^A_{bc}.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, ResourceError, UnsupportedRegion
from .partitions import as_partition

EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])
POWER_CAP = 60
_AXES = {"A": 0, "B": 1, "C": 2}


# states ---------------------------------------------------------------------

@dataclass
class ThreeQubitState:
    psi: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.psi, dtype=complex)
        if a.size != 8:
            raise InvalidInput("a three-qubit state needs 8 amplitudes")
        a = a.reshape(2, 2, 2)
        if not np.all(np.isfinite(a)):
            raise InvalidInput("amplitudes must be finite")
        self.psi = a

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.psi) ** 2)))

    def normalized(self) -> "ThreeQubitState":
        nrm = self.norm
        if nrm == 0:
            raise InvalidInput("cannot normalise the zero vector")
        return ThreeQubitState(self.psi / nrm)


def as_psi(state) -> np.ndarray:
    if isinstance(state, ThreeQubitState):
        return state.psi
    return ThreeQubitState(state).psi


def basis_state(bits: str) -> np.ndarray:
    psi = np.zeros((2, 2, 2), dtype=complex)
    psi[tuple(int(b) for b in bits)] = 1.0
    return psi


def ghz_state() -> np.ndarray:
    psi = np.zeros((2, 2, 2), dtype=complex)
    psi[0, 0, 0] = psi[1, 1, 1] = 1 / math.sqrt(2)
    return psi


def w_state(a=1 / 3, b=1 / 3, c=1 / 3, d=0.0) -> np.ndarray:
    """sqrt(a)|100> + sqrt(b)|010> + sqrt(c)|001> + sqrt(d)|000>."""
    if min(a, b, c, d) < 0:
        raise InvalidInput("W parameters must be non-negative")
    psi = np.zeros((2, 2, 2), dtype=complex)
    psi[1, 0, 0], psi[0, 1, 0], psi[0, 0, 1], psi[0, 0, 0] = map(math.sqrt, (a, b, c, d))
    return psi


def ghz_family_factors(delta, epsilon, theta, varphi, phi):
    """Local operators (A, B, C) with the five-angle GHZ-class state = (A x B x C)|GHZ>."""
    K = 1.0 / (1 + 2 * math.cos(delta) * math.sin(delta) * math.cos(epsilon)
               * math.cos(theta) * math.cos(varphi) * math.cos(phi))
    e = np.exp(1j * phi)
    A = math.sqrt(2 * K) * np.array([[math.cos(delta), math.sin(delta) * math.cos(epsilon) * e],
                                     [0, math.sin(delta) * math.sin(epsilon) * e]])
    B = np.array([[1, math.cos(theta)], [0, math.sin(theta)]], dtype=complex)
    C = np.array([[1, math.cos(varphi)], [0, math.sin(varphi)]], dtype=complex)
    return A, B, C


def ghz_family_state(delta, epsilon, theta, varphi, phi) -> np.ndarray:
    """sqrt(K)(c_delta|000> + s_delta e^{i phi}|phi_A phi_B phi_C>), normalised."""
    return apply_local(ghz_state(), *ghz_family_factors(delta, epsilon, theta, varphi, phi))


def apply_local(psi, A, B, C) -> np.ndarray:
    return np.einsum("ai,bj,ck,ijk->abc", A, B, C, as_psi(psi))


def ghz_decomposition(psi, tol: float = 1e-10):
    """Return (A, B, C) with psi = (A x B x C)|GHZ>; psi must be in the GHZ class."""
    psi = as_psi(psi)
    if abs(covariant_D(psi)) <= tol * np.sum(np.abs(psi) ** 2) ** 2:
        raise UnsupportedRegion("state is not in the GHZ class")
    # rotate qubit A until the first slice is invertible
    for t in (0.0, 0.37, 1.1, 2.3):
        U = np.array([[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]])
        rot = np.einsum("ai,ijk->ajk", U, psi)
        M0, M1 = rot[0], rot[1]
        if abs(np.linalg.det(M0)) > 1e-8 * np.sum(np.abs(psi) ** 2):
            break
    lam, V = np.linalg.eig(M1 @ np.linalg.inv(M0))
    N = np.linalg.solve(V, M0)
    A_rot = np.array([[1.0, 1.0], [lam[0], lam[1]]], dtype=complex)
    B = V.astype(complex)
    C = math.sqrt(2) * N.T.astype(complex)
    A = U.T @ A_rot
    return A, B, C


# covariant polynomials -----------------------------------------------------

@dataclass
class CovariantPoly:
    d_psi: int
    coef: np.ndarray

    @property
    def degrees(self) -> tuple:
        return tuple(s - 1 for s in self.coef.shape)

    def __mul__(self, other: "CovariantPoly") -> "CovariantPoly":
        return CovariantPoly(self.d_psi + other.d_psi, _conv3(self.coef, other.coef))

    def scale(self, s) -> "CovariantPoly":
        return CovariantPoly(self.d_psi, self.coef * s)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coef))) if self.coef.size else 0.0

    def coefficients(self) -> dict:
        return {idx: complex(v) for idx, v in np.ndenumerate(self.coef) if v != 0}


def _conv3(P, Q):
    out = np.zeros(tuple(a + b - 1 for a, b in zip(P.shape, Q.shape)), dtype=complex)
    if P.size > Q.size:
        P, Q = Q, P
    s0, s1, s2 = Q.shape
    for (i, j, k), v in np.ndenumerate(P):
        if v != 0:
            out[i:i + s0, j:j + s1, k:k + s2] += v * Q
    return out


def one() -> CovariantPoly:
    return CovariantPoly(0, np.ones((1, 1, 1), dtype=complex))


def gamma_matrix(psi, axis: str = "A") -> np.ndarray:
    psi = as_psi(psi)
    ax = _AXES[axis]
    t = np.moveaxis(psi, ax, 0)
    return 0.5 * np.einsum("jm,kn,ijk,lmn->il", EPS, EPS, t, t)


def covariant_A(state) -> CovariantPoly:
    psi = as_psi(state)
    return CovariantPoly(1, psi[::-1, ::-1, ::-1].copy())


def covariant_B(state, axis: str = "A") -> CovariantPoly:
    if axis not in _AXES:
        raise InvalidInput(f"axis must be one of A, B, C, got {axis!r}")
    g = gamma_matrix(state, axis)
    quad = np.array([g[1, 1], 2 * g[0, 1], g[0, 0]])  # index = exponent of the 0-variable
    shape = [1, 1, 1]
    shape[_AXES[axis]] = 3
    return CovariantPoly(2, quad.reshape(shape))


def t_tensor(state) -> np.ndarray:
    psi = as_psi(state)
    return np.einsum("ab,ajk,bc->cjk", EPS, psi, gamma_matrix(psi, "A"))


def covariant_C(state) -> CovariantPoly:
    return CovariantPoly(3, t_tensor(state)[::-1, ::-1, ::-1].copy())


def covariant_D_routes(state) -> tuple:
    return tuple(-4 * np.linalg.det(gamma_matrix(state, ax)) for ax in "ABC")


def covariant_D(state) -> complex:
    return complex(-4 * np.linalg.det(gamma_matrix(state, "A")))


def generators(state) -> list:
    """[A111, B200, B020, B002, C111, D000] with D as a constant polynomial."""
    D = CovariantPoly(4, np.full((1, 1, 1), covariant_D(state), dtype=complex))
    return [covariant_A(state), covariant_B(state, "A"), covariant_B(state, "B"),
            covariant_B(state, "C"), covariant_C(state), D]


def covariant_power(state, n_vec, cap: int = POWER_CAP) -> CovariantPoly:
    """A^n1 B200^n2 B020^n3 B002^n4 C111^n5 D000^n6 expanded."""
    n_vec = [int(v) for v in n_vec]
    if len(n_vec) != 6 or min(n_vec) < 0:
        raise InvalidInput("n_vec must be six non-negative integers")
    copies = n_vec[0] + 2 * sum(n_vec[1:4]) + 3 * n_vec[4] + 4 * n_vec[5]
    if copies > cap:
        raise ResourceError(f"covariant power of state degree {copies} exceeds cap {cap}")
    out = one()
    for gen, e in zip(generators(state), n_vec):
        for _ in range(e):
            out = out * gen
    return out


def _lu_weights(degrees) -> np.ndarray:
    p, q, r = degrees
    wa = np.array([1.0 / math.comb(p, a) for a in range(p + 1)])
    wb = np.array([1.0 / math.comb(q, b) for b in range(q + 1)])
    wc = np.array([1.0 / math.comb(r, c) for c in range(r + 1)])
    return wa[:, None, None] * wb[None, :, None] * wc[None, None, :]


def lu_inner_product(P: CovariantPoly, Q: CovariantPoly) -> complex:
    """Auxiliary-variable scalar product; zero unless the multidegrees agree."""
    if P.degrees != Q.degrees:
        return 0j
    return complex(np.sum(np.conj(P.coef) * Q.coef * _lu_weights(P.degrees)))


def covariant_to_state(P: CovariantPoly, n: int, triplet) -> np.ndarray:
    """Vector over (a0, b0, c0): coefficients divided by sqrt of the binomial normalisers."""
    alpha2, beta2, gamma2 = _second_rows(triplet, n)
    want = (n - 2 * alpha2, n - 2 * beta2, n - 2 * gamma2)
    if P.degrees != want:
        raise InvalidInput(f"multidegree {P.degrees} does not match triplet {want}")
    return P.coef * np.sqrt(_lu_weights(want))


def _second_rows(triplet, n):
    if hasattr(triplet, "rows"):
        triplet = triplet.rows
    out = []
    for lam in triplet:
        if isinstance(lam, (int, np.integer)):
            out.append(int(lam))
        else:
            p = as_partition(lam)
            if p.n != n:
                raise InvalidInput("partition size differs from n")
            out.append(p.lambda2)
    if any(x < 0 or 2 * x > n for x in out):
        raise InvalidInput(f"second rows {out} invalid for n={n}")
    return tuple(out)


# measures -------------------------------------------------------------------

def reduced_density(state, subsystem: str) -> np.ndarray:
    psi = as_psi(state)
    if subsystem not in _AXES:
        raise InvalidInput(f"subsystem must be A, B or C, got {subsystem!r}")
    t = np.moveaxis(psi, _AXES[subsystem], 0).reshape(2, 4)
    return t @ t.conj().T


def two_qubit_density(state, pair: str) -> np.ndarray:
    """Reduced density matrix of two qubits, e.g. pair="AB"."""
    psi = as_psi(state)
    if sorted(pair) not in (["A", "B"], ["A", "C"], ["B", "C"]):
        raise InvalidInput(f"invalid pair {pair!r}")
    keep = [_AXES[p] for p in pair]
    rest = [ax for ax in range(3) if ax not in keep][0]
    t = np.transpose(psi, keep + [rest]).reshape(4, 2)
    return t @ t.conj().T


def _xlogx(p):
    return p * math.log(p) if p > 0 else 0.0


def local_entropy(state, subsystem: str) -> float:
    ev = np.clip(np.linalg.eigvalsh(reduced_density(state, subsystem)), 0, None)
    return float(-sum(_xlogx(p) for p in ev))


def linear_entropy(state, subsystem: str) -> float:
    """4 det rho (equals 2(1 - Tr rho^2) at unit norm)."""
    return float(4 * np.linalg.det(reduced_density(state, subsystem)).real)


def gamma_entropy(state, subsystem: str) -> float:
    """4 Tr[g^dag g + h^dag h] over the gamma matrices of the other two qubits."""
    others = [ax for ax in "ABC" if ax != subsystem]
    return float(4 * sum(np.sum(np.abs(gamma_matrix(state, ax)) ** 2) for ax in others))


def local_rank(state, subsystem: str, tol: float = 1e-10) -> int:
    psi = as_psi(state)
    ev = np.linalg.eigvalsh(reduced_density(psi, subsystem))
    return int(np.sum(ev > tol * max(np.sum(np.abs(psi) ** 2), 1e-300)))


_SYY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _check_density(rho, tol):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidInput("expected a 4x4 density matrix")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidInput("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidInput("density matrix does not have unit trace")
    if np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) < -tol:
        raise InvalidInput("density matrix is not positive semidefinite")
    return rho


def concurrence(rho, tol: float = 1e-9) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = _check_density(rho, tol)
    # sqrt-eigenvalues of rho*rho~ are the singular values of V^T (sy x sy) V with
    # rho = V V^+; dropping null directions avoids sqrt of rounding noise.
    w, U = np.linalg.eigh((rho + rho.conj().T) / 2)
    keep = w > 1e-13 * max(w.max(), 0.0)
    if not keep.any():
        return 0.0
    V = U[:, keep] * np.sqrt(w[keep])
    lam = np.zeros(4)
    s = np.linalg.svd(V.T @ _SYY @ V, compute_uv=False)
    lam[: len(s)] = s
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def entanglement_of_formation(rho, tol: float = 1e-9) -> float:
    """E_F in bits from the concurrence."""
    c = concurrence(rho, tol)
    x = (1 + math.sqrt(max(0.0, 1 - c * c))) / 2
    return float(-sum(p * math.log2(p) for p in (x, 1 - x) if p > 0))


def three_tangle(state) -> float:
    return 4 * abs(covariant_D(state))


def three_tangle_contraction(state) -> float:
    """2|psi psi psi psi eps^6| with the index pattern of the explicit tangle formula."""
    psi = as_psi(state)
    e = EPS
    val = np.einsum("ijk,abm,npc,qrs,ia,jb,kc,nq,ms,pr->", psi, psi, psi, psi,
                    e, e, e, e, e, e)
    return 2 * abs(val)


def kempe_invariant(state, symmetric: bool = True) -> float:
    """3Tr(rA x rB rAB) - Tr rA^3 - Tr rB^3; symmetric=False drops the factor 3."""
    psi = as_psi(state)
    rA, rB = reduced_density(psi, "A"), reduced_density(psi, "B")
    rAB = two_qubit_density(psi, "AB")
    mixed = np.trace(np.kron(rA, rB) @ rAB).real
    w = 3 if symmetric else 1
    return float(w * mixed - np.trace(rA @ rA @ rA).real - np.trace(rB @ rB @ rB).real)


def kempe_relation_sides(state, form: str = "corrected") -> tuple:
    """(<T|T>, right-hand side) of the Kempe relation.

    "corrected": (1/6)(K_sym - N^3) + N/16 (S_A+S_B+S_C), S = 4 det rho.
    "quoted":    (2/3)(K - N^3) + N/16 (S_A+S_B+S_C) with the unsymmetrised K.
    """
    psi = as_psi(state)
    N = float(np.sum(np.abs(psi) ** 2))
    lhs = float(np.sum(np.abs(t_tensor(psi)) ** 2))
    S = sum(linear_entropy(psi, s) for s in "ABC")
    if form == "corrected":
        rhs = (kempe_invariant(psi, True) - N ** 3) / 6 + N / 16 * S
    elif form == "quoted":
        rhs = 2 / 3 * (kempe_invariant(psi, False) - N ** 3) + N / 16 * S
    else:
        raise InvalidInput(f"unknown form {form!r}")
    return lhs, rhs


def kempe_relation_residual(state, form: str = "corrected") -> float:
    lhs, rhs = kempe_relation_sides(state, form)
    return abs(lhs - rhs)


SYZYGY_B_COEF = 1.0
SYZYGY_D_COEF = -0.25


def syzygy_polynomial(state) -> CovariantPoly:
    A, B1, B2, B3, C, D = generators(state)
    return CovariantPoly(6, (C * C).coef + SYZYGY_B_COEF * (B1 * B2 * B3).coef
                         + SYZYGY_D_COEF * (D * A * A).coef)


def syzygy_residual(state) -> float:
    """Largest coefficient of C^2 + B200 B020 B002 - D A^2 / 4."""
    return syzygy_polynomial(state).max_abs()


# classification --------------------------------------------------------------

class EntClass(str, enum.Enum):
    NULL = "NULL"
    SEP = "A-B-C"
    AB_C = "AB-C"
    A_BC = "A-BC"
    AC_B = "AC-B"
    W = "W"
    GHZ = "GHZ"

    def __str__(self):
        return self.value


def covariant_magnitudes(state) -> dict:
    gens = generators(state)
    names = ["A111", "B200", "B020", "B002", "C111", "D000"]
    return {k: g.max_abs() for k, g in zip(names, gens)}


def classify(state, tol: float = 1e-8) -> EntClass:
    psi = as_psi(state)
    nrm = math.sqrt(float(np.sum(np.abs(psi) ** 2)))
    if nrm == 0:
        return EntClass.NULL
    mags = covariant_magnitudes(psi)

    def nz(name, deg):
        return mags[name] > tol * nrm ** deg

    if nz("D000", 4):
        return EntClass.GHZ
    if nz("C111", 3):
        return EntClass.W
    bs = [nz("B200", 2), nz("B020", 2), nz("B002", 2)]
    if sum(bs) == 1:
        return (EntClass.A_BC, EntClass.AC_B, EntClass.AB_C)[bs.index(True)]
    if sum(bs) > 1:
        return EntClass.W
    return EntClass.SEP


# <Phi|Phi> closed forms --------------------------------------------------------

def w_decomposition(alpha2: int, beta2: int, gamma2: int, n: int):
    """The unique n-vector (n6 = 0) of a W-region triplet, or None outside the region."""
    lam = alpha2 + beta2 + gamma2
    n5 = lam % 2
    twice = (beta2 + gamma2 - alpha2 - n5, alpha2 + gamma2 - beta2 - n5, alpha2 + beta2 - gamma2 - n5)
    if lam > n or min(twice) < 0:
        return None
    return (n - lam, twice[0] // 2, twice[1] // 2, twice[2] // 2, n5, 0)


def _lbinom(a, b):
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def phi_norm_w(a, b, c, d, triplet, n: int) -> float:
    """<Phi|Phi> of the W-class state for the triplet (eta = 1); zero outside the W region."""
    alpha2, beta2, gamma2 = _second_rows(triplet, n)
    if min(a, b, c) <= 0 or d < 0:
        raise InvalidInput("W parameters need a, b, c > 0 and d >= 0")
    if w_decomposition(alpha2, beta2, gamma2, n) is None:
        return 0.0
    m = n - alpha2 - beta2 - gamma2
    k = np.arange(m + 1)
    k1, k2, k3 = np.meshgrid(k, k, k, indexing="ij")
    k4 = m - k1 - k2 - k3
    ok = (k4 >= 0) & (k1 <= n - 2 * alpha2) & (k2 <= n - 2 * beta2) & (k3 <= n - 2 * gamma2)
    if d == 0:
        ok &= k4 == 0
    lg = np.vectorize(math.lgamma)
    k1, k2, k3, k4 = k1[ok], k2[ok], k3[ok], k4[ok]
    logt = (2 * (math.lgamma(m + 1) - lg(k1 + 1) - lg(k2 + 1) - lg(k3 + 1) - lg(k4 + 1))
            + (alpha2 + k1) * math.log(a) + (beta2 + k2) * math.log(b) + (gamma2 + k3) * math.log(c)
            - np.array([_lbinom(n - 2 * alpha2, x) for x in k1])
            - np.array([_lbinom(n - 2 * beta2, x) for x in k2])
            - np.array([_lbinom(n - 2 * gamma2, x) for x in k3]))
    if d > 0:
        logt = logt + k4 * math.log(d)
    top = np.max(logt)
    return float(math.exp(top) * np.sum(np.exp(logt - top)))


def _one_dim_sum(m: int, ang: float) -> float:
    c2, s2 = math.cos(ang) ** 2, math.sin(ang) ** 2
    return sum(math.comb(m, k) ** 2 * c2 ** (m - k) * s2 ** k / math.comb(2 * m, k) for k in range(m + 1))


def ghz_bullet_sum(beta2: int, n: int) -> float:
    """2^-n sum_k (k+beta)!(n-k-beta)!/n!, the |GHZ> norm at (bullet, beta, beta)."""
    return sum(math.exp(math.lgamma(k + beta2 + 1) + math.lgamma(n - k - beta2 + 1)
                        - math.lgamma(n + 1) - n * math.log(2)) for k in range(n - 2 * beta2 + 1))


def phi_norm_ghz(delta, epsilon, theta, varphi, phi_angle, triplet, n: int, i: int | None = None) -> float:
    """<Phi|Phi> for the five-angle GHZ-class state on a g = 1 triplet (eta = 1).

    A box first frame uses the product of two one-dimensional sums; other g = 1
    triplets are expanded directly from the covariant product.
    """
    from .kronecker import fundamental_decompositions, TripletLabel

    alpha2, beta2, gamma2 = _second_rows(triplet, n)
    decs = fundamental_decompositions(TripletLabel(alpha2, beta2, gamma2, n))
    if not decs:
        return 0.0
    if len(decs) > 1:
        raise UnsupportedRegion(f"g={len(decs)} > 1 at ({alpha2},{beta2},{gamma2}); only g=1 is covered")
    nv = decs[0].n_vec
    if 2 * alpha2 == n:
        i_auto = (beta2 + gamma2 - n // 2) // 2
        if i is not None and i != i_auto:
            raise InvalidInput(f"i must equal {i_auto} on this facet")
        K = 1.0 / (1 + 2 * math.cos(delta) * math.sin(delta) * math.cos(epsilon)
                   * math.cos(theta) * math.cos(varphi) * math.cos(phi_angle))
        sd, se, st, sv = (abs(math.sin(x)) for x in (delta, epsilon, theta, varphi))
        cd = abs(math.cos(delta))
        n3, n4 = n // 2 - beta2, n // 2 - gamma2
        return float(K ** n * (sd * cd) ** n * se ** n * st ** (2 * beta2) * sv ** (2 * gamma2)
                     * _one_dim_sum(n3, theta) * _one_dim_sum(n4, varphi))
    if alpha2 == 0 and beta2 == gamma2 and np.allclose([delta, epsilon, theta, varphi, phi_angle],
                                                       [math.pi / 4, math.pi / 2, math.pi / 2, math.pi / 2, 0]):
        return ghz_bullet_sum(beta2, n)
    psi = ghz_family_state(delta, epsilon, theta, varphi, phi_angle)
    P = covariant_power(psi, nv)
    return float(lu_inner_product(P, P).real)
