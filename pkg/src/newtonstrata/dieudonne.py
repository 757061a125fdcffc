"""Truncated modules over Z/p^a with commuting operator pairs (F, V).

The minimal module of a coprime pair ``(m, n)`` has rank ``h = m + n`` with
basis ``b_0 .. b_{h-1}``; F shifts indices by ``n`` and V by ``m``, each
picking up a factor ``p`` on wrap-around.  These satisfy ``F V = V F = p``
and ``F^m = V^n`` exactly, and F is invertible precisely on the slope-zero
part.  Direct sums of minimal modules model the minimal object of an
arbitrary polygon.

Hom groups between two modules are computed as the kernel of the linear
intertwining system over Z/p^a; restriction-image chains track how much of
a level-n homomorphism group is reachable from higher levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import zpa
from ._kernels import rref_mod_p, scan_intertwiners
from .errors import (
    BoundExceeded,
    InternalCheckError,
    MixedPrimeOrLevel,
    SingularMatrix,
    WrongLevel,
)
from .newton import NewtonPolygon, from_pairs, from_slopes

DEFAULT_LEVEL_BOUND = 8


@dataclass(frozen=True)
class TruncatedDieudonneModule:
    p: int
    a: int
    h: int
    F: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    label: NewtonPolygon | None = None

    def __post_init__(self) -> None:
        q = self.p**self.a
        F = np.asarray(self.F, dtype=np.int64) % q
        V = np.asarray(self.V, dtype=np.int64) % q
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "V", V)
        if F.shape != (self.h, self.h) or V.shape != (self.h, self.h):
            raise ValueError("operator shape does not match rank")
        pid = (self.p * np.eye(self.h, dtype=np.int64)) % q
        if not (np.array_equal(F @ V % q, pid) and np.array_equal(V @ F % q, pid)):
            raise InternalCheckError("F V = V F = p failed")

    @property
    def q(self) -> int:
        return self.p**self.a

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "a": self.a,
            "h": self.h,
            "F": self.F.tolist(),
            "V": self.V.tolist(),
            "label": self.label.text() if self.label is not None else None,
        }


def _shift_matrix(h: int, shift: int, p: int, q: int) -> np.ndarray:
    """b_i -> b_{i+shift}, with a factor p when the index wraps past h."""
    M = np.zeros((h, h), dtype=np.int64)
    for i in range(h):
        j = i + shift
        M[j % h, i] = 1 if j < h else p % q
    return M


def minimal_module(m: int, n: int, a: int, p: int) -> TruncatedDieudonneModule:
    """The rank ``m + n`` minimal module of the coprime pair ``(m, n)``."""
    label = from_pairs([(m, n, 1)])  # validates coprimality / zero pair
    if a < 1:
        raise WrongLevel(f"level {a} < 1")
    h = m + n
    q = p**a
    F = _shift_matrix(h, n, p, q)
    V = _shift_matrix(h, m, p, q)
    mod = TruncatedDieudonneModule(p=p, a=a, h=h, F=F, V=V, label=label)
    Fm = np.linalg.matrix_power(F, m) % q if m else np.eye(h, dtype=np.int64)
    Vn = np.linalg.matrix_power(V, n) % q if n else np.eye(h, dtype=np.int64)
    if not np.array_equal(Fm % q, Vn % q):
        raise InternalCheckError("F^m = V^n failed")
    return mod


def direct_sum(
    modules: list[TruncatedDieudonneModule], *, p: int | None = None, a: int | None = None
) -> TruncatedDieudonneModule:
    """Block-diagonal sum; ``p`` and ``a`` are needed only for the empty sum."""
    if not modules:
        if p is None or a is None:
            raise MixedPrimeOrLevel("empty sum needs explicit p and a")
        z = np.zeros((0, 0), dtype=np.int64)
        return TruncatedDieudonneModule(p=p, a=a, h=0, F=z, V=z, label=None)
    p0, a0 = modules[0].p, modules[0].a
    if any(mod.p != p0 or mod.a != a0 for mod in modules):
        raise MixedPrimeOrLevel("summands disagree on (p, a)")
    h = sum(mod.h for mod in modules)
    F = np.zeros((h, h), dtype=np.int64)
    V = np.zeros((h, h), dtype=np.int64)
    at = 0
    triples = []
    for mod in modules:
        F[at : at + mod.h, at : at + mod.h] = mod.F
        V[at : at + mod.h, at : at + mod.h] = mod.V
        at += mod.h
        if mod.label is not None:
            triples.extend((sp.m, sp.n, r) for sp, r in mod.label.parts)
    label = from_pairs(triples) if triples else None
    return TruncatedDieudonneModule(p=p0, a=a0, h=h, F=F, V=V, label=label)


def minimal_of_polygon(beta: NewtonPolygon, a: int, p: int) -> TruncatedDieudonneModule:
    """Direct sum of minimal modules, one block per slope pair of ``beta``."""
    mods = []
    for sp, r in beta.parts:
        mods.extend(minimal_module(sp.m, sp.n, a, p) for _ in range(r))
    return direct_sum(mods, p=p, a=a)


# -- hom groups ----------------------------------------------------------------

@dataclass(frozen=True)
class HomGroup:
    """The group of (F, V)-intertwining matrices M1 -> M2 over Z/p^a.

    ``generators`` is the Howell form of the solution module (rows are
    flattened h2 x h1 matrices); ``elementary_divisor_exponents`` are the
    exponents of its cyclic decomposition, sorted non-decreasingly.
    """

    p: int
    a: int
    shape: tuple[int, int]
    generators: np.ndarray = field(repr=False)
    elementary_divisor_exponents: tuple[int, ...] = ()

    def matrices(self) -> list[np.ndarray]:
        h2, h1 = self.shape
        return [g.reshape(h2, h1) for g in self.generators]

    def order_exponent(self) -> int:
        return sum(self.elementary_divisor_exponents)


def _intertwining_system(M1: TruncatedDieudonneModule, M2: TruncatedDieudonneModule) -> np.ndarray:
    """Coefficient matrix of phi F1 = F2 phi and phi V1 = V2 phi.

    Unknowns are the entries of phi (h2 x h1), flattened row-major.
    """
    h1, h2 = M1.h, M2.h
    nun = h2 * h1
    T = np.zeros((2 * nun, nun), dtype=np.int64)
    row = 0
    for Op1, Op2 in ((M1.F, M2.F), (M1.V, M2.V)):
        for i in range(h2):
            for j in range(h1):
                for r in range(h2):
                    for c in range(h1):
                        coeff = 0
                        if r == i:
                            coeff += int(Op1[c, j])
                        if c == j:
                            coeff -= int(Op2[i, r])
                        T[row, r * h1 + c] = coeff
                row += 1
    return T


def hom_group(M1: TruncatedDieudonneModule, M2: TruncatedDieudonneModule) -> HomGroup:
    """Solve the intertwining system; canonical generators via Howell form."""
    if M1.p != M2.p or M1.a != M2.a:
        raise MixedPrimeOrLevel("modules disagree on (p, a)")
    p, a = M1.p, M1.a
    q = p**a
    nun = M2.h * M1.h
    if nun == 0:
        return HomGroup(p=p, a=a, shape=(M2.h, M1.h), generators=np.empty((0, 0), np.int64))
    T = _intertwining_system(M1, M2)
    gens, exps = zpa.kernel_mod_prime_power(T, p, a)
    H = zpa.howell_form(gens, nun, p, a)
    for g in H:
        phi = g.reshape(M2.h, M1.h)
        bad_f = ((phi @ M1.F - M2.F @ phi) % q).any()
        bad_v = ((phi @ M1.V - M2.V @ phi) % q).any()
        if bad_f or bad_v:
            raise InternalCheckError("hom generator fails to intertwine")
    return HomGroup(p=p, a=a, shape=(M2.h, M1.h), generators=H, elementary_divisor_exponents=exps)


def brute_force_homs(
    M1: TruncatedDieudonneModule, M2: TruncatedDieudonneModule, *, cap: int = 1 << 20
) -> np.ndarray:
    """Oracle: enumerate every candidate matrix and keep the intertwiners.

    Independent of the structured solver; cost is q**(h1*h2) candidates.
    """
    if M1.p != M2.p or M1.a != M2.a:
        raise MixedPrimeOrLevel("modules disagree on (p, a)")
    q = M1.q
    total = q ** (M2.h * M1.h)
    if total > cap:
        raise BoundExceeded(f"{total} candidates exceed cap {cap}")
    return scan_intertwiners(M1.F, M1.V, M2.F, M2.V, q)


# -- restriction-image chains ---------------------------------------------------

@dataclass(frozen=True)
class ImageChain:
    """Images of level-N endomorphism groups inside the level-n one."""

    beta: NewtonPolygon
    p: int
    n: int
    n_max: int
    images: tuple[np.ndarray, ...] = field(repr=False)  # Howell forms mod p^n, N = n..n_max
    stabilization_index: int = 0

    def image_order_exponents(self) -> list[int]:
        return [zpa.span_order_exponent(h, self.p, self.n) for h in self.images]


def restriction_image_chain(
    beta: NewtonPolygon,
    n: int,
    n_max: int,
    *,
    p: int = 2,
    level_bound: int = DEFAULT_LEVEL_BOUND,
) -> ImageChain:
    """Reduce level-N endomorphism groups of the minimal module of ``beta``
    to level ``n`` for N = n .. n_max, and find where the chain stabilizes.

    Images are canonical Howell forms over Z/p^n; the chain is weakly
    descending and ``stabilization_index`` is the least N whose image equals
    every later one.
    """
    if not (1 <= n < n_max):
        raise BoundExceeded(f"need 1 <= n < n_max, got n={n}, n_max={n_max}")
    if n_max > level_bound:
        raise BoundExceeded(f"n_max {n_max} exceeds level bound {level_bound}")
    nun = (beta.height) ** 2
    images = []
    for N in range(n, n_max + 1):
        M = minimal_of_polygon(beta, N, p)
        gens = hom_group(M, M).generators
        images.append(zpa.howell_form(gens % p**n, nun, p, n))
    for prev, nxt in zip(images, images[1:]):
        if not all(zpa.span_contains(prev, row, p, n) for row in nxt):
            raise InternalCheckError("restriction images are not descending")
    stab = n_max
    for idx in range(len(images) - 1, -1, -1):
        if zpa.spans_equal(images[idx], images[-1]):
            stab = n + idx
        else:
            break
    return ImageChain(
        beta=beta, p=p, n=n, n_max=n_max, images=tuple(images), stabilization_index=stab
    )


# -- slope recovery from a Frobenius matrix --------------------------------------

def _char_poly(mat: list[list[Fraction]]) -> list[Fraction]:
    """Faddeev-LeVerrier: coefficients c_0..c_h of det(tI - A), exact."""
    h = len(mat)
    A = [[Fraction(x) for x in row] for row in mat]
    coeffs = [Fraction(0)] * (h + 1)
    coeffs[h] = Fraction(1)
    M = [[Fraction(0)] * h for _ in range(h)]
    for k in range(1, h + 1):
        # M <- A (M + c_{h-k+1} I)
        for i in range(h):
            M[i][i] += coeffs[h - k + 1]
        M = [
            [sum(A[i][t] * M[t][j] for t in range(h)) for j in range(h)]
            for i in range(h)
        ]
        trace = sum(M[i][i] for i in range(h))
        coeffs[h - k] = -trace / k
    return coeffs


def _val_fraction(x: Fraction, p: int) -> int:
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def frobenius_newton_polygon(matrix, p: int) -> NewtonPolygon:
    """Newton polygon of the characteristic polynomial of an exact matrix.

    Slopes are the p-adic valuations of the characteristic roots, read off
    the lower convex hull of ``(i, val_p(c_i))``; no floating point.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    h = len(rows)
    if h == 0 or any(len(r) != h for r in rows):
        raise SingularMatrix("matrix must be square and non-empty")
    coeffs = _char_poly(rows)
    if coeffs[0] == 0:
        raise SingularMatrix("matrix is singular over the p-adic field")
    pts = [(i, _val_fraction(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull = [pts[0]]
    for pt in pts[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop middle point when it lies on or above the new chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    vals: list[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        vals.extend([Fraction(y1 - y2, x2 - x1)] * (x2 - x1))
    vals.sort()
    return from_slopes(vals)


def exact_frobenius_matrix(beta: NewtonPolygon, p: int) -> list[list[int]]:
    """Integer (untruncated) Frobenius matrix of the minimal module of beta."""
    h = beta.height
    M = [[0] * h for _ in range(h)]
    at = 0
    for sp, r in beta.parts:
        for _ in range(r):
            hb = sp.height
            for i in range(hb):
                j = i + sp.n
                M[at + j % hb][at + i] = 1 if j < hb else p
            at += hb
    return M


# -- level-1 invariants -----------------------------------------------------------

def a_number(M: TruncatedDieudonneModule) -> int:
    """dim ker(F) ∩ ker(V) over F_p; defined at level 1 only."""
    if M.a != 1:
        raise WrongLevel(f"a_number needs level 1, module has level {M.a}")
    if M.h == 0:
        return 0
    stacked = np.vstack([M.F, M.V]) % M.p
    _, piv = rref_mod_p(stacked, M.p)
    return M.h - len(piv)
