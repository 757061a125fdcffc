"""Elementary sequences of self-dual p-torsion modules.

A level-1 module carries operators F, V with F V = V F = 0, image F =
kernel V and image V = kernel F.  Closing the set {0, M} under N -> F(N)
and N -> V^{-1}(N) yields a finite set of subspaces that is totally ordered
(the canonical filtration); on each graded piece F is either injective or
zero.  The elementary sequence reads off psi(i) = dim F(M_i) along any
complete flag refining the canonical one: across a canonical gap psi grows
by one per step on injective pieces and stays flat on zero pieces.

Only dimensions of images and preimages matter here, so computing over the
prime field loses nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import nullspace_mod_p, rref_mod_p
from .errors import GradedPieceAssertionFailed, InputError, NotSelfDualShape, NotSymmetric
from .newton import NewtonPolygon

# level-1 minimal blocks are built without pulling in the full module layer
from .dieudonne import minimal_of_polygon


@dataclass(frozen=True)
class ElementarySequence:
    """psi(1..g) with 0 <= psi(1) <= 1, psi(i) <= psi(i+1) <= psi(i)+1, psi(i) <= i."""

    psi: tuple[int, ...]

    def __post_init__(self) -> None:
        psi = self.psi
        if psi:
            if not 0 <= psi[0] <= 1:
                raise InputError(f"psi(1) = {psi[0]} outside {{0, 1}}")
            for i in range(len(psi)):
                if not psi[i] <= i + 1:
                    raise InputError(f"psi({i + 1}) = {psi[i]} > {i + 1}")
                if i and not psi[i - 1] <= psi[i] <= psi[i - 1] + 1:
                    raise InputError(f"psi jumps badly at {i + 1}")

    def text(self) -> str:
        return "(" + ",".join(str(x) for x in self.psi) + ")"

    def to_json(self) -> list[int]:
        return list(self.psi)


@dataclass(frozen=True)
class BT1Module:
    """F_p-space with operators F, V satisfying F V = V F = 0."""

    p: int
    dim: int
    F: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    label: NewtonPolygon | None = None

    def __post_init__(self) -> None:
        F = np.asarray(self.F, dtype=np.int64) % self.p
        V = np.asarray(self.V, dtype=np.int64) % self.p
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "V", V)
        if F.shape != (self.dim, self.dim) or V.shape != (self.dim, self.dim):
            raise ValueError("operator shape does not match dimension")
        if ((F @ V) % self.p).any() or ((V @ F) % self.p).any():
            raise GradedPieceAssertionFailed("F V = V F = 0 fails at level 1")


def bt1_of_xi(xi: NewtonPolygon, p: int) -> BT1Module:
    """Level-1 minimal module of a symmetric polygon, dimension 2g."""
    if not xi.is_symmetric():
        raise NotSymmetric(f"{xi.text()} is not symmetric")
    M = minimal_of_polygon(xi, 1, p)
    return BT1Module(p=p, dim=M.h, F=M.F, V=M.V, label=xi)


# -- subspace arithmetic over F_p (rows = basis vectors) -----------------------

def _row_space(mat: np.ndarray, p: int) -> np.ndarray:
    if mat.shape[0] == 0:
        return mat.reshape(0, mat.shape[1])
    red, piv = rref_mod_p(mat, p)
    return np.ascontiguousarray(red[: len(piv)])


def _image(space: np.ndarray, op: np.ndarray, p: int) -> np.ndarray:
    return _row_space(space @ op.T % p, p)


def _preimage(space: np.ndarray, op: np.ndarray, p: int) -> np.ndarray:
    # x with op x in the row space: kill it with the annihilator functionals
    ann = nullspace_mod_p(space, p) if space.shape[0] else np.eye(space.shape[1], dtype=np.int64)
    if ann.shape[0] == 0:
        return _row_space(np.eye(space.shape[1], dtype=np.int64), p)
    return _row_space(nullspace_mod_p(ann @ op % p, p), p)


def _key(space: np.ndarray) -> bytes:
    return space.tobytes() + bytes([space.shape[0] % 251])


def canonical_filtration(M: BT1Module) -> list[np.ndarray]:
    """Coarsest flag containing 0 and M closed under F-image and V-preimage.

    Returned as reduced-echelon bases sorted by dimension.  Raises when the
    closure is not totally ordered or when F is neither injective nor zero
    on some graded piece; either would indicate a bug for the modules
    built here.
    """
    p, d = M.p, M.dim
    zero = np.empty((0, d), dtype=np.int64)
    full = _row_space(np.eye(d, dtype=np.int64), p) if d else zero
    spaces = {_key(zero): zero, _key(full): full}
    queue = [zero, full]
    while queue:
        N = queue.pop()
        for S in (_image(N, M.F, p), _preimage(N, M.V, p)):
            k = _key(S)
            if k not in spaces:
                spaces[k] = S
                queue.append(S)
    flag = sorted(spaces.values(), key=lambda s: s.shape[0])
    dims = [s.shape[0] for s in flag]
    if len(set(dims)) != len(dims):
        raise GradedPieceAssertionFailed("closure is not totally ordered")
    for small, big in zip(flag, flag[1:]):
        joined = _row_space(np.vstack([big, small]), p)
        if joined.shape[0] != big.shape[0]:
            raise GradedPieceAssertionFailed("closure is not a chain")
    fdims = [_image(s, M.F, p).shape[0] for s in flag]
    for j in range(1, len(flag)):
        df, dd = fdims[j] - fdims[j - 1], dims[j] - dims[j - 1]
        if df != 0 and df != dd:
            raise GradedPieceAssertionFailed(
                f"F neither injective nor zero on piece {dims[j - 1]}..{dims[j]}"
            )
    return flag


def elementary_sequence(M: BT1Module) -> ElementarySequence:
    """psi(1..g) of a self-dual module of dimension 2g."""
    if M.dim % 2 != 0:
        raise NotSelfDualShape(f"dimension {M.dim} is odd")
    g = M.dim // 2
    if g == 0:
        return ElementarySequence(())
    if _image(np.eye(M.dim, dtype=np.int64), M.V, M.p).shape[0] != g:
        raise NotSelfDualShape("dim V(M) != g")
    flag = canonical_filtration(M)
    dims = [s.shape[0] for s in flag]
    fdims = [_image(s, M.F, M.p).shape[0] for s in flag]
    # interpolate across each canonical gap: +1 per step when F is injective
    # on the graded piece, flat when F kills it
    psi = []
    for t in range(1, g + 1):
        j = next(i for i in range(1, len(dims)) if dims[i] >= t)
        lo_d, hi_d = dims[j - 1], dims[j]
        lo_f, hi_f = fdims[j - 1], fdims[j]
        if hi_f - lo_f == hi_d - lo_d:
            psi.append(lo_f + (t - lo_d))
        elif hi_f == lo_f:
            psi.append(lo_f)
        else:
            raise GradedPieceAssertionFailed(
                f"F neither injective nor zero on piece {lo_d}..{hi_d}"
            )
    return ElementarySequence(tuple(psi))
