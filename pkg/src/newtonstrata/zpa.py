"""Exact linear algebra over the local ring Z/p^a.

Every element of Z/p^a factors as unit * p^v, which makes echelonization
gcd-free: pick the minimum-valuation entry, normalize it to a pure power
of p, eliminate.  Two canonical forms are provided:

* :func:`howell_form` — the Howell normal form of a row span.  Unique per
  submodule, so span equality is array equality.  The completion step (the
  ``p^(a-v)`` multiple of each pivot row) is what makes reduction against
  the form decide membership.
* :func:`kernel_mod_prime_power` — generators and cyclic-factor exponents
  of the solution module of ``A x = 0``, via a diagonalization that tracks
  column transforms.
"""

from __future__ import annotations

import numpy as np


def val_p(x: int, p: int, a: int) -> int:
    """p-adic valuation of ``x`` as an element of Z/p^a (``a`` for zero)."""
    x = int(x) % p**a
    if x == 0:
        return a
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(rows, ncols: int, p: int, a: int) -> np.ndarray:
    """Howell normal form of the span of ``rows`` inside (Z/p^a)^ncols.

    Returns a matrix whose rows have strictly increasing pivot columns,
    pivot entries equal to p^v, and above-pivot entries reduced mod p^v.
    The zero span yields shape ``(0, ncols)``.
    """
    q = p**a
    work = []
    for r in rows:
        r = np.asarray(r, dtype=np.int64) % q
        if r.shape != (ncols,):
            raise ValueError(f"row of length {r.shape} != {ncols}")
        if r.any():
            work.append(r.copy())
    result: list[tuple[int, int, np.ndarray]] = []  # (col, val, row)
    for col in range(ncols):
        cand = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not cand:
            work = rest
            continue
        vals = [val_p(int(r[col]), p, a) for r in cand]
        v = min(vals)
        piv = cand.pop(vals.index(v))
        pv = p**v
        u = int(piv[col]) // pv
        piv = (piv * pow(u, -1, q)) % q
        for r in cand:
            f = int(r[col]) // pv
            r2 = (r - f * piv) % q
            if r2.any():
                rest.append(r2)
        if v > 0:
            comp = (piv * (p ** (a - v))) % q
            if comp.any():
                rest.append(comp)
        result.append((col, v, piv))
        work = rest
    # reduce entries above each pivot modulo p^v
    for t, (col, v, piv) in enumerate(result):
        pv = p**v
        for s in range(t):
            scol, sv, srow = result[s]
            f = int(srow[col]) // pv
            if f:
                result[s] = (scol, sv, (srow - f * piv) % q)
    if not result:
        return np.empty((0, ncols), dtype=np.int64)
    return np.array([piv for _, _, piv in result], dtype=np.int64)


def howell_pivot_vals(h: np.ndarray, p: int, a: int) -> list[tuple[int, int]]:
    """(pivot column, pivot valuation) per row of a Howell form."""
    out = []
    for r in h:
        nz = np.nonzero(r)[0]
        col = int(nz[0])
        out.append((col, val_p(int(r[col]), p, a)))
    return out


def span_order_exponent(h: np.ndarray, p: int, a: int) -> int:
    """log_p of the size of the span of a Howell form."""
    return sum(a - v for _, v in howell_pivot_vals(h, p, a))


def span_contains(h: np.ndarray, vec, p: int, a: int) -> bool:
    """Membership of ``vec`` in the span described by a Howell form."""
    q = p**a
    v = np.asarray(vec, dtype=np.int64) % q
    for row, (col, pv_val) in zip(h, howell_pivot_vals(h, p, a)):
        x = int(v[col])
        if x == 0:
            continue
        if val_p(x, p, a) < pv_val:
            return False
        f = x // p**pv_val
        v = (v - f * row) % q
    return not v.any()


def spans_equal(h1: np.ndarray, h2: np.ndarray) -> bool:
    return h1.shape == h2.shape and bool(np.array_equal(h1, h2))


def kernel_mod_prime_power(A, p: int, a: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Solve ``A x = 0`` over Z/p^a.

    Returns ``(generators, exponents)``: generator rows spanning the kernel,
    and the sorted exponents ``e`` of its cyclic decomposition into factors
    Z/p^e (trivial factors omitted).  The generator list is raw, one per
    cyclic factor; canonicalize with :func:`howell_form` when a unique
    representation is needed.
    """
    q = p**a
    B = np.asarray(A, dtype=np.int64).copy() % q
    m, n = B.shape
    W = np.eye(n, dtype=np.int64)
    vals: list[int] = []
    k = 0
    while k < min(m, n):
        best = None
        bv = a + 1
        for i in range(k, m):
            for j in range(k, n):
                x = int(B[i, j])
                if x:
                    v = val_p(x, p, a)
                    if v < bv:
                        bv = v
                        best = (i, j)
        if best is None:
            break
        i0, j0 = best
        if i0 != k:
            B[[k, i0]] = B[[i0, k]]
        if j0 != k:
            B[:, [k, j0]] = B[:, [j0, k]]
            W[:, [k, j0]] = W[:, [j0, k]]
        v = bv
        pv = p**v
        u = int(B[k, k]) // pv
        uinv = pow(u, -1, q)
        B[k] = (B[k] * uinv) % q
        for j in range(k + 1, n):
            x = int(B[k, j])
            if x:
                f = x // pv
                B[:, j] = (B[:, j] - f * B[:, k]) % q
                W[:, j] = (W[:, j] - f * W[:, k]) % q
        for i in range(k + 1, m):
            x = int(B[i, k])
            if x:
                B[i] = (B[i] - (x // pv) * B[k]) % q
        vals.append(v)
        k += 1
    gens = []
    exps = []
    for t, v in enumerate(vals):
        if v > 0:
            gens.append((W[:, t] * (p ** (a - v))) % q)
            exps.append(v)
    for t in range(len(vals), n):
        gens.append(W[:, t] % q)
        exps.append(a)
    if not gens:
        return np.empty((0, n), dtype=np.int64), ()
    return np.array(gens, dtype=np.int64), tuple(sorted(exps))
