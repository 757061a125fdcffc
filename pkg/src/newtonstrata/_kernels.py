"""Hot numeric kernels with two interchangeable backends.

The two inner loops that dominate long sweeps live here:

* ``rref_mod_p`` — reduced row echelon form over the prime field, the
  workhorse behind every subspace operation in the filtration code;
* ``scan_intertwiners`` — exhaustive enumeration of all matrices over
  ``Z/q`` intertwining two operator pairs, used as the brute-force oracle
  against the structured solver.

Backend selection: the environment variable ``NEWTONSTRATA_BACKEND`` may be
``numba``, ``numpy`` or ``auto`` (default).  ``auto`` compiles with numba
when it is importable and silently falls back to pure numpy otherwise.
numba is imported lazily, on the first kernel call, so that short-lived
processes never pay its import cost unless the kernels are actually hot.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "NEWTONSTRATA_BACKEND"

_resolved: str | None = None
_impls: dict[str, dict] = {}


# -- pure numpy implementations ----------------------------------------------

def _rref_mod_p_np(a: np.ndarray, p: int):
    p = int(p)
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        for j in np.nonzero(a[:, c])[0]:
            if j != r:
                a[j] = (a[j] - a[j, c] * a[r]) % p
        piv.append(c)
        r += 1
    return a, np.array(piv, dtype=np.int64)


def _scan_intertwiners_np(F1, V1, F2, V2, q: int):
    q = int(q)
    h1 = F1.shape[0]
    h2 = F2.shape[0]
    nun = h2 * h1
    total = q**nun
    powers = q ** np.arange(nun, dtype=np.int64)
    found = []
    batch = 1 << 15
    for start in range(0, total, batch):
        ks = np.arange(start, min(start + batch, total), dtype=np.int64)
        digits = (ks[:, None] // powers[None, :]) % q
        phi = digits.reshape(-1, h2, h1)
        lhs = (np.einsum("bij,jk->bik", phi, F1) - np.einsum("ij,bjk->bik", F2, phi)) % q
        mask = ~lhs.any(axis=(1, 2))
        if mask.any():
            cand = phi[mask]
            lhs2 = (np.einsum("bij,jk->bik", cand, V1) - np.einsum("ij,bjk->bik", V2, cand)) % q
            m2 = ~lhs2.any(axis=(1, 2))
            if m2.any():
                found.append(digits[mask][m2])
    if not found:
        return np.empty((0, nun), dtype=np.int64)
    return np.concatenate(found)


_impls["numpy"] = {
    "rref_mod_p": _rref_mod_p_np,
    "scan_intertwiners": _scan_intertwiners_np,
}


# -- numba implementations (lazy) ---------------------------------------------

def _build_numba_impls() -> dict:
    from numba import njit

    @njit(cache=True)
    def _pow_mod(base, exp, mod):
        result = np.int64(1)
        b = base % mod
        e = exp
        while e > 0:
            if e & 1:
                result = (result * b) % mod
            b = (b * b) % mod
            e >>= 1
        return result

    @njit(cache=True)
    def rref_mod_p(a_in, p):
        a = a_in % p
        rows, cols = a.shape
        piv = np.empty(cols, dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            sel = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[sel, j]
                    a[sel, j] = t
            inv = _pow_mod(a[r, c], p - 2, p)
            for j in range(cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            piv[r] = c
            r += 1
        return a, piv[:r]

    @njit(cache=True)
    def scan_intertwiners(F1, V1, F2, V2, q):
        h1 = F1.shape[0]
        h2 = F2.shape[0]
        nun = h2 * h1
        total = np.int64(1)
        for _ in range(nun):
            total *= q
        out = np.empty((16, nun), dtype=np.int64)
        count = 0
        phi = np.zeros((h2, h1), dtype=np.int64)
        for k in range(total):
            kk = k
            for j in range(nun):
                phi[j // h1, j % h1] = kk % q
                kk //= q
            ok = True
            for i in range(h2):
                if not ok:
                    break
                for j in range(h1):
                    s = np.int64(0)
                    for t in range(h1):
                        s += phi[i, t] * F1[t, j]
                    for t in range(h2):
                        s -= F2[i, t] * phi[t, j]
                    if s % q != 0:
                        ok = False
                        break
            if ok:
                for i in range(h2):
                    if not ok:
                        break
                    for j in range(h1):
                        s = np.int64(0)
                        for t in range(h1):
                            s += phi[i, t] * V1[t, j]
                        for t in range(h2):
                            s -= V2[i, t] * phi[t, j]
                        if s % q != 0:
                            ok = False
                            break
            if ok:
                if count == out.shape[0]:
                    grown = np.empty((out.shape[0] * 2, nun), dtype=np.int64)
                    grown[:count] = out[:count]
                    out = grown
                kk = k
                for j in range(nun):
                    out[count, j] = kk % q
                    kk //= q
                count += 1
        return out[:count]

    return {"rref_mod_p": rref_mod_p, "scan_intertwiners": scan_intertwiners}


def available_backends() -> tuple[str, ...]:
    try:
        import numba  # noqa: F401

        return ("numpy", "numba")
    except ImportError:
        return ("numpy",)


def implementations(backend: str) -> dict:
    """Kernel table for an explicit backend (used by benchmarks and tests)."""
    if backend == "numpy":
        return _impls["numpy"]
    if backend == "numba":
        if "numba" not in _impls:
            _impls["numba"] = _build_numba_impls()
        return _impls["numba"]
    raise ValueError(f"unknown backend {backend!r}")


def active_backend() -> str:
    """Resolve the backend once, honoring NEWTONSTRATA_BACKEND."""
    global _resolved
    if _resolved is None:
        req = os.environ.get(_ENV_VAR, "auto").strip().lower() or "auto"
        if req not in ("auto", "numba", "numpy"):
            raise ValueError(f"{_ENV_VAR} must be auto, numba or numpy, got {req!r}")
        if req == "numpy":
            _resolved = "numpy"
        elif req == "numba":
            implementations("numba")  # raises ImportError if unavailable
            _resolved = "numba"
        else:
            try:
                implementations("numba")
                _resolved = "numba"
            except ImportError:
                _resolved = "numpy"
    return _resolved


def rref_mod_p(a: np.ndarray, p: int):
    """RREF of ``a`` over F_p.  Returns ``(reduced, pivot_columns)``."""
    a = np.ascontiguousarray(np.asarray(a, dtype=np.int64))
    return implementations(active_backend())["rref_mod_p"](a, np.int64(p))


def scan_intertwiners(F1, V1, F2, V2, q: int) -> np.ndarray:
    """All flattened matrices ``phi`` over ``Z/q`` with ``phi F1 = F2 phi``
    and ``phi V1 = V2 phi``, in odometer order.  Exhaustive: ``q**(h1*h2)``
    candidates are tested, so callers must keep sizes small.
    """
    args = [np.ascontiguousarray(np.asarray(x, dtype=np.int64)) for x in (F1, V1, F2, V2)]
    return implementations(active_backend())["scan_intertwiners"](*args, np.int64(q))


def nullspace_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (rows) of the right kernel of ``a`` over F_p."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64) % p
    red, piv = rref_mod_p(a, p)
    pivset = set(int(c) for c in piv)
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for idx, f in enumerate(free):
        basis[idx, f] = 1
        for k, c in enumerate(piv):
            basis[idx, int(c)] = (-red[k, f]) % p
    return basis
