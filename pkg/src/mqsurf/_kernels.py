"""Hot loops of the finite-field certification: evaluating a batch of forms
at every point of P^3(F_p), and ranks of 2 x n Jacobians mod p.

Two interchangeable backends: numba ``@njit`` loops and vectorized numpy.
``MQSURF_BACKEND=numpy`` forces the fallback; otherwise numba is used when
importable.  Both take and return int64 arrays.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def _requested_backend() -> str:
    want = os.environ.get("MQSURF_BACKEND", "").strip().lower()
    if want == "numpy" or not HAVE_NUMBA:
        return "numpy"
    return "numba"


BACKEND = _requested_backend()


def projective_points(p: int, n: int = 4) -> np.ndarray:
    """Canonical representatives of P^(n-1)(F_p), first nonzero coordinate 1.

    Ordered by position of the leading 1, then lexicographically.
    """
    blocks = []
    for lead in range(n):
        tail = n - lead - 1
        grid = np.indices((p,) * tail).reshape(tail, -1).T if tail else np.zeros((1, 0), np.int64)
        block = np.zeros((grid.shape[0], n), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        blocks.append(block)
    return np.concatenate(blocks)


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------


def _eval_forms_numpy(points, exps, coefs, owner, npolys, p):
    npts, nvars = points.shape
    maxdeg = int(exps.max()) if exps.size else 0
    pw = np.ones((maxdeg + 1, npts, nvars), dtype=np.int64)
    for k in range(1, maxdeg + 1):
        pw[k] = pw[k - 1] * points % p
    out = np.zeros((npts, npolys), dtype=np.int64)
    for t in range(exps.shape[0]):
        val = np.full(npts, coefs[t] % p, dtype=np.int64)
        for v in range(nvars):
            e = exps[t, v]
            if e:
                val = val * pw[e, :, v] % p
        out[:, owner[t]] = (out[:, owner[t]] + val) % p
    return out


def _rank_2xn_numpy(jac, p):
    a, b = jac[:, 0, :] % p, jac[:, 1, :] % p
    n = jac.shape[2]
    full = np.zeros(jac.shape[0], dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            full |= (a[:, i] * b[:, j] - a[:, j] * b[:, i]) % p != 0
    nonzero = (a != 0).any(axis=1) | (b != 0).any(axis=1)
    return np.where(full, 2, np.where(nonzero, 1, 0)).astype(np.int64)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _eval_forms_numba(points, exps, coefs, owner, npolys, p):
        npts, nvars = points.shape
        nterms = exps.shape[0]
        out = np.zeros((npts, npolys), dtype=np.int64)
        for q in range(npts):
            for t in range(nterms):
                val = coefs[t] % p
                for v in range(nvars):
                    x = points[q, v]
                    for _ in range(exps[t, v]):
                        val = val * x % p
                out[q, owner[t]] = (out[q, owner[t]] + val) % p
        return out

    @numba.njit(cache=True)
    def _rank_2xn_numba(jac, p):
        m, _, n = jac.shape
        ranks = np.zeros(m, dtype=np.int64)
        for q in range(m):
            r = 0
            for i in range(n):
                if jac[q, 0, i] % p != 0 or jac[q, 1, i] % p != 0:
                    r = 1
                    break
            if r:
                for i in range(n):
                    for j in range(i + 1, n):
                        d = (jac[q, 0, i] * jac[q, 1, j] - jac[q, 0, j] * jac[q, 1, i]) % p
                        if d != 0:
                            r = 2
                            break
                    if r == 2:
                        break
            ranks[q] = r
        return ranks


def eval_forms(points, exps, coefs, owner, npolys, p, backend: str | None = None):
    """Values mod p of ``npolys`` packed forms at each point.

    Term ``t`` has exponent row ``exps[t]``, coefficient ``coefs[t]`` and
    belongs to form ``owner[t]``.
    """
    args = (
        np.ascontiguousarray(points, dtype=np.int64),
        np.ascontiguousarray(exps, dtype=np.int64).reshape(-1, points.shape[1]),
        np.ascontiguousarray(coefs, dtype=np.int64),
        np.ascontiguousarray(owner, dtype=np.int64),
        int(npolys),
        int(p),
    )
    if (backend or BACKEND) == "numba":
        return _eval_forms_numba(*args)
    return _eval_forms_numpy(*args)


def rank_2xn(jac, p, backend: str | None = None):
    jac = np.ascontiguousarray(jac, dtype=np.int64)
    if (backend or BACKEND) == "numba":
        return _rank_2xn_numba(jac, int(p))
    return _rank_2xn_numpy(jac, int(p))
