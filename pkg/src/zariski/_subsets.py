"""Batched search over negative definite principal submatrices in int64.

Used by the subset oracle.  Subsets are grown one size at a time; each level
keeps the index tuples, the Bareiss state (so the next level costs O(k^2)
per candidate), determinants and adjugates.  Negative definite matrices
have nonzero leading minors, so no pivoting is ever needed.

Every entry that occurs is a minor of ``[S | I]`` or a product of two such
minors, bounded via Hadamard's inequality.  :func:`build_levels` returns
``None`` when that bound does not fit in int64; callers then fall back to
Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SAFE = 2 ** 62


@dataclass
class Level:
    idx: np.ndarray    # (N, k) curve indices, increasing along each row
    mask: np.ndarray   # (N,) bitmask of the subset
    det: np.ndarray    # (N,)
    adj: np.ndarray    # (N, k, k)
    bound: int         # bound on |det| and |adj| entries


def _hadamard(M: np.ndarray) -> float:
    norms = np.sqrt((M.astype(float) ** 2).sum(axis=1) + 1.0)
    return float(math.prod(max(1.0, x) for x in norms)) * 1.01


def batch_adjugate(S: np.ndarray) -> np.ndarray:
    """Adjugates of a stack of matrices with nonzero leading minors."""
    N, k, _ = S.shape
    A = np.concatenate([S, np.broadcast_to(np.eye(k, dtype=np.int64), (N, k, k))], axis=2)
    A = A.copy()
    prev = np.ones(N, dtype=np.int64)
    for p in range(k):
        piv = A[:, p, p].copy()
        row_p = A[:, p, :].copy()
        col_p = A[:, :, p].copy()
        A = (piv[:, None, None] * A - col_p[:, :, None] * row_p[:, None, :]) // prev[:, None, None]
        A[:, p, :] = row_p
        prev = piv
    return A[:, :, k:]


def build_levels(curve_matrix, max_size: int | None = None) -> list[Level] | None:
    M = np.array(curve_matrix, dtype=np.int64).reshape(len(curve_matrix), len(curve_matrix))
    n = M.shape[0]
    if n == 0:
        return []
    if n > 62:
        return None
    H = _hadamard(M)
    if H * H >= _SAFE:
        return None
    if max_size is None:
        max_size = n
    bound = int(H) + 1
    powers = np.array([1 << j for j in range(n)], dtype=np.int64)

    levels: list[Level] = []
    diag = np.diagonal(M)
    idx = np.nonzero(diag < 0)[0][:, None]
    B = diag[idx[:, 0]][:, None, None].copy()
    while len(idx) and idx.shape[1] <= max_size:
        k = idx.shape[1]
        det = B[:, k - 1, k - 1].copy()
        S = M[idx[:, :, None], idx[:, None, :]]
        levels.append(Level(idx, powers[idx].sum(axis=1), det, batch_adjugate(S), bound))
        if k == max_size:
            break
        # candidates: every parent extended by a larger index j
        parent, js = np.nonzero(np.arange(n)[None, :] > idx[:, -1][:, None])
        if not len(parent):
            break
        cidx = idx[parent]
        cB = B[parent]
        border = M[cidx, js[:, None]]
        v = np.empty((len(js), k + 1), dtype=np.int64)
        for i in range(k):
            x = border[:, i].copy()
            prev = np.ones(len(js), dtype=np.int64)
            for s in range(i):
                p = cB[:, s, s]
                x = (x * p - cB[:, s, i] * v[:, s]) // prev
                prev = p
            v[:, i] = x
        x = M[js, js].copy()
        prev = np.ones(len(js), dtype=np.int64)
        for s in range(k):
            p = cB[:, s, s]
            x = (x * p - v[:, s] * v[:, s]) // prev
            prev = p
        v[:, k] = x
        # a negative definite m x m determinant has sign (-1)^m
        keep = (x > 0) if (k + 1) % 2 == 0 else (x < 0)
        idx = np.concatenate([cidx[keep], js[keep][:, None]], axis=1)
        newB = np.zeros((int(keep.sum()), k + 1, k + 1), dtype=np.int64)
        newB[:, :k, :k] = cB[keep]
        newB[:, :, k] = v[keep]
        B = newB
    return levels


def accepted_subsets(levels, curve_matrix, b, DD, DA, A_curves, required):
    """Subsets passing the oracle's acceptance test, as ``(T, numerators, det)``.

    Returns ``None`` if the divisor's numbers are too large for int64.
    The empty subset is not included.
    """
    M = np.array(curve_matrix, dtype=np.int64).reshape(len(curve_matrix), len(curve_matrix))
    n = M.shape[0]
    maxb = max([abs(x) for x in b] + [abs(DD), abs(DA), 1])
    maxM = max(1, int(np.abs(M).max()) if n else 1, max([abs(x) for x in A_curves] + [1]))
    bv = np.array(b, dtype=np.int64)
    av = np.array(A_curves, dtype=np.int64)
    out = []
    for lv in levels:
        k = lv.idx.shape[1]
        num_bound = k * lv.bound * maxb
        if lv.bound * maxb + k * num_bound * max(maxM, maxb) >= _SAFE:
            return None
        sel = (lv.mask & required) == required
        if not sel.any():
            continue
        idx, det, adj = lv.idx[sel], lv.det[sel], lv.adj[sel]
        bT = bv[idx]
        num = np.einsum("nij,nj->ni", adj, bT)
        sgn = np.sign(det)
        ok = ((num * sgn[:, None]) >= 0).all(axis=1)
        if not ok.any():
            continue
        idx, det, num, sgn = idx[ok], det[ok], num[ok], sgn[ok]
        pc = det[:, None] * bv[None, :] - np.einsum("ni,nij->nj", num, M[idx])
        ok = ((pc * sgn[:, None]) >= 0).all(axis=1)
        pa = det * DA - (num * av[idx]).sum(axis=1)
        # P.P = P.D because P is orthogonal to the subset
        pp = det * DD - (num * bv[idx]).sum(axis=1)
        ok &= (pa * sgn >= 0) & (pp * sgn >= 0)
        for row in np.nonzero(ok)[0]:
            out.append((tuple(int(t) for t in idx[row]), [int(x) for x in num[row]], int(det[row])))
    return out
