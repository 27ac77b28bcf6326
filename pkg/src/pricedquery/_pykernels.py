"""Pure-Python (numpy) kernels; the fallback for ``_ckernels``.

Subcube layout shared with the compiled kernels: a subcube of ``{0,1}^n`` is
indexed by ``sum_i d_i * 3**i`` where digit ``d_i`` is 0 or 1 for a fixed
coordinate and 2 for a free one.
"""

import numpy as np


def flip_counts(table01, d):
    """For each coordinate ``i < d``: number of ``x`` with ``t[x] != t[x ^ (1 << i)]``."""
    t = np.asarray(table01, dtype=np.uint8)
    out = np.empty(d, dtype=np.int64)
    for i in range(d):
        pairs = t.reshape(-1, 2, 1 << i)
        out[i] = 2 * int(np.count_nonzero(pairs[:, 0, :] != pairs[:, 1, :]))
    return out


def subcube_ones(table01, n):
    """Number of +1 entries in every one of the ``3**n`` subcubes."""
    cube = np.asarray(table01, dtype=np.int64).reshape((2,) * n)
    # axis a holds coordinate n - 1 - a, so appending a "free" slot per axis
    # yields the base-3 layout directly under C ordering.
    for a in range(n):
        cube = np.concatenate([cube, cube.sum(axis=a, keepdims=True)], axis=a)
    return cube.reshape(-1)


def opt_table(ones, n, costs, kmax, worst):
    """Optimal cost of every (subcube, error allowance) pair.

    Returns an int64 array of shape ``(3**n, kmax + 1)``. Expected-cost
    entries are scaled by ``2**free`` so they stay integral; worst-case
    entries are plain path costs.
    """
    ones = np.asarray(ones, dtype=np.int64).reshape((3,) * n)
    K = kmax + 1
    V = np.zeros((3,) * n + (K,), dtype=np.int64)
    ks = np.arange(K)

    def axis_of(i):
        return n - 1 - i

    for mask in range(1, 1 << n):
        free = [i for i in range(n) if mask >> i & 1]
        d = len(free)
        base = [slice(0, 2)] * n
        for i in free:
            base[axis_of(i)] = 2
        sel = tuple(base)
        m = np.minimum(ones[sel], (1 << d) - ones[sel])
        best = None
        for i in free:
            lo = list(base)
            hi = list(base)
            lo[axis_of(i)] = 0
            hi[axis_of(i)] = 1
            V0 = V[tuple(lo)]
            V1 = V[tuple(hi)]
            if worst:
                cand = np.maximum(V0[..., :1], V1)
                for k0 in range(1, K):
                    np.minimum(cand[..., k0:], np.maximum(V0[..., k0:k0 + 1], V1[..., :K - k0]),
                               out=cand[..., k0:])
                cand += costs[i]
            else:
                cand = V0[..., :1] + V1
                for k0 in range(1, K):
                    np.minimum(cand[..., k0:], V0[..., k0:k0 + 1] + V1[..., :K - k0],
                               out=cand[..., k0:])
                cand += costs[i] << d
            best = cand if best is None else np.minimum(best, cand)
        best[m[..., None] <= ks] = 0
        V[sel] = best
    return V.reshape(3 ** n, K)
