"""Compiled inner loop of the trust process.

Each tick reads three uniforms ``(branch, index, honesty)`` from ``u`` in
that order; the pure-Python path in :mod:`trustnet.dynamics` consumes the
generator identically, so both produce the same trace for the same seed.
"""
import numba
import numpy as np

OK = 0
STUCK = 1


@numba.njit(cache=True, nogil=True)
def fenwick_build(tau):
    n = tau.shape[0]
    tree = np.zeros(n + 1, np.int64)
    for i in range(n):
        k = i + 1
        while k <= n:
            tree[k] += tau[i]
            k += k & -k
    return tree


@numba.njit(cache=True, nogil=True)
def _fenwick_add(tree, i, delta):
    n = tree.shape[0] - 1
    k = i + 1
    while k <= n:
        tree[k] += delta
        k += k & -k


@numba.njit(cache=True, nogil=True)
def _fenwick_find(tree, target):
    # smallest index i with prefix_sum(i) > target
    n = tree.shape[0] - 1
    step = 1
    while step * 2 <= n:
        step *= 2
    pos = 0
    while step > 0:
        if pos + step <= n and tree[pos + step] <= target:
            pos += step
            target -= tree[pos]
        step //= 2
    return pos


@numba.njit(cache=True, nogil=True)
def run_ticks(tau, tree, total, alpha, gamma_bot, gamma_table, u, stats):
    """Advance the process ``u.shape[0]`` ticks in place.

    ``stats`` is ``[replacements, resets]`` and is updated in place.
    Returns ``(status, total, ticks_done)``.
    """
    n = tau.shape[0]
    top = gamma_table.shape[0] - 1
    for t in range(u.shape[0]):
        if u[t, 0] < alpha or total == 0:
            if alpha == 0.0:
                return STUCK, total, t
            m = tau[0]
            for i in range(1, n):
                if tau[i] < m:
                    m = tau[i]
            count = 0
            for i in range(n):
                if tau[i] == m:
                    count += 1
            k = int(u[t, 1] * count)
            idx = 0
            for i in range(n):
                if tau[i] == m:
                    if k == 0:
                        idx = i
                        break
                    k -= 1
            new = 1 if u[t, 2] < gamma_bot else 0
            stats[0] += 1
        else:
            idx = _fenwick_find(tree, int(u[t, 1] * total))
            ell = tau[idx]
            g = gamma_table[ell if ell < top else top]
            new = ell + 1 if u[t, 2] < g else 0
        if new == 0:
            stats[1] += 1
        delta = new - tau[idx]
        tau[idx] = new
        total += delta
        _fenwick_add(tree, idx, delta)
    return OK, total, u.shape[0]


@numba.njit(cache=True, nogil=True)
def compensated_cumsum(x):
    """Running sums with Neumaier compensation; -inf terms propagate as in ``np.cumsum``."""
    out = np.empty(len(x))
    s = 0.0
    comp = 0.0
    for k in range(len(x)):
        v = x[k]
        if not np.isfinite(v) or not np.isfinite(s):
            s = s + v
            comp = 0.0
        else:
            t = s + v
            if abs(s) >= abs(v):
                comp += (s - t) + v
            else:
                comp += (v - t) + s
            s = t
        out[k] = s + comp
    return out
