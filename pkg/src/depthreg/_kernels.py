"""Compiled inner loops for bivariate halfspace depth and the spread profile."""
import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# angular events closer than this are treated as simultaneous
ANGLE_TOL = 1e-12
# depth values closer than this belong to one tie class
DEPTH_TIE_TOL = 1e-12
MASS_TOL = 1e-12


@njit(cache=True)
def _sort_paired(key, val, k):
    # insertion sort: local samples are small
    for a in range(1, k):
        ka = key[a]
        kv = val[a]
        b = a - 1
        while b >= 0 and key[b] > ka:
            key[b + 1] = key[b]
            val[b + 1] = val[b]
            b -= 1
        key[b + 1] = ka
        val[b + 1] = kv


@njit(cache=True)
def _halfspace2d(px, py, w, qx, qy, tol, theta, wt):
    m = px.shape[0]
    c = 0.0
    k = 0
    for j in range(m):
        dx = px[j] - qx
        dy = py[j] - qy
        if math.sqrt(dx * dx + dy * dy) <= tol:
            c += w[j]
        else:
            t = math.atan2(dy, dx)
            if t < 0.0:
                t += TWO_PI
            theta[k] = t
            wt[k] = w[j]
            k += 1
    if k == 0:
        return min(c, 1.0)
    if k > 48:
        order = np.argsort(theta[:k])
        st = theta[:k][order]
        sw = wt[:k][order]
        theta[:k] = st
        wt[:k] = sw
    else:
        _sort_paired(theta, wt, k)
    for j in range(k):
        theta[k + j] = theta[j] + TWO_PI
        wt[k + j] = wt[j]

    # The closed halfplane of least mass is the complement of the open
    # half-circle of directions with the most mass; the latter is found among
    # the half-open arcs [theta_i, theta_i + pi) starting at an atom angle.
    # Complement masses come from prefix sums, so an empty complement is an
    # exact zero.
    pre = np.empty(2 * k + 1)
    pre[0] = 0.0
    for j in range(2 * k):
        pre[j + 1] = pre[j] + wt[j]
    least = -1.0
    j = 0
    for i in range(k):
        if j < i:
            j = i
        while j < i + k and theta[j] < theta[i] + math.pi - ANGLE_TOL:
            j += 1
        if i == 0:
            start = theta[k - 1] - TWO_PI
        else:
            start = theta[i - 1]
        if theta[i] - start > ANGLE_TOL:
            comp = pre[i + k] - pre[j]
            if least < 0.0 or comp < least:
                least = comp
    if least < 0.0:
        # no angle gap exceeds the tolerance, so no arc start is usable
        least = pre[k]
    d = c + least
    if d < 0.0:
        d = 0.0
    if d > 1.0:
        d = 1.0
    return d


@njit(cache=True)
def halfspace2d(px, py, w, qx, qy, tol):
    """Weighted halfspace depth of (qx, qy) by an angular two-pointer scan.

    Atoms within ``tol`` of the query lie in every closed halfplane through
    it. The others contribute the mass left outside the open half-circle of
    directions (seen from the query) that holds the most atoms.
    """
    m = px.shape[0]
    return _halfspace2d(px, py, w, qx, qy, tol, np.empty(2 * m), np.empty(2 * m))


@njit(cache=True)
def halfspace2d_many(px, py, w, qx, qy, tol):
    m = px.shape[0]
    theta = np.empty(2 * m)
    wt = np.empty(2 * m)
    out = np.empty(qx.shape[0])
    for i in range(qx.shape[0]):
        out[i] = _halfspace2d(px, py, w, qx[i], qy[i], tol, theta, wt)
    return out


@njit(cache=True)
def alpha_index(depths, weights, r):
    """Threshold for the 100r% central region.

    Returns the position in ``np.argsort(-depths)`` of the smallest depth of
    the first tie class at which the cumulative mass reaches ``r``; tie
    classes chain depths that differ by at most DEPTH_TIE_TOL.
    """
    order = np.argsort(-depths)
    n = depths.shape[0]
    cum = 0.0
    i = 0
    while i < n:
        j = i
        cum += weights[order[j]]
        while j + 1 < n and depths[order[j]] - depths[order[j + 1]] <= DEPTH_TIE_TOL:
            j += 1
            cum += weights[order[j]]
        if cum >= r - MASS_TOL:
            return order, j
        i = j + 1
    return order, n - 1


@njit(cache=True)
def alpha_value(depths, weights, r):
    order, j = alpha_index(depths, weights, r)
    return depths[order[j]]


@njit(cache=True)
def max_pairwise_distance(points, mask):
    best = 0.0
    bi = -1
    bj = -1
    m = points.shape[0]
    p = points.shape[1]
    for i in range(m):
        if not mask[i]:
            continue
        if bi < 0:
            bi = i
            bj = i
        for j in range(i + 1, m):
            if not mask[j]:
                continue
            s = 0.0
            for c in range(p):
                d = points[i, c] - points[j, c]
                s += d * d
            if s > best:
                best = s
                bi = i
                bj = j
    return math.sqrt(best), bi, bj


@njit(cache=True)
def halfspace2d_delta_profile(ys, indptr, indices, weights, r, tol):
    """Diameter of the 100r% halfspace central region at every covariate point."""
    n = indptr.shape[0] - 1
    out = np.empty(n)
    for i in range(n):
        lo = indptr[i]
        hi = indptr[i + 1]
        m = hi - lo
        pts = np.empty((m, 2))
        for a in range(m):
            pts[a, 0] = ys[indices[lo + a], 0]
            pts[a, 1] = ys[indices[lo + a], 1]
        w = weights[lo:hi]
        px = pts[:, 0].copy()
        py = pts[:, 1].copy()
        depths = halfspace2d_many(px, py, w, px, py, tol)
        alpha = alpha_value(depths, w, r)
        mask = depths >= alpha
        out[i] = max_pairwise_distance(pts, mask)[0]
    return out
