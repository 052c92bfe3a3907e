"""Pure numpy kernels.  Reference backend and fallback for the compiled one.

All arrays hold int64 field codes.  Tables come from ``FieldTables``.
"""
from __future__ import annotations

import numpy as np

NAME = "numpy"


def vmul(ft, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    r = ft.exp[ft.log[a] + ft.log[b]]
    return np.where((a == 0) | (b == 0), 0, r)


def vadd(ft, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if ft.p == 2:
        return a ^ b
    la, lb = ft.log[a], ft.log[b]
    z = ft.zech[(lb - la) % ft.N]
    r = np.where(z == ft.N, 0, ft.exp[np.minimum(la + z, 2 * ft.N)])
    r = np.where(a == 0, b, r)
    return np.where(b == 0, a, r)


def vneg(ft, a):
    a = np.asarray(a, dtype=np.int64)
    if ft.p == 2:
        return a.copy()
    return np.where(a == 0, 0, ft.exp[ft.log[a] + ft.half])


def vsub(ft, a, b):
    return vadd(ft, a, vneg(ft, b))


def vinv(ft, a):
    a = np.asarray(a, dtype=np.int64)
    if np.any(a == 0):
        raise ZeroDivisionError("inverse of zero")
    return ft.exp[(ft.N - ft.log[a]) % ft.N]


def poly_eval(ft, coeffs, xs):
    """Horner evaluation of one polynomial (low degree first) at many points."""
    xs = np.asarray(xs, dtype=np.int64)
    r = np.zeros_like(xs)
    for c in np.asarray(coeffs, dtype=np.int64)[::-1]:
        r = vadd(ft, vmul(ft, r, xs), np.full_like(xs, c))
    return r


def lin_eval(ft, coeffs, pts):
    pts = np.asarray(pts, dtype=np.int64)
    r = np.zeros(pts.shape[0], dtype=np.int64)
    for i, c in enumerate(np.asarray(coeffs, dtype=np.int64)):
        if c:
            r = vadd(ft, r, vmul(ft, pts[:, i], c))
    return r


def quad_eval(ft, Q, pts):
    """Evaluate the upper-triangular quadratic form Q at each row of pts."""
    Q = np.asarray(Q, dtype=np.int64)
    pts = np.asarray(pts, dtype=np.int64)
    n = Q.shape[0]
    r = np.zeros(pts.shape[0], dtype=np.int64)
    for i in range(n):
        # x_i * (sum_{j>=i} Q_ij x_j)
        acc = np.zeros_like(r)
        for j in range(i, n):
            if Q[i, j]:
                acc = vadd(ft, acc, vmul(ft, pts[:, j], Q[i, j]))
        r = vadd(ft, r, vmul(ft, acc, pts[:, i]))
    return r


def _solve_quadratic(ft, a0, a1, a2, F):
    """Roots in F (codes < F) of a0 + a1 t + a2 t^2 with a2 != 0, as lists."""
    out = []
    for c0, c1, c2 in zip(a0.tolist(), a1.tolist(), a2.tolist()):
        out.append(ft.solve_quadratic(c0, c1, c2, F))
    return out


def pair_scan(ft, Q1, Q2, F):
    """Common zeros in PG(3, F) of two quaternary quadratic forms.

    Needs Q1[3,3] != 0 so that w = e3 lies off the first quadric.  Each
    point X != w lies on one line through w, which meets the plane x3 = 0
    in a direction d.  For each d the restrictions a(t), b(t) of the forms to
    d + t*w are quadratics with nonzero leading term a2, and the line holds
    a common point iff their resultant vanishes.  Returns an (k, 4) array of
    normalized points, sorted.
    """
    Q1 = np.asarray(Q1, dtype=np.int64)
    Q2 = np.asarray(Q2, dtype=np.int64)
    if Q1[3, 3] == 0:
        raise ValueError("pair_scan needs Q1(e3) != 0")
    zs = np.arange(F, dtype=np.int64)
    found = []

    rows = [(1, y) for y in range(F)] + [(0, 1)]
    chunk = max(1, 262144 // F)
    for start in range(0, len(rows), chunk):
        block = rows[start:start + chunk]
        xs = np.repeat(np.array([r[0] for r in block], dtype=np.int64), F)
        ys = np.repeat(np.array([r[1] for r in block], dtype=np.int64), F)
        zz = np.tile(zs, len(block))
        pts = np.stack([xs, ys, zz, np.zeros_like(xs)], axis=1)
        found.extend(_scan_dirs(ft, Q1, Q2, pts, F))
    pts = np.array([[0, 0, 1, 0]], dtype=np.int64)
    found.extend(_scan_dirs(ft, Q1, Q2, pts, F))
    if not found:
        return np.zeros((0, 4), dtype=np.int64)
    return np.unique(np.array(found, dtype=np.int64), axis=0)


def _scan_dirs(ft, Q1, Q2, d, F):
    a0 = quad_eval(ft, Q1[:3, :3], d[:, :3])
    a1 = lin_eval(ft, Q1[:3, 3], d[:, :3])
    a2 = np.full_like(a0, Q1[3, 3])
    b0 = quad_eval(ft, Q2[:3, :3], d[:, :3])
    b1 = lin_eval(ft, Q2[:3, 3], d[:, :3])
    b2 = np.full_like(a0, Q2[3, 3])
    c0 = vsub(ft, vmul(ft, a0, b2), vmul(ft, a2, b0))   # a0 b2 - a2 b0
    e0 = vsub(ft, vmul(ft, a0, b1), vmul(ft, a1, b0))   # a0 b1 - a1 b0
    e1 = vsub(ft, vmul(ft, a1, b2), vmul(ft, a2, b1))   # a1 b2 - a2 b1
    res = vsub(ft, vmul(ft, c0, c0), vmul(ft, e0, e1))
    hit = np.flatnonzero(res == 0)
    out = []
    if hit.size == 0:
        return out
    # elimination b2*a - a2*b = c0 + e1 t
    lin = e1[hit] != 0
    li = hit[lin]
    if li.size:
        t = vmul(ft, vneg(ft, c0[li]), vinv(ft, e1[li]))
        for row, tt in zip(d[li].tolist(), t.tolist()):
            out.append((row[0], row[1], row[2], tt))
    pi = hit[~lin]
    if pi.size:
        sols = _solve_quadratic(ft, a0[pi], a1[pi], a2[pi], F)
        for row, ts in zip(d[pi].tolist(), sols):
            for tt in ts:
                out.append((row[0], row[1], row[2], tt))
    return out
