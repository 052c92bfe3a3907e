# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.  Same API and results as ``_pykernels``.

Arithmetic runs on discrete logarithms: ``Z = N`` stands for zero,
multiplication adds logs and addition goes through the Zech table.
"""
import numpy as np
cimport numpy as cnp

ctypedef long long i64

NAME = "cython"


cdef struct Tab:
    const i64* exp
    const i64* log
    const i64* zech
    i64 N
    i64 half


cdef inline i64 lmul(const Tab* t, i64 a, i64 b) nogil:
    if a == t.N or b == t.N:
        return t.N
    a = a + b
    if a >= t.N:
        a -= t.N
    return a


cdef inline i64 ladd(const Tab* t, i64 a, i64 b) nogil:
    cdef i64 d, z
    if a == t.N:
        return b
    if b == t.N:
        return a
    d = b - a
    if d < 0:
        d += t.N
    z = t.zech[d]
    if z == t.N:
        return t.N
    z += a
    if z >= t.N:
        z -= t.N
    return z


cdef inline i64 lneg(const Tab* t, i64 a) nogil:
    if a == t.N:
        return a
    a += t.half
    if a >= t.N:
        a -= t.N
    return a


cdef inline i64 lsub(const Tab* t, i64 a, i64 b) nogil:
    return ladd(t, a, lneg(t, b))


cdef inline i64 linv(const Tab* t, i64 a) nogil:
    if a == 0:
        return 0
    return t.N - a


cdef Tab _tab(ft, i64[::1] exp, i64[::1] log, i64[::1] zech):
    cdef Tab t
    t.exp = &exp[0]
    t.log = &log[0]
    t.zech = &zech[0]
    t.N = ft.N
    t.half = ft.half
    return t


def _arr(x):
    return np.ascontiguousarray(x, dtype=np.int64)


def vmul(ft, a, b):
    from ._pykernels import vmul as f
    return f(ft, a, b)


def vadd(ft, a, b):
    from ._pykernels import vadd as f
    return f(ft, a, b)


def poly_eval(ft, coeffs, xs):
    """Horner evaluation of one polynomial (low degree first) at many points."""
    cdef i64[::1] exp = _arr(ft.exp), log = _arr(ft.log), zech = _arr(ft.zech)
    cdef Tab t = _tab(ft, exp, log, zech)
    cdef i64[::1] c = _arr(coeffs)
    cdef i64[::1] x = _arr(xs)
    cdef Py_ssize_t n = x.shape[0], m = c.shape[0], i, k
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    cdef i64 lx, r
    cdef i64[::1] lc = np.ascontiguousarray(np.asarray(log)[np.asarray(c)]) if m else _arr([0])
    with nogil:
        for i in range(n):
            lx = t.log[x[i]]
            r = t.N
            for k in range(m - 1, -1, -1):
                r = ladd(&t, lmul(&t, r, lx), lc[k])
            o[i] = 0 if r == t.N else t.exp[r]
    return out


def lin_eval(ft, coeffs, pts):
    cdef i64[::1] exp = _arr(ft.exp), log = _arr(ft.log), zech = _arr(ft.zech)
    cdef Tab t = _tab(ft, exp, log, zech)
    cdef i64[:, ::1] P = _arr(pts)
    cdef i64[::1] lc = np.ascontiguousarray(np.asarray(log)[_arr(coeffs)])
    cdef Py_ssize_t n = P.shape[0], m = lc.shape[0], i, j
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    cdef i64 r
    with nogil:
        for i in range(n):
            r = t.N
            for j in range(m):
                r = ladd(&t, r, lmul(&t, lc[j], t.log[P[i, j]]))
            o[i] = 0 if r == t.N else t.exp[r]
    return out


def quad_eval(ft, Q, pts):
    """Evaluate the upper-triangular quadratic form Q at each row of pts."""
    cdef i64[::1] exp = _arr(ft.exp), log = _arr(ft.log), zech = _arr(ft.zech)
    cdef Tab t = _tab(ft, exp, log, zech)
    Qa = _arr(Q)
    cdef Py_ssize_t m = Qa.shape[0]
    cdef i64[:, ::1] LQ = np.ascontiguousarray(np.asarray(log)[Qa])
    cdef i64[:, ::1] P = _arr(pts)
    cdef Py_ssize_t n = P.shape[0], i, j, k
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    cdef i64 r, acc
    cdef i64 lx[16]
    with nogil:
        for k in range(n):
            for i in range(m):
                lx[i] = t.log[P[k, i]]
            r = t.N
            for i in range(m):
                if lx[i] == t.N:
                    continue
                acc = t.N
                for j in range(i, m):
                    acc = ladd(&t, acc, lmul(&t, LQ[i, j], lx[j]))
                r = ladd(&t, r, lmul(&t, acc, lx[i]))
            o[k] = 0 if r == t.N else t.exp[r]
    return out


cdef inline void pmul(const Tab* t, const i64* a, int da, const i64* b, int db, i64* out) nogil:
    """out = a * b for polynomials in log form (low degree first)."""
    cdef int i, j
    for i in range(da + db + 1):
        out[i] = t.N
    for i in range(da + 1):
        for j in range(db + 1):
            out[i + j] = ladd(t, out[i + j], lmul(t, a[i], b[j]))


cdef inline i64 peval(const Tab* t, const i64* c, int d, i64 lz) nogil:
    cdef i64 r = c[d]
    cdef int k
    for k in range(d - 1, -1, -1):
        r = ladd(t, lmul(t, r, lz), c[k])
    return r


def pair_scan(ft, Q1, Q2, F):
    """Common zeros in PG(3, F) of two quaternary quadratic forms.

    Same contract as ``_pykernels.pair_scan``.  For each direction row
    (x, y) the resultant is a polynomial of degree at most 4 in z, built
    once and evaluated by Horner.
    """
    cdef i64[::1] exp = _arr(ft.exp), log = _arr(ft.log), zech = _arr(ft.zech)
    cdef Tab t = _tab(ft, exp, log, zech)
    A = _arr(Q1)
    B = _arr(Q2)
    if A[3, 3] == 0:
        raise ValueError("pair_scan needs Q1(e3) != 0")
    cdef i64[:, ::1] LA = np.ascontiguousarray(np.asarray(log)[A])
    cdef i64[:, ::1] LB = np.ascontiguousarray(np.asarray(log)[B])
    cdef i64 Fi = F, Z = t.N
    lz_np = np.asarray(log)[np.arange(F)]
    cdef i64[::1] lz = np.ascontiguousarray(lz_np)
    cdef i64 x, y, z, lx, ly, lx2, ly2
    cdef i64 a0[3]
    cdef i64 a1[2]
    cdef i64 b0[3]
    cdef i64 b1[2]
    cdef i64 c0[3]
    cdef i64 e0[4]
    cdef i64 e1[2]
    cdef i64 res[5]
    cdef i64 tmp[5]
    cdef i64 tmp2[5]
    cdef i64 a2, b2, c0z, e1z, tl
    cdef int k
    cdef list rows = []
    cdef list found = []
    cdef list prop = []
    cdef Py_ssize_t r, nrows
    a2 = LA[3, 3]
    b2 = LB[3, 3]
    for y in range(Fi):
        rows.append((1, y))
    rows.append((0, 1))
    nrows = len(rows)
    for r in range(nrows):
        x, y = rows[r]
        lx = t.log[x]
        ly = t.log[y]
        with nogil:
            lx2 = Z if lx == Z else (2 * lx) % Z
            ly2 = Z if ly == Z else (2 * ly) % Z
            a0[0] = ladd(&t, ladd(&t, lmul(&t, LA[0, 0], lx2), lmul(&t, LA[1, 1], ly2)),
                         lmul(&t, LA[0, 1], lmul(&t, lx, ly)))
            a0[1] = ladd(&t, lmul(&t, LA[0, 2], lx), lmul(&t, LA[1, 2], ly))
            a0[2] = LA[2, 2]
            a1[0] = ladd(&t, lmul(&t, LA[0, 3], lx), lmul(&t, LA[1, 3], ly))
            a1[1] = LA[2, 3]
            b0[0] = ladd(&t, ladd(&t, lmul(&t, LB[0, 0], lx2), lmul(&t, LB[1, 1], ly2)),
                         lmul(&t, LB[0, 1], lmul(&t, lx, ly)))
            b0[1] = ladd(&t, lmul(&t, LB[0, 2], lx), lmul(&t, LB[1, 2], ly))
            b0[2] = LB[2, 2]
            b1[0] = ladd(&t, lmul(&t, LB[0, 3], lx), lmul(&t, LB[1, 3], ly))
            b1[1] = LB[2, 3]
            # c0 = a0 b2 - a2 b0, e1 = a1 b2 - a2 b1, e0 = a0 b1 - a1 b0
            for k in range(3):
                c0[k] = lsub(&t, lmul(&t, a0[k], b2), lmul(&t, a2, b0[k]))
            for k in range(2):
                e1[k] = lsub(&t, lmul(&t, a1[k], b2), lmul(&t, a2, b1[k]))
            pmul(&t, a0, 2, b1, 1, e0)
            pmul(&t, a1, 1, b0, 2, tmp)
            for k in range(4):
                e0[k] = lsub(&t, e0[k], tmp[k])
            # res = c0^2 - e0 e1
            pmul(&t, c0, 2, c0, 2, res)
            pmul(&t, e0, 3, e1, 1, tmp2)
            for k in range(5):
                res[k] = lsub(&t, res[k], tmp2[k])
            for z in range(Fi):
                if peval(&t, res, 4, lz[z]) != Z:
                    continue
                e1z = peval(&t, e1, 1, lz[z])
                if e1z != Z:
                    # b2*a - a2*b = c0 + e1 t
                    c0z = peval(&t, c0, 2, lz[z])
                    tl = lneg(&t, lmul(&t, c0z, linv(&t, e1z)))
                    with gil:
                        found.append((x, y, z, 0 if tl == Z else t.exp[tl]))
                else:
                    with gil:
                        prop.append((x, y, z))
    prop.append((0, 0, 1))
    found.extend(_resolve(ft, A, B, prop, Fi))
    if not found:
        return np.zeros((0, 4), dtype=np.int64)
    return np.unique(np.array(found, dtype=np.int64), axis=0)


def _resolve(ft, A, B, dirs, F):
    """The common zeros on the lines through (x,y,z,0) and e3, all at once."""
    from ._pykernels import _scan_dirs
    d = np.array([(x, y, z, 0) for x, y, z in dirs], dtype=np.int64)
    return _scan_dirs(ft, A, B, d, F)
