"""Conics of PG(2, q^2), their pencils of quadrics in PG(4, q), and the
locus of a pencil at infinity.

A conic is a ternary :class:`QuadricForm`; a x^2 + b y^2 + c z^2 + d xy +
e xz + f yz has coefficient array [[a, d, e], [0, b, f], [0, 0, c]].
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..bruckbose import BruckBoseFrame
from ..gf_tower import INF, FieldTower, Level, roots
from ..kernels import get_backend, vmul, vsub
from ..projective import (Subspace, apply_matrix, encode_rows, frob_vec, mat_inv, normalize,
                          normalize_rows, points_array, rank, span, subspace)
from .quadrics import QuadricForm, QuadricPencil, quadrics_through


class DegenerateError(ValueError):
    """Input configuration is not in general position."""


class LocusError(RuntimeError):
    """A locus expected to be a union of lines is not."""


def conic_form(T: FieldTower, a, b, c, d, e, f) -> QuadricForm:
    return QuadricForm.from_array(T, [[a, d, e], [0, b, f], [0, 0, c]])


def standard_conic(T: FieldTower) -> QuadricForm:
    """y^2 = xz, the image of theta -> (1, theta, theta^2)."""
    return conic_form(T, 0, 1, 0, 0, T.neg(1), 0)


def half_discriminant(O: QuadricForm) -> int:
    """4abc + def - af^2 - be^2 - cd^2; nonzero iff the conic is non-degenerate."""
    T = O.tower
    (a, d, e), (_, b, f), (_, _, c) = O.coeffs
    m = T.mul
    four = T.from_int(4)
    pos = T.add(m(four, m(a, m(b, c))), m(d, m(e, f)))
    neg = T.add(T.add(m(a, m(f, f)), m(b, m(e, e))), m(c, m(d, d)))
    return T.sub(pos, neg)


def is_nondegenerate(O: QuadricForm) -> bool:
    return half_discriminant(O) != 0


def collinear(T: FieldTower, P, Q, R) -> bool:
    return rank(T, [P, Q, R]) < 3


def no_three_collinear(T: FieldTower, pts) -> bool:
    pts = [tuple(p) for p in pts]
    n = len(pts)
    return all(not collinear(T, pts[i], pts[j], pts[k])
               for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n))


def conic_through(T: FieldTower, pts) -> QuadricForm:
    """The unique non-degenerate conic through 5 points, no 3 collinear."""
    pts = [tuple(p) for p in pts]
    if len(pts) != 5 or not no_three_collinear(T, pts):
        raise DegenerateError("need 5 points with no 3 collinear")
    forms = quadrics_through(T, np.array(pts, dtype=np.int64))
    if len(forms) != 1 or not is_nondegenerate(forms[0]):
        raise DegenerateError("no unique non-degenerate conic")
    return normalize_form(forms[0])


def normalize_form(Q: QuadricForm) -> QuadricForm:
    """Scale so the first nonzero coefficient (row-major) is 1."""
    for row in Q.coeffs:
        for c in row:
            if c:
                return Q.scale(Q.tower.inv(c)).extend(Q.level)
    return Q


def conic_image(O: QuadricForm, M) -> QuadricForm:
    """The conic M(O): its form is f o M^-1."""
    return normalize_form(O.substitute(mat_inv(O.tower, M)))


# ---------------------------------------------------------------------------
# parametrization


@dataclass(frozen=True, eq=False)
class ConicParam:
    """theta -> Phi (1, theta, theta^2) onto the conic (theta = INF -> third column)."""

    form: QuadricForm
    Phi: tuple  # 3 x 3, columns for s^2, st, t^2

    @cached_property
    def Phi_inv(self):
        return mat_inv(self.form.tower, self.Phi)

    def point(self, theta: int) -> tuple:
        T = self.form.tower
        m = (0, 0, 1) if theta == INF else (1, theta, T.mul(theta, theta))
        return normalize(T, tuple(sum_codes(T, [T.mul(r[i], m[i]) for i in range(3)])
                                  for r in self.Phi))

    def theta(self, X) -> int:
        T = self.form.tower
        w = [0, 0, 0]
        for i, r in enumerate(self.Phi_inv):
            w[i] = sum_codes(T, [T.mul(a, b) for a, b in zip(r, X)])
        if w[0] == 0:
            return INF
        return T.div(w[1], w[0])


def sum_codes(T: FieldTower, xs) -> int:
    acc = 0
    for x in xs:
        if x:
            acc = T.add(acc, x)
    return acc


def parametrize(O: QuadricForm, P0=None, level: int | None = None) -> ConicParam:
    """Projection from a point P0 of the conic onto a line U V missing P0.

    D = sU + tV meets O again at -O(D) P0 + B(P0, D) D, a quadratic map in
    (s, t).  When no P0 is given the first point of O at ``level`` is used.
    """
    T = O.tower
    if P0 is None:
        pts = O.points(O.level if level is None else level)
        if not len(pts):
            raise DegenerateError("conic has no points at this level")
        P0 = tuple(pts[0].tolist())
    k = next(i for i, c in enumerate(P0) if c)
    U, V = [tuple(1 if j == i else 0 for j in range(3)) for i in range(3) if i != k]
    fU, fV, bUV = O(U), O(V), O.bilinear(U, V)
    bU, bV = O.bilinear(P0, U), O.bilinear(P0, V)
    neg = T.neg
    cols = []
    for fa, lin in (
        (fU, [(bU, U)]),
        (bUV, [(bU, V), (bV, U)]),
        (fV, [(bV, V)]),
    ):
        col = [T.mul(neg(fa), p) for p in P0]
        for c, W in lin:
            col = [T.add(x, T.mul(c, w)) for x, w in zip(col, W)]
        cols.append(col)
    Phi = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    if rank(T, Phi) < 3:
        raise DegenerateError("conic is degenerate")
    return ConicParam(O, Phi)


# ---------------------------------------------------------------------------
# conics and l_inf


def linf_meet(O: QuadricForm, level: int = Level.STAR) -> list[int]:
    """Dictionary values alpha of the points (alpha, 1, 0) in O ∩ l_inf at a level,
    with multiplicity.  alpha = INF stands for (1, 0, 0)."""
    (a, d, _), (_, b, _), _ = O.coeffs
    if a == 0 and b == 0 and d == 0:
        raise DegenerateError("l_inf is a component of the conic")
    return roots(O.tower, [b, d, a], level, projective=True)


def infinity_type(O: QuadricForm) -> str:
    r = linf_meet(O, Level.STAR)
    if not r:
        return "exterior"
    return "tangent" if len(set(r)) == 1 else "secant"


# ---------------------------------------------------------------------------
# the pencil of quadrics in PG(4,q)


def conic_to_pencil(O: QuadricForm, frame: BruckBoseFrame) -> QuadricPencil:
    """Substitute x = x0 + x1 tau, y = y0 + y1 tau and split over {1, tau}."""
    if not is_nondegenerate(O):
        raise DegenerateError("conic is degenerate")
    T = frame.tower
    M = ((1, T.tau, 0, 0, 0), (0, 0, 1, T.tau, 0), (0, 0, 0, 0, 1))
    q_inf, q_0 = O.substitute(M).split()
    return QuadricPencil(q_inf, q_0)


def pencil_member_on_g(pencil: QuadricPencil, t: int, frame: BruckBoseFrame,
                       level: int = Level.STAR) -> list[int]:
    """Dictionary values alpha of the points of g (extended to ``level``) on Q_t.

    Q_t(alpha A0 + A1) = alpha^2 Q(A0) + alpha B(A0, A1) + Q(A1).
    Each distinct alpha is reported once.
    """
    Q = pencil.member(t)
    coeffs = [Q(frame.A1), Q.bilinear(frame.A0, frame.A1), Q(frame.A0)]
    if not any(coeffs):
        raise LocusError("the transversal lies on a pencil member")
    return sorted(set(roots(frame.tower, coeffs, level, projective=True)))


def _complete_basis(w) -> tuple:
    """4 x 4 matrix whose last column is w and the others standard vectors."""
    k = next(i for i, c in enumerate(w) if c)
    cols = [tuple(1 if j == i else 0 for j in range(4)) for i in range(4) if i != k] + [tuple(w)]
    return tuple(tuple(col[i] for col in cols) for i in range(4))


def pair_zeros_pg3(T: FieldTower, A: QuadricForm, B: QuadricForm, F: int) -> np.ndarray:
    """Common zeros of two quaternary forms over F_q in PG(3, F)."""
    base = points_array(3, T.q)
    vals = A.eval_many(base)
    first, second = A, B
    if not np.any(vals):
        vals = B.eval_many(base)
        first, second = B, A
        if not np.any(vals):
            raise LocusError("both forms vanish on PG(3,q)")
    w = tuple(base[np.flatnonzero(vals)[0]].tolist())
    C = _complete_basis(w)
    A2, B2 = first.substitute(C), second.substitute(C)
    kern = get_backend()
    ys = kern.pair_scan(T.tables(), A2.array(), B2.array(), F)
    if not len(ys):
        return ys
    X = apply_matrix(T, C, ys)
    X = normalize_rows(T, X)
    return X[np.lexsort(X.T[::-1])]


def locus_at_infinity(pencil: QuadricPencil, level: int, frame: BruckBoseFrame):
    """The base locus of the pencil inside Sigma_inf at a level, as lines.

    Returns (points, lines): points in PG(4) coordinates and the set of
    lines (Subspaces) whose union is exactly that point set.
    """
    T = frame.tower
    idx = (0, 1, 2, 3)
    A, B = pencil.q_inf.restrict(idx), pencil.q_0.restrict(idx)
    F = T.size(level)
    pts3 = pair_zeros_pg3(T, A, B, F)
    lines = decompose_into_lines(T, pts3, F, Level(level))
    pts = np.concatenate([pts3, np.zeros((len(pts3), 1), dtype=np.int64)], axis=1)
    lines5 = frozenset(Subspace(T, 4, l.level, tuple(r + (0,) for r in l.basis)) for l in lines)
    return pts, lines5


def line_points(T: FieldTower, X, D, F: int) -> np.ndarray:
    """Points of the line through X and D (normalized rows), F + 1 of them."""
    X = np.asarray(X, dtype=np.int64)
    D = np.asarray(D, dtype=np.int64)
    ts = np.arange(F, dtype=np.int64)
    ft = T.tables()
    from ..kernels import vadd
    rows = vadd(ft, X[None, :], vmul(ft, ts[:, None], D[None, :]))
    return normalize_rows(T, np.concatenate([rows, D[None, :]]))


def decompose_into_lines(T: FieldTower, pts: np.ndarray, F: int, level: Level):
    """Write a point set of PG(n, F) as a union of full lines, or raise."""
    pts = np.asarray(pts, dtype=np.int64)
    if not len(pts):
        return frozenset()
    keys = encode_rows(pts, F)
    covered = np.zeros(len(pts), dtype=bool)
    ft = T.tables()
    lines = set()
    while not covered.all():
        i = int(np.flatnonzero(~covered)[0])
        X = pts[i]
        k = int(np.flatnonzero(X)[0])
        others = np.delete(pts, i, axis=0)
        D = vsub(ft, others, vmul(ft, others[:, k:k + 1], X[None, :]))
        D = normalize_rows(T, D)
        dk, counts = np.unique(encode_rows(D, F), return_counts=True)
        full = dk[counts == F]
        if not len(full):
            raise LocusError(f"point {tuple(X.tolist())} lies on no line of the set")
        first = {int(k_): j for j, k_ in reversed(list(enumerate(encode_rows(D, F).tolist())))}
        for key in full.tolist():
            d = D[first[key]]
            lp = line_points(T, X, d, F)
            hit = np.isin(keys, encode_rows(lp, F))
            if hit.sum() != F + 1:
                raise LocusError("line not contained in the set")
            covered |= hit
            lines.add(subspace(T, [tuple(X.tolist()), tuple(d.tolist())], level))
    return frozenset(lines)


# ---------------------------------------------------------------------------
# the lines the classification predicts


def predicted_locus(O: QuadricForm, level: int, frame: BruckBoseFrame) -> frozenset:
    """Lines of [O] ∩ Sigma_inf predicted by the conic's type, at a level."""
    T = frame.tower
    r = linf_meet(O, Level.STAR)
    lines = set()
    if r:
        for d in set(r):
            lines.add(frame.spread_line(d).extend(level))
        if len(set(r)) == 2 and level >= Level.STAR:
            dP, dQ = sorted(set(r))
            P, Q = frame.g_point(dP), frame.g_point(dQ)
            lines.add(span([P, frob_vec(T, Q)], T).extend(level))
            lines.add(span([frob_vec(T, P), Q], T).extend(level))
        return frozenset(lines)
    if level < Level.FOURSTAR:
        return frozenset()
    alphas = linf_meet(O, Level.FOURSTAR)
    P = frame.g_point(alphas[0])
    conj = [frob_vec(T, P, k) for k in range(4)]
    for k in range(4):
        lines.add(span([conj[k], conj[(k + 1) % 4]], T))
    return frozenset(lines)


# ---------------------------------------------------------------------------
# random conics


def random_conic(T: FieldTower, rng, kind: str | None = None, max_tries: int = 10_000) -> QuadricForm:
    """A random non-degenerate conic of PG(2,q^2), optionally of a given l_inf type."""
    F = T.size(Level.STAR)
    std = standard_conic(T)
    for _ in range(max_tries):
        M = tuple(tuple(int(x) for x in row) for row in rng.integers(0, F, size=(3, 3)))
        if rank(T, M) < 3:
            continue
        O = conic_image(std, M)
        if kind is None or infinity_type(O) == kind:
            return O
    raise RuntimeError("could not draw a conic of the requested type")
