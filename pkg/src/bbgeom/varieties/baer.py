"""Baer subplanes, Baer sublines, F_q-conics and l_inf-Baer pencils.

A Baer subplane is stored through a frame: an invertible 3 x 3 matrix M
over F_{q^2} with B = {M x : x in PG(2,q)}.  The subplane through a
quadrangle P1..P4 has M e_i ~ P_i and M (1,1,1) ~ P4.  A Baer subline of a
line is stored the same way with a 2-column matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from ..bruckbose import BruckBoseFrame
from ..gf_tower import INF, FieldTower, Level
from ..projective import (apply_matrix, encode_rows, frob_vec, mat_inv, mat_vec, normalize,
                          normalize_rows, nullspace, points_array, rank, rref, span)
from .conics import (DegenerateError, QuadricForm, collinear, conic_image, conic_through,
                     is_nondegenerate, no_three_collinear, parametrize, standard_conic)
from .quadrics import quadrics_through


def solve(T: FieldTower, cols, b) -> tuple:
    """The unique lambda with sum lambda_i cols[i] = b, or raise."""
    k = len(cols)
    rows = [tuple(c[i] for c in cols) + (T.neg(b[i]),) for i in range(len(b))]
    ns = nullspace(T, rows, k + 1)
    if len(ns) != 1 or ns[0][k] == 0:
        raise DegenerateError("no unique solution")
    v = ns[0]
    inv = T.inv(v[k])
    return tuple(T.mul(x, inv) for x in v[:k])


def frame_matrix(T: FieldTower, pts) -> tuple:
    """Columns lambda_i P_i (i < k) with sum lambda_i P_i = P_k, k = len(pts) - 1."""
    *base, unit = [tuple(p) for p in pts]
    lam = solve(T, base, unit)
    if any(l == 0 for l in lam):
        raise DegenerateError("points not in general position")
    cols = [tuple(T.mul(l, c) for c in P) for l, P in zip(lam, base)]
    return tuple(tuple(col[i] for col in cols) for i in range(len(unit)))


def in_subfield(T: FieldTower, v) -> bool:
    """After normalization, every coordinate lies in F_q."""
    return all(c < T.q for c in normalize(T, v))


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BaerSubplane:
    tower: FieldTower
    M: tuple  # 3 x 3 frame over F_{q^2}

    @cached_property
    def M_inv(self):
        return mat_inv(self.tower, self.M)

    @cached_property
    def points(self) -> np.ndarray:
        T = self.tower
        pts = normalize_rows(T, apply_matrix(T, self.M, points_array(2, T.q)))
        return pts[np.lexsort(pts.T[::-1])]

    @cached_property
    def point_keys(self) -> frozenset:
        return frozenset(encode_rows(self.points, self.tower.q ** 2).tolist())

    def frame_coords(self, X) -> tuple:
        return normalize(self.tower, mat_vec(self.tower, self.M_inv, X))

    def contains(self, X) -> bool:
        return all(c < self.tower.q for c in self.frame_coords(X))

    __contains__ = contains

    def conjugate(self, X) -> tuple:
        """Image under the Baer involution fixing B pointwise."""
        T = self.tower
        return normalize(T, mat_vec(T, self.M, frob_vec(T, mat_vec(T, self.M_inv, X))))

    @cached_property
    def linf_points(self) -> np.ndarray:
        p = self.points
        return p[p[:, 2] == 0]

    @property
    def affine_points(self) -> np.ndarray:
        p = self.points
        return p[p[:, 2] != 0]

    @property
    def infinity_type(self) -> str:
        n = len(self.linf_points)
        if n == 1:
            return "tangent"
        if n == self.tower.q + 1:
            return "secant"
        raise AssertionError("not a Baer subplane")

    @property
    def tangent_point(self) -> tuple:
        if self.infinity_type != "tangent":
            raise ValueError("subplane is secant")
        return tuple(self.linf_points[0].tolist())

    @cached_property
    def linf_subline(self) -> "BaerSubline":
        if self.infinity_type != "secant":
            raise ValueError("subplane is tangent")
        pts = [tuple(r) for r in self.linf_points[:3].tolist()]
        return baer_subline_through(self.tower, pts)

    def lines_through(self, X) -> list[np.ndarray]:
        """Point sets of the q+1 lines of B through a point X of B."""
        T = self.tower
        u = self.frame_coords(X)
        pts = points_array(2, T.q)
        out, seen = [], set()
        for v in pts.tolist():
            v = tuple(v)
            if v == u or v in seen:
                continue
            line = span([u, v], T)
            sub = line.points(Level.BASE)
            seen.update(map(tuple, sub.tolist()))
            img = normalize_rows(T, apply_matrix(T, self.M, sub))
            out.append(img[np.lexsort(img.T[::-1])])
        return out

    def line_profile_ok(self) -> bool:
        """Every line of PG(2,q^2) meets B in 1 or q+1 points."""
        T = self.tower
        q = T.q
        lines = points_array(2, q * q)  # dual coordinates
        pts = self.points
        from ..kernels import get_backend
        kern = get_backend()
        ft = T.tables()
        counts = np.array([np.count_nonzero(kern.lin_eval(ft, l, pts) == 0) for l in lines])
        return bool(np.all((counts == 1) | (counts == q + 1)))


def baer_subplane_through(T: FieldTower, quad) -> BaerSubplane:
    quad = [tuple(p) for p in quad]
    if len(quad) != 4 or not no_three_collinear(T, quad):
        raise DegenerateError("need a quadrangle")
    return BaerSubplane(T, frame_matrix(T, quad))


def baer_closure(T: FieldTower, quad) -> frozenset:
    """Closure of a quadrangle under joining points and meeting lines.

    Independent construction used as an oracle for the frame method.
    """
    from ..projective import meet, subspace
    pts = {normalize(T, p) for p in quad}
    lines: set = set()
    while True:
        new_lines = {span([P, Q], T) for P, Q in combinations(sorted(pts), 2)} - lines
        lines |= new_lines
        new_pts = set()
        ls = sorted(lines, key=lambda s: s.basis)
        for a, b in combinations(ls, 2):
            m = meet(a, b)
            if m.proj_dim == 0:
                new_pts.add(normalize(T, m.basis[0]))
        new_pts -= pts
        if not new_pts:
            return frozenset(pts)
        pts |= new_pts


@dataclass(frozen=True, eq=False)
class BaerSubline:
    """{M (s, t) : (s, t) in PG(1,q)} for an n x 2 matrix M."""

    tower: FieldTower
    M: tuple

    @cached_property
    def points(self) -> np.ndarray:
        T = self.tower
        pts = normalize_rows(T, apply_matrix(T, self.M, points_array(1, T.q)))
        return pts[np.lexsort(pts.T[::-1])]

    def param(self, X) -> tuple:
        """(s, t) with M (s, t) ~ X, normalized, or None when X is off the line."""
        T = self.tower
        cols = [tuple(r[0] for r in self.M), tuple(r[1] for r in self.M)]
        try:
            lam = solve(T, cols, X)
        except DegenerateError:
            return None
        return normalize(T, lam)

    def contains(self, X) -> bool:
        st = self.param(X)
        return st is not None and all(c < self.tower.q for c in st)

    __contains__ = contains

    def conjugate(self, X) -> tuple:
        """The involution of the ambient line fixing the subline pointwise."""
        T = self.tower
        st = self.param(X)
        if st is None:
            raise ValueError("point not on the line of the subline")
        s, t = frob_vec(T, st)
        return normalize(T, tuple(T.add(T.mul(r[0], s), T.mul(r[1], t)) for r in self.M))

    @property
    def key(self) -> frozenset:
        return frozenset(map(tuple, self.points.tolist()))


def baer_subline_through(T: FieldTower, pts) -> BaerSubline:
    pts = [tuple(p) for p in pts]
    if len(pts) != 3 or rank(T, pts) != 2:
        raise DegenerateError("need 3 distinct collinear points")
    return BaerSubline(T, frame_matrix(T, pts))


# ---------------------------------------------------------------------------
# Moebius maps on parameters (codes or INF)


def mobius_through(T: FieldTower, a, b, c) -> tuple:
    """2 x 2 matrix sending 0 -> a, INF -> b, 1 -> c on PG(1) parameters."""
    va, vb, vc = (vec(x) for x in (a, b, c))
    lam = solve(T, [va, vb], vc)
    if any(l == 0 for l in lam):
        raise DegenerateError("parameters not distinct")
    return ((T.mul(lam[0], va[0]), T.mul(lam[1], vb[0])),
            (T.mul(lam[0], va[1]), T.mul(lam[1], vb[1])))


def vec(theta) -> tuple:
    return (0, 1) if theta == INF else (1, theta)


def unvec(T: FieldTower, v) -> int:
    return INF if v[0] == 0 else T.div(v[1], v[0])


def mobius_apply(T: FieldTower, m, theta) -> int:
    return unvec(T, mat_vec(T, m, vec(theta)))


def subline_params(T: FieldTower, a, b, c) -> frozenset:
    """Parameters of the Baer subline of PG(1,q^2) through three parameters."""
    m = mobius_through(T, a, b, c)
    return frozenset(mobius_apply(T, m, x) for x in [INF] + list(range(T.q)))


def all_sublines(T: FieldTower) -> list[frozenset]:
    """Every Baer subline of PG(1,q^2), as parameter sets, in a fixed order.

    Each subline through the parameter INF and 0 is found once per third point;
    the rest are reached by sweeping all triples containing the first point.
    """
    params = [INF] + list(range(T.q ** 2))
    seen, out = set(), []
    for i, a in enumerate(params):
        for j in range(i + 1, len(params)):
            for k in range(j + 1, len(params)):
                s = subline_params(T, a, params[j], params[k])
                if s not in seen:
                    seen.add(s)
                    out.append(s)
        if len(out) == T.q * (T.q ** 2 + 1):
            break
    return out


# ---------------------------------------------------------------------------
# F_q-conics


@dataclass(frozen=True, eq=False)
class FqConic:
    """C = N {(1, theta, theta^2) : theta in F_q or INF}; host B = N PG(2,q).

    ``frame_form`` is a conic over F_q in frame coordinates of the host.
    """

    tower: FieldTower
    N: tuple
    frame_form: QuadricForm

    @cached_property
    def host(self) -> BaerSubplane:
        return BaerSubplane(self.tower, self.N)

    @cached_property
    def points(self) -> np.ndarray:
        T = self.tower
        base = self.frame_form.points(Level.BASE)
        pts = normalize_rows(T, apply_matrix(T, self.N, base))
        return pts[np.lexsort(pts.T[::-1])]

    @cached_property
    def cplus(self) -> QuadricForm:
        return conic_image(self.frame_form, self.N).extend(Level.STAR)

    @cached_property
    def param_matrix(self) -> tuple:
        """3 x 3 matrix K over F_{q^2} with C = K (1, theta, theta^2)."""
        T = self.tower
        P = parametrize(self.frame_form, level=Level.BASE)
        K = tuple(tuple(sum_row(T, self.N[i], [P.Phi[k][j] for k in range(3)])
                        for j in range(3)) for i in range(3))
        return K

    @property
    def key(self) -> frozenset:
        return frozenset(map(tuple, self.points.tolist()))


def sum_row(T, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = T.add(acc, T.mul(x, y))
    return acc


def fq_conic_in_subplane(B: BaerSubplane, pts) -> FqConic:
    """The non-degenerate F_q-conic of B through the given points of B.

    Five points fix the conic; at q = 3 four points in general position lie
    on exactly one non-degenerate conic of PG(2,3).
    """
    T = B.tower
    fc = [B.frame_coords(X) for X in pts]
    if any(c >= T.q for P in fc for c in P):
        raise ValueError("points not in the subplane")
    fc = sorted(set(fc))
    if not no_three_collinear(T, fc):
        raise DegenerateError("three collinear points")
    if len(fc) >= 5:
        form = conic_through(T, fc[:5])
    elif len(fc) == 4 and T.q == 3:
        forms = quadrics_through(T, np.array(fc, dtype=np.int64))
        form = None
        for coeffs in points_array(len(forms) - 1, T.q).tolist():
            from .quadrics import linear_combination
            cand = linear_combination(T, forms, coeffs)
            if is_nondegenerate(cand):
                form = cand
                break
        if form is None:
            raise DegenerateError("no non-degenerate conic")
    else:
        raise DegenerateError("too few points")
    from .conics import normalize_form
    form = normalize_form(form)
    if not all(form(P) == 0 for P in fc):
        raise DegenerateError("points not on one conic")
    return FqConic(T, B.M, form)


def fq_conic_through(O: QuadricForm, three) -> FqConic:
    """The unique F_q-conic inside O through three of its points."""
    T = O.tower
    three = [tuple(p) for p in three]
    if any(O(X) != 0 for X in three):
        raise ValueError("points not on the conic")
    if len(set(normalize(T, X) for X in three)) != 3:
        raise DegenerateError("points not distinct")
    par = parametrize(O, P0=normalize(T, three[0]))
    th = [par.theta(X) for X in three]
    m = mobius_through(T, *th)
    # rows of S express (s'^2, s't', t'^2) in (s^2, st, t^2) for (s', t') = m (s, t)
    (a, b), (c, d) = m
    mul, add = T.mul, T.add
    two = T.from_int(2)
    S = ((mul(a, a), mul(two, mul(a, b)), mul(b, b)),
         (mul(a, c), add(mul(a, d), mul(b, c)), mul(b, d)),
         (mul(c, c), mul(two, mul(c, d)), mul(d, d)))
    N = tuple(tuple(sum_row(T, par.Phi[i], [S[k][j] for k in range(3)]) for j in range(3))
              for i in range(3))
    return FqConic(T, N, standard_conic(T))


def all_fq_conics(O: QuadricForm) -> list[FqConic]:
    """Every F_q-conic inside O: one per Baer subline of the parameter line."""
    T = O.tower
    par = parametrize(O)
    out = []
    for sub in all_sublines(T):
        a, b, c = sorted(sub)[:3]
        out.append(fq_conic_through(O, [par.point(a), par.point(b), par.point(c)]))
    return out


# ---------------------------------------------------------------------------
# l_inf-Baer pencils


@dataclass(frozen=True, eq=False)
class BaerPencil:
    """Cone of the q+1 lines joining a vertex to a Baer subline base."""

    tower: FieldTower
    vertex: tuple
    base: BaerSubline

    @cached_property
    def lines(self):
        T = self.tower
        return [span([self.vertex, tuple(X)], T).extend(Level.STAR)
                for X in self.base.points.tolist()]

    @property
    def ell_inf_pencil(self) -> bool:
        return self.vertex[2] == 0 and int(np.count_nonzero(self.base.points[:, 2] == 0)) == 1

    @cached_property
    def affine_points(self) -> np.ndarray:
        pts = np.concatenate([l.points() for l in self.lines])
        pts = pts[pts[:, 2] != 0]
        return np.unique(pts, axis=0)

    @cached_property
    def points(self) -> np.ndarray:
        return np.unique(np.concatenate([l.points() for l in self.lines]), axis=0)
