"""Rational curves theta -> M (1, theta, ..., theta^n) in PG(4, .) and the
specialness classifier.

Row k of ``coeffs`` lists the coefficients (low degree first) of coordinate
k as a polynomial in theta; theta = INF picks the last column.  Intersections
with subspaces are parameter roots of the composed binary forms.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..bruckbose import BruckBoseFrame
from ..gf_tower import INF, FieldTower, Level, roots
from ..kernels import get_backend
from ..projective import (Subspace, frob_vec, mat_vec, normalize, normalize_rows, rank, span,
                          subspace, transpose)
from .baer import FqConic, frame_matrix, solve
from .conics import DegenerateError


@dataclass(frozen=True, eq=False)
class RationalCurve:
    tower: FieldTower
    coeffs: tuple  # (n_coords) rows of (degree + 1) codes
    level: Level = Level.BASE

    @property
    def degree(self) -> int:
        return len(self.coeffs[0]) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.coeffs) - 1

    def extend(self, level: int) -> "RationalCurve":
        return RationalCurve(self.tower, self.coeffs, Level(max(level, self.level)))

    def point(self, theta: int) -> tuple:
        T = self.tower
        if theta == INF:
            return normalize(T, tuple(r[-1] for r in self.coeffs))
        return normalize(T, tuple(T.poly_eval(list(r), theta) for r in self.coeffs))

    def params(self, level: int | None = None) -> list[int]:
        lvl = self.level if level is None else level
        return [INF] + list(range(self.tower.size(lvl)))

    def points(self, level: int | None = None) -> np.ndarray:
        """Normalized points, one row per parameter in params() order."""
        T = self.tower
        lvl = self.level if level is None else level
        kern = get_backend()
        ft = T.tables()
        xs = np.arange(T.size(lvl), dtype=np.int64)
        cols = [kern.poly_eval(ft, np.array(r, dtype=np.int64), xs) for r in self.coeffs]
        finite = np.stack(cols, axis=1)
        inf = np.array([[r[-1] for r in self.coeffs]], dtype=np.int64)
        return normalize_rows(T, np.concatenate([inf, finite]))

    def point_set(self, level: int | None = None) -> frozenset:
        return frozenset(map(tuple, self.points(level).tolist()))

    def span(self) -> Subspace:
        return subspace(self.tower, transpose(self.coeffs), self.level)

    def compose(self, form) -> list[int]:
        """Binary form h(curve(theta)) for a linear form h."""
        T = self.tower
        out = [0] * (self.degree + 1)
        for h, row in zip(form, self.coeffs):
            if h:
                out = [T.add(o, T.mul(h, c)) for o, c in zip(out, row)]
        return out

    def meet_hyperplane(self, form, level: int) -> list[int]:
        return roots(self.tower, self.compose(form), level, projective=True)

    def meet_subspace(self, S: Subspace, level: int) -> dict[int, int]:
        """Parameter -> multiplicity for the points of the curve on S at a level."""
        forms = [self.compose(h) for h in S.annihilator()]
        forms = [f for f in forms if any(f)]
        if not forms:
            return {th: 1 for th in self.params(level)}
        counts = [Counter(roots(self.tower, f, level, projective=True)) for f in forms]
        out = {}
        for th, m in counts[0].items():
            mult = min(c.get(th, 0) for c in counts)
            if mult:
                out[th] = mult
        return dict(sorted(out.items(), key=lambda kv: (kv[0] != INF, kv[0])))

    def is_normal(self) -> bool:
        """The coefficient matrix has full column rank (the curve spans an n-space)."""
        return rank(self.tower, transpose(self.coeffs)) == self.degree + 1


def moment_curve(T: FieldTower, n: int = 4) -> RationalCurve:
    return RationalCurve(T, tuple(tuple(1 if i == j else 0 for j in range(n + 1))
                                  for i in range(n + 1)))


def curve_from_frame(T: FieldTower, Phi, n: int, level=None) -> RationalCurve:
    """Ambient matrix Phi (m x (n+1)) applied to the moment curve."""
    lvl = max(T.level_of(c) for r in Phi for c in r) if level is None else level
    return RationalCurve(T, tuple(tuple(r) for r in Phi), Level(lvl))


def nrc_through(T: FieldTower, pts) -> RationalCurve:
    """The unique normal rational curve of degree n through n + 3 points.

    With P_0..P_n scaled to a frame whose unit point is P_{n+1} and
    P_{n+2} = sum y_i P_i in that frame, the curve is
    x_i(theta) = y_i prod_{j != i} (y_j + theta); it passes through P_k at
    theta = -y_k, P_{n+1} at theta = 0 and P_{n+2} at theta = INF.
    """
    pts = [tuple(p) for p in pts]
    n = len(pts) - 3
    if n < 2:
        raise DegenerateError("need at least 5 points")
    if rank(T, pts[:n + 1]) != n + 1:
        raise DegenerateError("points not in general position")
    Phi = frame_matrix(T, pts[:n + 2])
    cols = [tuple(r[i] for r in Phi) for i in range(n + 1)]
    y = solve(T, cols, pts[n + 2])
    if any(v == 0 for v in y) or len(set(y)) != len(y):
        raise DegenerateError("points not in general position")
    X = []
    for i in range(n + 1):
        poly = [y[i]]
        for j in range(n + 1):
            if j != i:
                poly = T.poly_mul(poly, [y[j], 1])
        X.append(poly + [0] * (n + 1 - len(poly)))
    M = tuple(tuple(_dot(T, row, [X[i][k] for i in range(n + 1)]) for k in range(n + 1))
              for row in Phi)
    curve = curve_from_frame(T, M, n)
    if not curve.is_normal():
        raise DegenerateError("points not in general position")
    return curve


def _dot(T, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = T.add(acc, T.mul(x, y))
    return acc


def rational_points(curve: RationalCurve) -> np.ndarray:
    """Points of the curve (at its own level) with every coordinate in F_q."""
    pts = curve.points()
    return pts[np.all(pts < curve.tower.q, axis=1)]


def rationalize(curve: RationalCurve) -> RationalCurve:
    """Refit a Frobenius-invariant curve from its F_q points, giving a
    parametrization over F_q."""
    n = curve.degree
    rp = rational_points(curve)
    if len(rp) != curve.tower.q + 1:
        raise DegenerateError("curve is not defined over F_q")
    if len(rp) < n + 3:
        raise DegenerateError("too few rational points to refit")
    return nrc_through(curve.tower, [tuple(r) for r in rp[:n + 3].tolist()])


def same_curve(a: RationalCurve, b: RationalCurve, level: int) -> bool:
    return a.point_set(level) == b.point_set(level)


# ---------------------------------------------------------------------------
# the Bruck-Bose image of an F_q-conic


def _reduce_forms(T: FieldTower, forms: list[list[int]]):
    """Strip the common factor of binary forms of equal declared degree."""
    n = len(forms[0]) - 1
    while n > 0 and all(f[n] == 0 for f in forms):
        forms = [f[:n] for f in forms]
        n -= 1
    G = []
    for f in forms:
        if any(f):
            G = T.poly_gcd(G, f) if G else T.poly_gcd(f, f)
    out = []
    for f in forms:
        quot, rem = T.poly_divmod(f, G) if any(f) else ([0], [])
        if any(rem):
            raise AssertionError("gcd does not divide")
        d = n - (len(G) - 1)
        out.append((list(quot) + [0] * (d + 1))[:d + 1])
    return out


def bb_curve(frame: BruckBoseFrame, K) -> RationalCurve:
    """Image in PG(4,q) of theta -> K (1, theta, ...) over theta in F_q.

    X, Y, Z are the coordinate polynomials and Zbar has conjugated
    coefficients, so Z(theta) Zbar(theta) lies in F_q for theta in F_q and
    (X Zbar, Y Zbar, Z Zbar) split over {1, tau} is the image.  Common
    factors are removed.
    """
    T = frame.tower
    q = T.q
    X, Y, Z = (list(r) for r in K)
    Zb = [T.frob(c) for c in Z]
    XZ, YZ, ZZ = T.poly_mul(X, Zb), T.poly_mul(Y, Zb), T.poly_mul(Z, Zb)
    width = 2 * (len(Z) - 1) + 1
    pad = lambda p: (list(p) + [0] * width)[:width]
    XZ, YZ, ZZ = pad(XZ), pad(YZ), pad(ZZ)
    if any(c >= q for c in ZZ):
        raise AssertionError("Z Zbar not over F_q")
    rows = [[c % q for c in XZ], [c // q for c in XZ], [c % q for c in YZ], [c // q for c in YZ], ZZ]
    rows = _reduce_forms(T, rows)
    return RationalCurve(T, tuple(map(tuple, rows)), Level.BASE)


def curve_of_fq_conic(frame: BruckBoseFrame, C: FqConic) -> RationalCurve:
    """[C]: a conic, twisted cubic or NRC4 according to the host and T̄."""
    return bb_curve(frame, C.param_matrix)


def curve_of_subline(frame: BruckBoseFrame, b) -> RationalCurve:
    """[b] for a Baer subline b = {M (s, t)} (a line or a conic of PG(4,q))."""
    return bb_curve(frame, b.M)


# ---------------------------------------------------------------------------
# specialness


@dataclass
class Specialness:
    kind: str
    degree: int
    g: list = field(default_factory=list)       # (alpha, multiplicity) on g
    gq: list = field(default_factory=list)      # (alpha, multiplicity): points alpha-conjugates on g^q
    gstar: list = field(default_factory=list)   # (alpha, multiplicity) on g* minus g

    def to_dict(self) -> dict:
        return {"kind": self.kind, "degree": self.degree,
                "g": [list(x) for x in self.g], "gq": [list(x) for x in self.gq],
                "gstar": [list(x) for x in self.gstar]}


KINDS = ("g-special conic", "g-special twisted cubic", "g-special NRC4",
         "gstar-special NRC4", "not special")


def _hits(frame: BruckBoseFrame, curve: RationalCurve, line: Subspace, level: int, conj: int):
    T = frame.tower
    out = []
    for th, m in curve.meet_subspace(line, level).items():
        P = curve.extend(level).point(th)
        alpha = frame.alpha_of(frob_vec(T, P, conj)) if conj else frame.alpha_of(P)
        out.append((alpha, m))
    return out


def specialness(curve: RationalCurve, frame: BruckBoseFrame) -> Specialness:
    """Classify a curve over F_q by how its extensions meet g, g^q and g*.

    Multiplicity at a parameter is the least root multiplicity over the
    linear forms cutting out the line, i.e. the contact order with the line.
    """
    n = curve.degree
    F2 = frame.tower.size(Level.STAR)
    g_all = _hits(frame, curve, frame.g, Level.FOURSTAR, 0)
    gq_all = _hits(frame, curve, frame.gq, Level.FOURSTAR, 3)
    on2 = lambda a: a == INF or a < F2
    g = [(a, m) for a, m in g_all if on2(a)]
    gq = [(a, m) for a, m in gq_all if on2(a)]
    gstar = [(a, m) for a, m in g_all if not on2(a)]
    kind = "not special"
    if n in (2, 3) and g and gq:
        kind = "g-special conic" if n == 2 else "g-special twisted cubic"
    elif n == 4:
        if sum(m for _, m in g) == 2 and sum(m for _, m in gq) == 2:
            kind = "g-special NRC4"
        elif len(gstar) >= 2:
            kind = "gstar-special NRC4"
    return Specialness(kind, n, g, gq, gstar)


def line_special(curve: RationalCurve, line: Subspace, level: int = Level.STAR) -> dict:
    """Parameters (with multiplicity) where the extended curve meets a line."""
    return curve.meet_subspace(line, level)
