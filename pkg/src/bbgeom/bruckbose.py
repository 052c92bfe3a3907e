"""The Bruck-Bose frame of PG(2,q^2) inside PG(4,q).

Coordinates are hard-wired: Sigma_inf is z = 0 in PG(4,q) with coordinates
(x0, x1, y0, y1, z), and l_inf is z = 0 in PG(2,q^2).  Because F_{q^2}
codes are ``a0 + q*a1`` for ``a0 + a1*tau``, the map
(x0 + x1 tau, y0 + y1 tau, z) -> (x0, x1, y0, y1, z) is a split of codes.

The dictionary between l_inf and the transversal g sends (delta, 1, 0) to
delta*A0 + A1, with delta = INF giving (1, 0, 0) and A0.
"""
from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .gf_tower import INF, FieldTower, Level, make_tower
from .projective import (Subspace, encode_rows, frob_vec, hyperplane, meet, normalize,
                         normalize_rows, points_array, rref, span, subspace)


class BruckBoseFrame:
    """Sigma_inf, the regular spread, the transversals g and g^q, and the maps."""

    def __init__(self, tower: FieldTower):
        T = self.tower = tower
        q = self.q = tower.q
        tq = T.frob(T.tau)
        m1 = T.neg(1)
        self.A0 = (tq, m1, 0, 0, 0)
        self.A1 = (0, 0, tq, m1, 0)
        self.g = span([self.A0, self.A1], T)
        self.gq = self.g.frobenius()
        self.sigma_inf = hyperplane(T, (0, 0, 0, 0, 1))
        self.ell_inf = subspace(T, [(1, 0, 0), (0, 1, 0)])
        self.deltas = [INF] + list(range(q * q))
        self._spread_index = {self.spread_line(d).basis: d for d in self.deltas}

    # -- the spread ---------------------------------------------------------
    def spread_line(self, delta: int) -> Subspace:
        T = self.tower
        if delta == INF:
            return subspace(T, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)])
        d0, d1 = delta % self.q, delta // self.q
        return subspace(T, [(d0, d1, 1, 0, 0),
                            (T.mul(T.t0, d1), T.add(d0, T.mul(T.t1, d1)), 0, 1, 0)])

    @cached_property
    def spread(self) -> dict:
        return {d: self.spread_line(d) for d in self.deltas}

    def delta_of_line(self, line: Subspace) -> int | None:
        """The delta of a spread line, or None if the line is not in the spread."""
        return self._spread_index.get(line.basis)

    def delta_of_point(self, X) -> int:
        """The spread line through a point of Sigma_inf (any level):  delta = x / y."""
        T = self.tower
        if X[4] != 0:
            raise ValueError("point not in Sigma_inf")
        x = self._join(X[0], X[1])
        y = self._join(X[2], X[3])
        if y == 0:
            return INF
        return T.div(x, y)

    def _join(self, a0, a1):
        return self.tower.add(a0, self.tower.mul(a1, self.tower.tau))

    # -- the transversals and the dictionary ---------------------------------
    def g_point(self, alpha: int) -> tuple:
        """alpha*A0 + A1 (A0 when alpha is INF), normalized."""
        T = self.tower
        if alpha == INF:
            return normalize(T, self.A0)
        return normalize(T, tuple(T.add(T.mul(alpha, a), b) for a, b in zip(self.A0, self.A1)))

    def alpha_of(self, P) -> int:
        """Inverse of g_point for a point of g (or its quartic extension)."""
        if not self.g.contains(P):
            raise ValueError("point is not on the transversal")
        if P[3] == 0:
            return INF
        return self.tower.div(P[1], P[3])

    def on_g(self, P, level: int = Level.STAR) -> bool:
        if not self.g.contains(P):
            return False
        a = self.alpha_of(P)
        return a == INF or a < self.tower.size(level)

    def on_gq(self, P, level: int = Level.STAR) -> bool:
        return self.on_g(frob_vec(self.tower, P, 3), level)

    def linf_point(self, alpha: int) -> tuple:
        if alpha == INF:
            return (1, 0, 0)
        return normalize(self.tower, (alpha, 1, 0))

    def alpha_of_linf(self, P) -> int:
        if P[2] != 0:
            raise ValueError("point is not on l_inf")
        if P[1] == 0:
            return INF
        return self.tower.div(P[0], P[1])

    # -- the Bruck-Bose map ---------------------------------------------------
    def bb_map(self, A) -> tuple:
        """Affine point of PG(2,q^2) -> affine point of PG(4,q)."""
        T = self.tower
        if A[2] == 0:
            raise ValueError("point on l_inf: use spread_line")
        inv = T.inv(A[2])
        x, y = T.mul(A[0], inv), T.mul(A[1], inv)
        q = self.q
        return (x % q, x // q, y % q, y // q, 1)

    def bb_unmap(self, X) -> tuple:
        T = self.tower
        if X[4] == 0:
            raise ValueError("point in Sigma_inf")
        if any(c >= self.q for c in X):
            raise ValueError("point not over F_q")
        inv = T.inv(X[4])
        X = [T.mul(c, inv) for c in X]
        return normalize(T, (X[0] + self.q * X[1], X[2] + self.q * X[3], 1))

    def bb_map_rows(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized bb_map for affine points (rows of codes)."""
        T = self.tower
        pts = normalize_rows(T, np.asarray(pts)[:, ::-1])[:, ::-1]  # z = 1
        q = self.q
        out = np.empty((pts.shape[0], 5), dtype=np.int64)
        out[:, 0], out[:, 1] = pts[:, 0] % q, pts[:, 0] // q
        out[:, 2], out[:, 3] = pts[:, 1] % q, pts[:, 1] // q
        out[:, 4] = 1
        return out

    def bb_unmap_rows(self, pts: np.ndarray) -> np.ndarray:
        pts = normalize_rows(self.tower, np.asarray(pts)[:, ::-1])[:, ::-1]
        q = self.q
        out = np.stack([pts[:, 0] + q * pts[:, 1], pts[:, 2] + q * pts[:, 3],
                        np.ones(len(pts), dtype=np.int64)], axis=1)
        return normalize_rows(self.tower, out)

    def point_of_pg2(self, X) -> tuple:
        """The point of PG(2,q^2) named by a point of PG(4,q): bb_unmap off
        Sigma_inf, the l_inf point of its spread line on Sigma_inf."""
        if X[4] == 0:
            return self.linf_point(self.delta_of_point(X))
        return self.bb_unmap(X)

    # -- the extension operators ------------------------------------------
    def extend(self, obj, to: int):
        return extend(obj, to)

    @cached_property
    def affine_points(self) -> np.ndarray:
        pts = points_array(4, self.q)
        return pts[pts[:, 4] != 0]


def extend(obj, to: int):
    """Extension to a higher level: same equations / basis / parameter formulas."""
    if hasattr(obj, "extend"):
        return obj.extend(to)
    if isinstance(obj, np.ndarray):
        return obj  # a point set over F_q is unchanged as a set of points
    raise TypeError(f"cannot extend {type(obj).__name__}")


@lru_cache(maxsize=None)
def make_frame(q: int, primpoly=None) -> BruckBoseFrame:
    return BruckBoseFrame(make_tower(q, primpoly))


# ---------------------------------------------------------------------------
# spread construction from the transversal and incidence checks


def spread_from_transversal(frame: BruckBoseFrame) -> dict:
    """For each point P of g, the line P P^q is fixed by Frobenius; its
    canonical basis is then over F_q and gives a line of Sigma_inf."""
    T = frame.tower
    out = {}
    for d in frame.deltas:
        P = frame.g_point(d)
        line = span([P, frob_vec(T, P)], T)
        if any(c >= frame.q for row in line.basis for c in row):
            raise AssertionError("P P^q not defined over F_q")
        out[d] = Subspace(T, 4, Level.BASE, line.basis)
    return out


def is_spread(frame: BruckBoseFrame, lines) -> bool:
    """Pairwise disjoint lines covering every point of Sigma_inf."""
    q = frame.q
    keys = np.concatenate([encode_rows(l.points(), q) for l in lines])
    total = q**3 + q**2 + q + 1
    return len(keys) == total and len(np.unique(keys)) == total


def incidence_plane_check(frame: BruckBoseFrame, spread=None) -> dict:
    """Affine-plane axioms for the incidence structure A(S).

    Points are the affine points of PG(4,q); lines are the planes through a
    spread line, not inside Sigma_inf.  Checks: every line has q^2 points,
    every pair of distinct points is on exactly one line, and the lines
    through each spread line partition the points (parallel classes).
    """
    T, q = frame.tower, frame.q
    lines_S = list(frame.spread.values()) if spread is None else list(spread)
    aff = frame.affine_points
    n = len(aff)
    index = {k: i for i, k in enumerate(encode_rows(aff, q).tolist())}
    cover = np.zeros((n, n), dtype=np.int32)
    planes = set()
    sizes_ok = True
    classes_ok = True
    for L in lines_S:
        seen = np.zeros(n, dtype=np.int32)
        for i in range(n):
            if seen[i]:
                continue
            plane = span([L, tuple(aff[i])], T)
            pts = plane.points()
            pts = pts[pts[:, 4] != 0]
            idx = np.array([index[k] for k in encode_rows(pts, q).tolist()])
            if len(idx) != q * q:
                sizes_ok = False
            seen[idx] += 1
            planes.add(plane.basis)
            cover[np.ix_(idx, idx)] += 1
        classes_ok &= bool(np.all(seen == 1))
    off = ~np.eye(n, dtype=bool)
    pairs_ok = bool(np.all(cover[off] == 1))
    return {
        "points": n,
        "lines": len(planes),
        "line_size_ok": sizes_ok,
        "pairs_on_one_line": pairs_ok,
        "parallel_classes_ok": classes_ok,
        "is_spread": is_spread(frame, lines_S),
        "passed": sizes_ok and pairs_ok and classes_ok and len(planes) == q**4 + q**2,
    }


def transversal_check(frame: BruckBoseFrame, spread=None) -> bool:
    """Every extended line of the spread meets g (regularity witness)."""
    lines_S = list(frame.spread.values()) if spread is None else list(spread)
    for L in lines_S:
        if meet(L.extend(Level.STAR), frame.g).is_empty():
            return False
    return True


def first_point(S: Subspace):
    return normalize(S.tower, S.basis[0])
