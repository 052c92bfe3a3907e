"""Ruled cubic surfaces of PG(4,q) and their hyperplane sections.

V has line directrix t = <T0, T1>, conic directrix phi -> K (1, phi, phi^2)
in a plane disjoint from t, and generators joining K(phi) to the point
omega(phi) of t, where omega acts on (1, phi) and the image (s, u) names
s T0 + u T1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from ..bruckbose import BruckBoseFrame
from ..gf_tower import INF, FieldTower, Level
from ..projective import (Subspace, apply_matrix, encode_rows, mat_inv, mat_vec, meet, normalize,
                          normalize_rows, points_array, rank, span, subspace, transpose)
from .baer import BaerSubplane, mobius_apply, mobius_through, solve, unvec, vec
from .conics import DegenerateError, conic_through, is_nondegenerate, parametrize
from .quadrics import QuadricForm, linear_combination, matmul_codes, quadrics_through


@dataclass(frozen=True, eq=False)
class RuledCubicSurface:
    tower: FieldTower
    T0: tuple
    T1: tuple
    K: tuple      # 5 x 3, columns for 1, phi, phi^2
    omega: tuple  # 2 x 2 over F_q
    level: Level = Level.BASE

    def extend(self, level: int) -> "RuledCubicSurface":
        return RuledCubicSurface(self.tower, self.T0, self.T1, self.K, self.omega,
                                 Level(max(level, self.level)))

    @property
    def t(self) -> Subspace:
        return span([self.T0, self.T1], self.tower).extend(self.level)

    def conic_point(self, phi: int) -> tuple:
        T = self.tower
        m = (0, 0, 1) if phi == INF else (1, phi, T.mul(phi, phi))
        return normalize(T, mat_vec(T, self.K, m))

    def line_point(self, phi: int) -> tuple:
        T = self.tower
        s, u = mat_vec(T, self.omega, vec(phi))
        return normalize(T, tuple(T.add(T.mul(s, a), T.mul(u, b)) for a, b in zip(self.T0, self.T1)))

    def params(self, level: int | None = None) -> list[int]:
        lvl = self.level if level is None else level
        return [INF] + list(range(self.tower.size(lvl)))

    def generator(self, phi: int) -> Subspace:
        return span([self.line_point(phi), self.conic_point(phi)], self.tower).extend(self.level)

    def generators(self, level: int | None = None) -> list[Subspace]:
        return [self.generator(p) for p in self.params(level)]

    def points(self, level: int | None = None) -> np.ndarray:
        """The parametric point set: union of generators (this is V' above F_q)."""
        T = self.tower
        lvl = self.level if level is None else level
        F = T.size(lvl)
        line_pts = points_array(1, F)
        blocks = []
        for phi in self.params(lvl):
            M = transpose([self.line_point(phi), self.conic_point(phi)])
            blocks.append(apply_matrix(T, M, line_pts))
        pts = normalize_rows(T, np.concatenate(blocks))
        return np.unique(pts, axis=0)

    @cached_property
    def equations(self) -> list[QuadricForm]:
        """The 2 x 2 minors of [[a, c0, c1], [b, c1, c2]].

        Here x = a' T0 + b' T1 + sum c_k K_k and (a, b) = omega^-1 (a', b'),
        so the rank-one locus is the union of the generators.
        """
        T = self.tower
        F = transpose([self.T0, self.T1] + [tuple(r[j] for r in self.K) for j in range(3)])
        Finv = mat_inv(T, F)
        W = mat_inv(T, self.omega)
        Z = [tuple(T.add(T.mul(W[i][0], a), T.mul(W[i][1], b)) for a, b in zip(Finv[0], Finv[1]))
             for i in range(2)] + [tuple(r) for r in Finv[2:]]
        m1 = T.neg(1)
        minors = []
        for (i, j), (k, l) in (((0, 3), (1, 2)), ((0, 4), (1, 3)), ((2, 4), (3, 3))):
            arr = [[0] * 5 for _ in range(5)]
            arr[i][j] = 1
            arr[min(k, l)][max(k, l)] = m1
            minors.append(QuadricForm(T, tuple(map(tuple, arr))).substitute(Z))
        return minors

    def quadrics_through_points(self) -> list[QuadricForm]:
        """Quadrics over F_q through the F_q points; three of them when q > 3."""
        return quadrics_through(self.tower, self.points(Level.BASE))

    def points_by_equations(self, level: int | None = None) -> np.ndarray:
        lvl = self.level if level is None else level
        pts = points_array(4, self.tower.size(lvl))
        mask = np.ones(len(pts), dtype=bool)
        for Q in self.equations:
            mask &= Q.eval_many(pts) == 0
        return np.unique(pts[mask], axis=0)

    def contains_line(self, L: Subspace) -> bool:
        """True when every equation vanishes on the (extended) line."""
        return all(Q.contains_subspace(L) for Q in self.equations)

    def validate(self) -> None:
        T = self.tower
        q = T.q
        plane = span([tuple(r[j] for r in self.K) for j in range(3)], T)
        if plane.proj_dim != 2 or not meet(plane, self.t).is_empty():
            raise DegenerateError("conic plane must be disjoint from t")
        if rank(T, self.omega) != 2:
            raise DegenerateError("omega is singular")
        if len(self.points(Level.BASE)) != q * q + 2 * q + 1:
            raise DegenerateError("wrong point count")


def random_ruled_cubic(T: FieldTower, rng, max_tries: int = 1000) -> RuledCubicSurface:
    q = T.q
    for _ in range(max_tries):
        R = [tuple(int(x) for x in rng.integers(0, q, 5)) for _ in range(5)]
        if rank(T, R) < 5:
            continue
        K = transpose(R[2:])
        om = tuple(tuple(int(x) for x in r) for r in rng.integers(0, q, (2, 2)))
        if rank(T, om) < 2:
            continue
        V = RuledCubicSurface(T, R[0], R[1], K, om)
        V.validate()
        return V
    raise RuntimeError("could not draw a ruled cubic surface")


# ---------------------------------------------------------------------------
# the hyperplane census

TYPE_NAMES = ("directrix", "directrix+1 generator", "directrix+2 generators",
              "conic+generator", "twisted cubic")


def census_expected(q: int) -> tuple:
    return ((q * q - q) // 2, q + 1, (q * q + q) // 2, q ** 3 + q ** 2, q ** 4 - q ** 2)


def plane_coords(T: FieldTower, basis, X) -> tuple:
    return normalize(T, solve(T, list(basis), X))


def is_plane_conic(T: FieldTower, pts) -> bool:
    """q + 1 coplanar points, no three collinear, on one non-degenerate conic."""
    pts = [tuple(p) for p in pts]
    plane = span(pts, T)
    if plane.proj_dim != 2 or len(pts) != T.q + 1:
        return False
    pc = [plane_coords(T, plane.basis, X) for X in pts]
    from .conics import no_three_collinear
    if not no_three_collinear(T, pc):
        return False
    if len(pc) >= 5:
        O = conic_through(T, pc[:5])
        return all(O(P) == 0 for P in pc)
    return True


def in_general_position(T: FieldTower, pts, k: int) -> bool:
    return all(rank(T, sub) == k for sub in combinations([tuple(p) for p in pts], k))


def hyperplane_census(V: RuledCubicSurface) -> dict:
    """Classify every hyperplane section of V into the five types."""
    T = V.tower
    q = T.q
    Vp = V.points(Level.BASE)
    H = points_array(4, q)
    on_V = matmul_codes(T, H, Vp.T) == 0
    on_t = np.all(matmul_codes(T, H, np.array([V.T0, V.T1]).T) == 0, axis=1)
    gens = V.generators(Level.BASE)
    gpts = [g.points(Level.BASE) for g in gens]
    ends = np.array([[V.line_point(p), V.conic_point(p)] for p in V.params(Level.BASE)])
    gen_in = np.stack([np.all(matmul_codes(T, H, e.T) == 0, axis=1) for e in ends], axis=1)
    ngen = gen_in.sum(axis=1)
    keys = encode_rows(Vp, q)
    gkeys = [np.isin(keys, encode_rows(g, q)) for g in gpts]
    counts = [0] * 5
    tc_generator_ok = True
    types_ok = True
    bad = None
    for h in range(len(H)):
        if on_t[h]:
            if ngen[h] > 2:
                types_ok, bad = False, h
                continue
            counts[int(ngen[h])] += 1
            continue
        sec = on_V[h]
        if ngen[h] == 1:
            g = int(np.flatnonzero(gen_in[h])[0])
            rest = Vp[sec & ~gkeys[g]]
            ok = len(rest) == q
            if ok and q > 2:
                # two residual points at q = 2 do not fix the conic plane
                X = meet(span([tuple(r) for r in rest.tolist()], T), gens[g])
                ok = X.proj_dim == 0
            if ok and q > 2:
                ok = is_plane_conic(T, [tuple(r) for r in rest.tolist()] + [normalize(T, X.basis[0])])
            if not ok:
                types_ok, bad = False, h
            counts[3] += 1
        elif ngen[h] == 0:
            pts = Vp[sec]
            per_gen = [int(np.count_nonzero(sec & gk)) for gk in gkeys]
            if any(c != 1 for c in per_gen):
                tc_generator_ok = False
            t_hits = sum(1 for r in pts.tolist() if V.t.contains(r))
            k = min(4, q + 1)
            ok = (len(pts) == q + 1 and t_hits == 1 and rank(T, pts.tolist()) == k
                  and in_general_position(T, pts.tolist(), k))
            if not ok:
                types_ok, bad = False, h
            counts[4] += 1
        else:
            types_ok, bad = False, h
    return {
        "counts": tuple(counts),
        "expected": census_expected(q),
        "types_ok": types_ok,
        "twisted_cubic_meets_each_generator_once": tc_generator_ok,
        "bad_hyperplane": None if bad is None else tuple(H[bad].tolist()),
    }


# ---------------------------------------------------------------------------
# [B] for a tangent Baer subplane


def conic_param_in_plane(T: FieldTower, pts):
    """Parametrization K (5 x 3) of the conic of a plane through its points."""
    pts = [tuple(p) for p in pts]
    plane = span(pts, T)
    if plane.proj_dim != 2:
        raise DegenerateError("points not coplanar")
    pc = sorted({plane_coords(T, plane.basis, X) for X in pts})
    if len(pc) >= 5:
        O = conic_through(T, pc[:5])
    elif len(pc) == T.q + 1:
        # small q: any non-degenerate conic whose points are exactly these
        forms = quadrics_through(T, np.array(pc, dtype=np.int64))
        O = next((c for c in (linear_combination(T, forms, v)
                              for v in points_array(len(forms) - 1, T.q).tolist())
                  if is_nondegenerate(c) and len(c.points()) == len(pc)), None)
        if O is None:
            raise DegenerateError("no non-degenerate conic")
    else:
        raise DegenerateError("too few points for a conic")
    if any(O(P) for P in pc):
        raise DegenerateError("points not on one conic")
    par = parametrize(O, P0=pc[0])
    B = transpose(plane.basis)  # 5 x 3
    K = tuple(tuple(_dot(T, B[i], [par.Phi[k][j] for k in range(3)]) for j in range(3))
              for i in range(5))
    return K, par


def _dot(T, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = T.add(acc, T.mul(x, y))
    return acc


def ruled_cubic_from_tangent_subplane(B: BaerSubplane, frame: BruckBoseFrame, rng=None,
                                      max_tries: int = 500) -> RuledCubicSurface:
    """[B] with its structure recovered from the point set.

    Generators are the bb-images of the lines of B through the tangent point;
    a conic directrix is found as a plane through one affine point on each of
    three generators that misses [T] and meets every generator.
    """
    T = frame.tower
    q = T.q
    if B.infinity_type != "tangent":
        raise ValueError("subplane is not tangent to l_inf")
    Tbar = B.tangent_point
    dT = frame.alpha_of_linf(Tbar)
    t = frame.spread_line(dT)
    gens, gen_aff = [], []
    for line in B.lines_through(Tbar):
        aff = line[line[:, 2] != 0]
        img = [frame.bb_map(tuple(r)) for r in aff.tolist()]
        G = span(img, T)
        if G.proj_dim != 1 or meet(G, t).proj_dim != 0:
            raise AssertionError("image of a line of B is not a generator")
        gens.append(G)
        gen_aff.append(img)
    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(max_tries):
        i, j, k = rng.choice(len(gens), size=3, replace=False)
        picks = [gen_aff[i][rng.integers(q)], gen_aff[j][rng.integers(q)],
                 gen_aff[k][rng.integers(q)]]
        plane = span(picks, T)
        if plane.proj_dim != 2 or not meet(plane, t).is_empty():
            continue
        cps = [meet(plane, G) for G in gens]
        if any(c.proj_dim != 0 for c in cps):
            continue
        cpts = [normalize(T, c.basis[0]) for c in cps]
        try:
            K, par = conic_param_in_plane(T, cpts)
        except DegenerateError:
            continue
        # omega sends the conic parameter of each generator to its point on t
        plane_b = span(cpts, T).basis
        phis = [par.theta(plane_coords(T, plane_b, X)) for X in cpts]
        tpar = []
        for G in gens:
            X = normalize(T, meet(G, t).basis[0])
            tpar.append(unvec(T, solve(T, [t.basis[0], t.basis[1]], X)))
        m_phi = mobius_through(T, *phis[:3])
        m_t = mobius_through(T, *tpar[:3])
        from ..projective import mat_inv, mat_mul
        om = mat_mul(T, m_t, mat_inv(T, m_phi))
        if any(mobius_apply(T, om, a) != b for a, b in zip(phis, tpar)):
            raise AssertionError("generators do not follow a projectivity")
        V = RuledCubicSurface(T, t.basis[0], t.basis[1], K, om)
        return V
    raise RuntimeError("no conic directrix found")
