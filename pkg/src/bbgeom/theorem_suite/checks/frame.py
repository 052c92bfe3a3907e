"""The field tower, the regular spread, the Bruck-Bose map and its extensions."""
from __future__ import annotations

from itertools import combinations

import numpy as np

from ...bruckbose import incidence_plane_check, is_spread, spread_from_transversal, transversal_check
from ...gf_tower import INF, Level
from ...projective import frob_vec, meet, normalize, points_array, rank, span, subspace
from ...varieties.curves import RationalCurve, specialness
from ...varieties.reguli import is_regular, mutated_spread, non_regular_spread
from ..core import register
from ..instances import affine_point, random_delta, rows, secant_subplane, tangent_subplane


def rational_part(S, level: int):
    """The subspace spanned by the F_q points of S (intersection of its conjugates)."""
    out = S
    for k in range(1, 4 if level == Level.FOURSTAR else 2):
        out = meet(out, S.frobenius(k))
    return out


@register("bb-coordinates", "bruck-bose/coordinates",
          "Tower identities, the coordinate map and the spread lines as x = delta y")
def bb_coordinates(ctx):
    T, fr = ctx.T, ctx.frame
    tau, tq = T.tau, T.frob(T.tau)
    ctx.expect(T.mul(tau, tq) == T.neg(T.t0), "tau tau^q = -t0", tau=tau)
    ctx.expect(T.add(tau, tq) == T.t1, "tau + tau^q = t1", tau=tau)
    ctx.expect(tq == T.sub(T.t1, tau), "tau^q = t1 - tau", tau=tau)
    ctx.expect(T.frob(tau, 2) == tau, "tau^(q^2) = tau", tau=tau)
    ctx.expect(T.pow(tau, T.q * T.q - 1) == 1, "tau^(q^2-1) = 1", tau=tau)
    ctx.expect(T.frob(T.sigma, 4) == T.sigma and T.frob(T.sigma, 2) != T.sigma,
               "sigma generates F_q^4 over F_q^2", sigma=T.sigma)
    ctx.expect(fr.bb_map((tau, 1, 1)) == (0, 1, 1, 0, 1), "bb(tau, 1, 1)")
    F2 = T.size(Level.STAR)
    pts = [(x, y, 1) for x in range(F2) for y in range(F2)]
    for A in ctx.sample(pts):
        X = fr.bb_map(A)
        ctx.expect(fr.bb_unmap(X) == normalize(T, A), "bb round trip", A=A, X=X)
        # independent: x = x0 + x1 tau, y = y0 + y1 tau
        ctx.expect(A[0] == T.add(X[0], T.mul(X[1], tau)) and A[1] == T.add(X[2], T.mul(X[3], tau)),
                   "bb coordinates split over {1, tau}", A=A, X=X)
    for d in fr.deltas:
        L = fr.spread_line(d)
        ctx.expect(all(fr.delta_of_point(tuple(X)) == d for X in L.points().tolist()),
                   "spread line is x = delta y", delta=d)
        P = fr.g_point(d)
        ctx.expect(L.extend(Level.STAR).contains(P), "g_point on the extended spread line", delta=d)
        ctx.expect(span([P, frob_vec(T, P)], T) == L.extend(Level.STAR),
                   "[P]* = P P^q", delta=d)
    ctx.expect(fr.g_point(INF) == normalize(T, fr.A0), "g_point(inf) = A0")


@register("spread-construction", "spreads/transversal-construction",
          "The spread from the transversal g agrees with the coordinate spread")
def spread_construction(ctx):
    T, fr = ctx.T, ctx.frame
    q = ctx.q
    built = spread_from_transversal(fr)
    for d in fr.deltas:
        ctx.expect(built[d].basis == fr.spread_line(d).basis, "P P^q = coordinate spread line", delta=d)
    lines = list(fr.spread.values())
    ctx.expect(len(lines) == q * q + 1, "q^2 + 1 spread lines", lines=len(lines))
    ctx.expect(is_spread(fr, lines), "lines partition Sigma_inf")
    pairs = list(combinations(fr.deltas, 2))
    for a, b in ctx.sample(pairs):
        ctx.expect(meet(fr.spread[a], fr.spread[b]).is_empty(), "spread lines disjoint", a=a, b=b)
    for d in fr.deltas:
        ctx.expect(meet(fr.spread[d].extend(Level.STAR), fr.g).proj_dim == 0,
                   "g meets each extended spread line once", delta=d)
    ctx.expect(rational_part(fr.g, Level.STAR).is_empty(), "g has no F_q point")
    ctx.expect(meet(fr.g, fr.gq).is_empty(), "g and g^q are skew")
    if q <= 4:
        gp = fr.g.points(Level.STAR)
        ctx.expect(not np.any(np.all(gp < q, axis=1)), "g has no F_q point (enumerated)")
    ctx.note("spread_lines", len(lines))


@register("bb-incidence", "bruck-bose/affine-plane",
          "Affine points and planes through spread lines form an affine plane of order q^2")
def bb_incidence(ctx):
    T, fr = ctx.T, ctx.frame
    q = ctx.q
    if q <= 4 or (ctx.exhaustive and q <= 5):
        res = incidence_plane_check(fr)
        ctx.expect(res["passed"], "plane axioms", **{k: v for k, v in res.items() if k != "passed"})
        ctx.note("points", res["points"])
        ctx.note("lines", res["lines"])
    aff = fr.affine_points
    for _ in range(ctx.count()):
        i, j = ctx.rng.choice(len(aff), size=2, replace=False)
        A, B = tuple(aff[i].tolist()), tuple(aff[j].tolist())
        through = [d for d in fr.deltas if rank(T, list(fr.spread[d].basis) + [A, B]) == 3]
        # oracle: the line of PG(2,q^2) through the preimages meets l_inf at delta
        a, b = fr.bb_unmap(A), fr.bb_unmap(B)
        W = meet(span([a, b], T), fr.ell_inf.extend(Level.STAR))
        d = fr.alpha_of_linf(normalize(T, W.basis[0]))
        ctx.expect(through == [d], "one A(S)-line through two points", A=A, B=B, found=through, expected=d)
    if q > 2:
        nr = non_regular_spread(fr)
        ctx.expect(is_spread(fr, nr), "non-regular fixture is a spread")
        ctx.expect(not transversal_check(fr, nr), "non-regular fixture has no transversal g")
        ctx.expect(not is_regular(nr), "non-regular fixture is not regular")
        mut = mutated_spread(fr)
        ctx.expect(not is_spread(fr, mut), "mutated fixture is not a spread")
        if q <= 4:
            ctx.expect(incidence_plane_check(fr, nr)["passed"], "non-regular fixture gives a plane")
            ctx.expect(not incidence_plane_check(fr, mut)["passed"], "mutated fixture breaks the axioms")


@register("quartic-extension", "bruck-bose/quartic-extension",
          "Points of g over F_q^4 and the lines P P^q in the quartic extension")
def quartic_extension(ctx):
    T, fr = ctx.T, ctx.frame
    F2, F4 = T.size(Level.STAR), T.size(Level.FOURSTAR)
    alphas = [a for a in range(F4) if a >= F2]
    for a in ctx.sample(alphas, min(ctx.n, 100)):
        P = fr.g_point(a)
        ctx.expect(fr.on_g(P, Level.FOURSTAR) and not fr.on_g(P, Level.STAR),
                   "P on g* minus g", alpha=a)
        ctx.expect(fr.alpha_of(frob_vec(T, P, 2)) == T.frob(a, 2), "P^(q^2) is the g point of alpha^(q^2)",
                   alpha=a)
        Pq = frob_vec(T, P)
        ctx.expect(fr.on_gq(Pq, Level.FOURSTAR), "P^q on the extension of g^q", alpha=a)
        line = span([P, Pq], T)
        ctx.expect(rational_part(line, Level.FOURSTAR).is_empty(), "P P^q has no F_q point", alpha=a)
        ctx.expect(all(r[4] == 0 for r in line.basis),
                   "P P^q lies in Sigma_inf", alpha=a)
        if ctx.q <= 3:
            pts = line.points(Level.FOURSTAR)
            ctx.expect(not np.any(np.all(pts < ctx.q, axis=1)), "P P^q has no F_q point (enumerated)",
                       alpha=a)


@register("conjugate-points", "baer/conjugate-points",
          "The Baer involution of a secant subplane and of its subline on l_inf")
def conjugate_points(ctx):
    T, fr = ctx.T, ctx.frame
    F2 = T.size(Level.STAR)
    for x in range(F2):
        ctx.expect(T.frob(x, 2) == x, "x^(q^2) = x on F_q^2", x=x)
        ctx.expect((T.frob(x) == x) == (x < ctx.q), "x^q = x exactly on F_q", x=x)
    for x in ctx.sample(range(T.size(Level.FOURSTAR)), 200):
        ctx.expect(T.frob(x, 4) == x, "x^(q^4) = x", x=x)
    linf = [fr.linf_point(d) for d in fr.deltas]
    plane_pts = [tuple(r) for r in points_array(2, F2).tolist()]
    for _ in range(max(3, ctx.count() // 50)):
        B = secant_subplane(ctx)
        b = B.linf_subline
        inB = set(rows(B.points))
        for X in linf:
            Y = B.conjugate(X)
            ctx.expect(Y[2] == 0, "conjugate of an l_inf point is on l_inf", X=X, Y=Y)
            ctx.expect(B.conjugate(Y) == X, "conjugation is an involution", X=X)
            ctx.expect((Y == X) == (X in inB), "fixed points are the points of B", X=X)
            ctx.expect(b.conjugate(X) == Y, "subplane and subline conjugation agree", X=X, Y=Y)
        for _ in range(20):
            P, Q = plane_pts[ctx.randint(len(plane_pts))], plane_pts[ctx.randint(len(plane_pts))]
            if P == Q:
                continue
            line = span([P, Q], T)
            R = normalize(T, line.points(Level.STAR)[ctx.randint(F2 + 1)])
            cs = [B.conjugate(Z) for Z in (P, Q, R)]
            ctx.expect(rank(T, cs) <= 2, "conjugation preserves collinearity", P=P, Q=Q, R=R)


def congruence_line(fr, a, b):
    T = fr.tower
    return span([fr.g_point(a), frob_vec(T, fr.g_point(b))], T)


@register("hyperbolic-congruence", "circle-geometry/hyperbolic-congruence",
          "Lines meeting g and g^q; two of them meet only on g or g^q")
def hyperbolic_congruence(ctx):
    T, fr = ctx.T, ctx.frame
    ds = fr.deltas
    for _ in range(ctx.count()):
        a, b = random_delta(ctx), random_delta(ctx)
        L = congruence_line(fr, a, b)
        ctx.expect(meet(L, fr.g).proj_dim == 0 and meet(L, fr.gq).proj_dim == 0,
                   "P Q^q meets g and g^q", a=a, b=b)
        ctx.expect((a == b) == (L == fr.spread_line(a).extend(Level.STAR)),
                   "P Q^q is a spread line exactly when P = Q", a=a, b=b)
        c, d = random_delta(ctx), random_delta(ctx)
        M = congruence_line(fr, c, d)
        if L == M:
            continue
        X = meet(L, M)
        if X.proj_dim == 0:
            P = X.basis[0]
            ctx.expect(fr.g.contains(P) or fr.gq.contains(P), "congruence lines meet on g or g^q",
                       lines=[(a, b), (c, d)], point=P)
    ctx.note("deltas", len(ds))


def random_fq_curve(ctx, degree: int) -> RationalCurve:
    """A curve theta -> M (1, ..., theta^degree) spanning a degree-space over F_q."""
    T = ctx.T
    while True:
        M = tuple(tuple(ctx.randint(T.q) for _ in range(degree + 1)) for _ in range(5))
        if rank(T, tuple(zip(*M))) == degree + 1:
            return RationalCurve(T, M, Level.BASE)


@register("g-special-definitions", "specialness/definitions",
          "Hits of an F_q curve on g and g^q come in conjugate pairs")
def g_special_definitions(ctx):
    from ...varieties.curves import curve_of_fq_conic
    from ..instances import fq_conic
    T, fr = ctx.T, ctx.frame
    n = max(10, ctx.count() // 4)
    curves = [random_fq_curve(ctx, 2 + k % 3) for k in range(n)]
    for k in range(n // 2):
        B = tangent_subplane(ctx)
        curves.append(curve_of_fq_conic(fr, fq_conic(ctx, B, through_T=bool(k % 2))))
    kinds = {}
    for N in curves:
        sp = specialness(N, fr)
        kinds[sp.kind] = kinds.get(sp.kind, 0) + 1
        ctx.expect(sorted(sp.g) == sorted(sp.gq), "g hits and g^q hits are conjugate",
                   curve=N.coeffs, g=sp.g, gq=sp.gq)
        gs = {a for a, _ in sp.gstar}
        ctx.expect(all(T.frob(a, 2) in gs for a in gs), "g* hits closed under x -> x^(q^2)",
                   curve=N.coeffs, gstar=sp.gstar)
        for a, _ in sp.g:
            P = fr.g_point(a)
            ctx.expect(P in {N.extend(Level.STAR).point(th)
                             for th in N.meet_subspace(fr.g, Level.STAR)},
                       "reported g point lies on the extended curve", alpha=a)
    for kind, c in sorted(kinds.items()):
        ctx.note(f"kind[{kind}]", c)
