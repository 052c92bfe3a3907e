"""F_q-conics inside conics of PG(2,q^2) and in Baer subplanes, and their images in PG(4,q)."""
from __future__ import annotations

from collections import Counter
from itertools import combinations
from math import comb

import numpy as np

from ...gf_tower import INF, Level
from ...projective import frob_vec, hyperplane, mat_inv, meet, normalize, rank, span, transpose
from ...varieties.baer import all_fq_conics, baer_subplane_through, fq_conic_in_subplane, fq_conic_through
from ...varieties.conics import DegenerateError, infinity_type, linf_meet, random_conic
from ...varieties.curves import (RationalCurve, curve_of_fq_conic, nrc_through, rational_points,
                                 specialness)
from ...varieties.pencils import hyperplanes_containing
from ...varieties.reguli import hyperbolic_lines, special_conic_wrt
from ...varieties.ruled import conic_param_in_plane
from ..core import register
from ..instances import (SMALL_CONIC, pull_back, quadrangle, random_base_conic, random_delta, rows,
                         subplane_conics)

SIGMA = (0, 0, 0, 0, 1)


def linf_deltas(fr, B) -> set:
    return {fr.alpha_of_linf(tuple(X)) for X in B.linf_points.tolist()}


def alphas(hits) -> set:
    return {a for a, _ in hits}


def recover_conic(ctx, pts, tangent_at=None):
    """The Baer subplane and F_q-conic behind pulled-back points, found from a
    quadrangle of them, or None with a recorded failure."""
    T = ctx.T
    first = [tangent_at] if tangent_at is not None else []
    quad = quadrangle(T, pts, first)
    if not ctx.expect(quad is not None, "pulled-back points contain a quadrangle", pts=pts[:5]):
        return None, None
    B = baer_subplane_through(T, quad)
    ctx.expect(all(B.contains(X) for X in pts), "pulled-back points lie in one Baer subplane")
    C = fq_conic_in_subplane(B, pts)
    ctx.expect(C.key == frozenset(pts), "they form an F_q-conic of the subplane", pts=pts[:5])
    return B, C


# ---------------------------------------------------------------------------
# F_q-conics inside a conic


@register("adult-baby", "subconics/count",
          "Three points of O lie in a unique F_q-conic; O contains q(q^2+1) of them")
def adult_baby(ctx):
    T, q = ctx.T, ctx.q
    conics = [random_conic(T, ctx.rng) for _ in range(2 if q <= 4 else 1)]
    for O in conics:
        pts = [tuple(r) for r in O.points(Level.STAR).tolist()]
        full = q <= 5 or ctx.exhaustive
        triples = list(combinations(pts, 3)) if full else \
            [tuple(pts[i] for i in ctx.rng.choice(len(pts), 3, replace=False)) for _ in range(ctx.n)]
        per = Counter()
        for tri in triples:
            C = fq_conic_through(O, tri)
            k = C.key
            per[k] += 1
            if per[k] == 1:
                ctx.expect(len(k) == q + 1 and not np.any(O.eval_many(C.points)),
                           "q+1 points on O", triple=tri)
                ctx.expect(C.cplus.coeffs == O.coeffs, "the extension of C is O", triple=tri)
            ctx.expect(set(tri) <= k, "the F_q-conic contains the triple", triple=tri)
        if full:
            ctx.expect(len(per) == q * (q * q + 1), "q(q^2+1) F_q-conics in O", found=len(per))
            ctx.expect(set(per.values()) == {comb(q + 1, 3)},
                       "each F_q-conic holds C(q+1,3) of the triples", counts=sorted(set(per.values())))
            by_sublines = {C.key for C in all_fq_conics(O)}
            ctx.expect(by_sublines == set(per), "triples and parameter sublines give the same conics")
            ctx.note("fq_conics_per_conic", len(per))
        ctx.tally("conics")
        ctx.tally("triples", len(triples))


# ---------------------------------------------------------------------------
# secant subplanes


@register("lem:sect-conic", "subconics/secant-subplane",
          "[C] for an F_q-conic C of a secant subplane: three cases by C+ ∩ l_inf")
def sect_conic(ctx):
    fr, T = ctx.frame, ctx.T
    for B, C in subplane_conics(ctx, max(60, ctx.n // 2), "secant"):
        N = curve_of_fq_conic(fr, C)
        ctx.expect(N.degree == 2, "[C] is a conic", degree=N.degree)
        plane = span([tuple(r) for r in fr.bb_map_rows(B.affine_points).tolist()], T)
        npts = N.points(Level.BASE)
        ctx.expect(plane.proj_dim == 2 and all(plane.contains(tuple(X)) for X in npts.tolist()),
                   "[C] lies in the plane [B]")
        r = linf_meet(C.cplus, Level.STAR)
        inB = linf_deltas(fr, B)
        at_inf = [tuple(X) for X in npts.tolist() if X[4] == 0]
        ds = sorted((fr.delta_of_point(X) for X in at_inf), key=lambda d: (d == INF, d))
        if not ctx.expect(len(r) == 2, "C+ meets l_inf in two points", r=r):
            continue
        if r[0] == r[1]:
            case = 1
            ctx.expect(r[0] in inB and ds == [r[0]], "case 1: one point, on [P]", r=r, at_inf=ds)
        elif set(r) <= inB:
            case = 2
            ctx.expect(len(ds) == 2 and set(ds) == set(r), "case 2: one point on each of [P], [Q]", r=r, at_inf=ds)
        else:
            case = 3
            ctx.expect(not (set(r) & inB) and not ds, "case 3: P̄, Q̄ off B and [C] misses Sigma_inf",
                       r=r, at_inf=ds)
            h = hyperbolic_lines(fr, r[0], r[1])
            ctx.expect(special_conic_wrt(fr, h, N), "case 3: [C] is (PQ^q)-special", r=r)
        ctx.tally(f"case[{case}]")


def transversal_through(fr, X) -> tuple[int, int]:
    """For X in Sigma_inf* off g and g^q, the (alpha, beta) with X on the line
    joining g_point(alpha) and g_point(beta)^q."""
    T = fr.tower
    Y = meet(span([X, fr.g], T), fr.gq)
    Pp = meet(span([X, Y.basis[0]], T), fr.g)
    return fr.alpha_of(Pp.basis[0]), fr.alpha_of(frob_vec(T, Y.basis[0]))


@register("lem:sect-conic-converse", "subconics/secant-subplane-converse",
          "A conic of a plane of PG(4,q) with no spread line comes from an F_q-conic of a secant subplane",
          min_q=3, hypothesis=SMALL_CONIC)
def sect_conic_converse(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    done, tries = 0, 0
    target = max(40, ctx.n // 4)
    while done < target:
        tries += 1
        if tries > 50 * target:
            raise RuntimeError("could not draw enough planes")
        three = [tuple(ctx.randint(q) for _ in range(4)) + (1,) for _ in range(3)]
        alpha = span(three, T)
        if alpha.proj_dim != 2:
            continue
        ell = meet(alpha, span([fr.spread_line(0), fr.spread_line(INF)], T))
        if fr.delta_of_line(ell) is not None:
            continue
        form = random_base_conic(ctx)
        npts = [alpha_point(T, alpha.basis, p) for p in form.points(Level.BASE).tolist()]
        back_alpha = set(pull_back(fr, alpha.points(Level.BASE).tolist()))
        back = pull_back(fr, npts)
        B, C = recover_conic(ctx, back)
        if B is None:
            continue
        done += 1
        ctx.expect(set(map(tuple, B.points.tolist())) == back_alpha, "alpha pulls back to B")
        ctx.expect(B.infinity_type == "secant", "B is secant")
        r = linf_meet(C.cplus, Level.STAR)
        at_inf = [fr.delta_of_point(X) for X in npts if X[4] == 0]
        if len(at_inf) == 1:
            ctx.expect(r == [at_inf[0]] * 2, "one point at infinity: C+ tangent to l_inf there", r=r)
            ctx.tally("case[1]")
        elif len(at_inf) == 2:
            ctx.expect(set(r) == set(at_inf) and len(set(r)) == 2, "two points at infinity", r=r)
            ctx.tally("case[2]")
        else:
            K, _ = conic_param_in_plane(T, npts)
            curve = RationalCurve(T, K)
            ths = curve.meet_hyperplane(SIGMA, Level.STAR)
            X = curve.extend(Level.STAR).point(ths[0])
            a, b = transversal_through(fr, X)
            ctx.expect(a != b and set(r) == {a, b}, "C+ meets l_inf in the P̄, Q̄ of the special pair",
                       r=r, pair=(a, b))
            ctx.expect(not (set(r) & linf_deltas(fr, B)), "P̄, Q̄ off B", r=r)
            ctx.tally("case[3]")
    ctx.note("planes_drawn", tries)


def alpha_point(T, basis, p) -> tuple:
    acc = [0] * 5
    for c, row in zip(p, basis):
        if c:
            acc = [T.add(a, T.mul(c, x)) for a, x in zip(acc, row)]
    return normalize(T, acc)


# ---------------------------------------------------------------------------
# tangent subplanes, conics through T̄


def tangent_conic_curves(ctx, through_T: bool):
    fr = ctx.frame
    for B, C in subplane_conics(ctx, max(200, ctx.n), "tangent", through_T):
        N = curve_of_fq_conic(fr, C)
        yield B, C, N, specialness(N, fr)


@register("thm-tgt-conic-T-1", "subconics/tangent-through-T",
          "[C] is a g-special twisted cubic for an F_q-conic C through T̄ of a tangent subplane",
          min_q=6, hypothesis="requires q>5", observe_from=3)
def tgt_conic_t_1(ctx):
    fr = ctx.frame
    for B, C, N, sp in tangent_conic_curves(ctx, True):
        ctx.expect(N.degree == 3 and N.is_normal(), "[C] is a twisted cubic", degree=N.degree)
        ctx.expect(sp.kind == "g-special twisted cubic", "[C] is g-special", kind=sp.kind)
        at_inf = [fr.delta_of_point(tuple(X)) for X in N.points(Level.BASE).tolist() if X[4] == 0]
        ctx.expect(at_inf == [fr.alpha_of_linf(B.tangent_point)], "one point at infinity, on [T]",
                   at_inf=at_inf)
        ctx.tally(f"kind[{sp.kind}]")


@register("thm-tgt-conic-T-2", "subconics/tangent-through-T-witnesses",
          "C+ ∩ l_inf = {T̄, P̄} and [C]* meets g, g^q in P, P^q",
          min_q=6, hypothesis="requires q>5", observe_from=3)
def tgt_conic_t_2(ctx):
    fr = ctx.frame
    for B, C, N, sp in tangent_conic_curves(ctx, True):
        dT = fr.alpha_of_linf(B.tangent_point)
        r = linf_meet(C.cplus, Level.STAR)
        ok = ctx.expect(len(set(r)) == 2 and dT in r, "C+ meets l_inf in T̄ and one more point", r=r)
        if not ok:
            continue
        dP = next(d for d in r if d != dT)
        ctx.expect(alphas(sp.g) == {dP} and alphas(sp.gq) == {dP}, "witnesses P, P^q",
                   dP=dP, g=sp.g, gq=sp.gq)
        ctx.tally("conics")


@register("conv-tgt", "subconics/tangent-through-T-converse",
          "A g-special twisted cubic comes from an F_q-conic through T̄ of a tangent subplane",
          min_q=6, hypothesis="requires q>5", observe_from=3)
def conv_tgt(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    target = max(50, ctx.n // 4)
    done, tries = 0, 0
    while done < target:
        tries += 1
        if tries > 100 * target:
            raise RuntimeError("could not synthesize enough twisted cubics")
        dR = random_delta(ctx)
        R = fr.g_point(dR)
        forms = hyperplanes_containing(fr, fr.spread_line(dR))
        pts = hyperplane(T, forms[ctx.randint(len(forms))]).points()
        aff = pts[pts[:, 4] != 0]
        far = [tuple(X) for X in pts[pts[:, 4] == 0].tolist() if fr.delta_of_point(tuple(X)) != dR]
        # a twisted cubic over F_q has one F_q point at infinity besides R, R^q
        four = [tuple(x) for x in aff[ctx.rng.choice(len(aff), 3, replace=False)].tolist()]
        four.append(far[ctx.randint(len(far))])
        try:
            N = nrc_through(T, [R, frob_vec(T, R)] + four)
        except DegenerateError:
            continue
        done += 1
        rp = rational_points(N)
        if not ctx.expect(len(rp) == q + 1, "the cubic is defined over F_q", found=len(rp)):
            continue
        sp = specialness(N, fr)
        ctx.expect(sp.kind == "g-special twisted cubic" and alphas(sp.g) == {dR},
                   "synthesized cubic is g-special at R", kind=sp.kind)
        at_inf = [tuple(X) for X in rp.tolist() if X[4] == 0]
        if not ctx.expect(len(at_inf) == 1, "one F_q point at infinity", found=len(at_inf)):
            continue
        dT = fr.delta_of_point(at_inf[0])
        Tbar = fr.linf_point(dT)
        back = pull_back(fr, rp.tolist())
        B, C = recover_conic(ctx, back, tangent_at=Tbar)
        if B is None:
            continue
        ctx.expect(B.infinity_type == "tangent" and B.tangent_point == Tbar, "B is tangent at T̄")
        ctx.expect(set(linf_meet(C.cplus, Level.STAR)) == {dT, dR}, "C+ ∩ l_inf = {T̄, R̄}",
                   r=linf_meet(C.cplus, Level.STAR), dT=dT, dR=dR)
        ctx.expect(curve_of_fq_conic(fr, C).point_set(Level.BASE) == frozenset(map(tuple, rp.tolist())),
                   "[C] is the synthesized cubic")
        ctx.tally("synthesized")
    ctx.note("attempts", tries)


# ---------------------------------------------------------------------------
# tangent subplanes, conics avoiding T̄

NRC_KINDS = ("g-special NRC4", "gstar-special NRC4")


@register("smiley-conic", "subconics/tangent-avoiding-T",
          "[C] is a g-special or g*-special NRC4 for an F_q-conic C of a tangent subplane avoiding T̄",
          min_q=8, hypothesis="requires q>7", observe_from=4)
def smiley_conic(ctx):
    for B, C, N, sp in tangent_conic_curves(ctx, False):
        ctx.expect(N.degree == 4 and N.is_normal(), "[C] is an NRC4", degree=N.degree)
        ctx.expect(sp.kind in NRC_KINDS, "[C] is special", kind=sp.kind)
        ctx.tally(f"case[{infinity_type(C.cplus)}]")


@register("baby-not-T-part2", "subconics/tangent-avoiding-T-witnesses",
          "The points of [C]* on g or g* are those of C+ ∩ l_inf, case by case",
          min_q=8, hypothesis="requires q>7", observe_from=4)
def baby_not_t_part2(ctx):
    for B, C, N, sp in tangent_conic_curves(ctx, False):
        kind = infinity_type(C.cplus)
        if kind == "secant":
            r = set(linf_meet(C.cplus, Level.STAR))
            ok = (sp.kind == "g-special NRC4" and alphas(sp.g) == r and alphas(sp.gq) == r
                  and not sp.gstar)
        elif kind == "tangent":
            dP = linf_meet(C.cplus, Level.STAR)[0]
            ok = sp.kind == "g-special NRC4" and sp.g == [(dP, 2)] and sp.gq == [(dP, 2)]
        else:
            r = set(linf_meet(C.cplus, Level.FOURSTAR))
            ok = sp.kind == "gstar-special NRC4" and not sp.g and alphas(sp.gstar) == r
        ctx.expect(ok, f"case {kind}: witnesses match C+ ∩ l_inf", special=sp.to_dict())
        ctx.tally(f"case[{kind}]")


def tangent_contact_nrc4(fr, P, G2, abc):
    """The NRC4 through three points, tangent to g at P and to g^q at P^q.

    In the frame (P, P^q, A, B, C) the curve is y0 = v0 prod(t - a_j),
    y1 = u1 t prod(t - a_j), y_i = v_i t prod_{j != i}(t - a_j) with
    a_i = -v_i / u_i, where u, v are the frame coordinates of a second point
    G2 of g and of G2^q.  It passes through P at t = 0 and P^q at t = INF.
    """
    T = fr.tower
    cols = [P, frob_vec(T, P)] + list(abc)
    M = transpose(cols)
    if rank(T, cols) < 5:
        raise DegenerateError("frame points are dependent")
    Minv = mat_inv(T, M)
    mv = lambda X: tuple(sum_codes(T, [T.mul(a, b) for a, b in zip(row, X)]) for row in Minv)
    u, v = mv(G2), mv(frob_vec(T, G2))
    if not u[1] or not v[0] or any(not u[i] or not v[i] for i in (2, 3, 4)):
        raise DegenerateError("frame coordinates vanish")
    a = {i: T.neg(T.div(v[i], u[i])) for i in (2, 3, 4)}
    if len(set(a.values())) != 3 or 0 in a.values():
        raise DegenerateError("repeated parameters")

    def prod(skip=()):
        poly = [1]
        for i in (2, 3, 4):
            if i not in skip:
                poly = T.poly_mul(poly, [T.neg(a[i]), 1])
        return poly

    def scaled(c, poly, shift):
        poly = [0] * shift + [T.mul(c, x) for x in poly]
        return (poly + [0] * 5)[:5]

    y = [scaled(v[0], prod(), 0), scaled(u[1], prod(), 1)] + [scaled(v[i], prod((i,)), 1) for i in (2, 3, 4)]
    coeffs = tuple(tuple(sum_codes(T, [T.mul(M[r][k], y[k][j]) for k in range(5)]) for j in range(5))
                   for r in range(5))
    curve = RationalCurve(T, coeffs, Level.STAR)
    if not curve.is_normal():
        raise DegenerateError("curve is not normal")
    return curve


def sum_codes(T, xs):
    acc = 0
    for x in xs:
        if x:
            acc = T.add(acc, x)
    return acc


def synthesize_nrc4(ctx, case: str):
    """An NRC4 over F_q special with respect to g (cases secant, tangent) or g*
    (case exterior), built from points of g or g* and three affine points.
    Returns (curve, expected l_inf meet at q^2 or q^4)."""
    fr, T, q = ctx.frame, ctx.T, ctx.q
    abc = [tuple(ctx.randint(q) for _ in range(4)) + (1,) for _ in range(3)]
    if case == "secant":
        dP = random_delta(ctx)
        dQ = random_delta(ctx, exclude=(dP,))
        P, Q = fr.g_point(dP), fr.g_point(dQ)
        N = nrc_through(T, [P, frob_vec(T, P), Q, frob_vec(T, Q)] + abc)
        return N, {dP, dQ}
    if case == "tangent":
        dP = random_delta(ctx)
        G2 = fr.g_point(random_delta(ctx, exclude=(dP,)))
        return tangent_contact_nrc4(fr, fr.g_point(dP), G2, abc), {dP}
    F2, F4 = T.size(Level.STAR), T.size(Level.FOURSTAR)
    a = F2 + ctx.randint(F4 - F2)
    while T.level_of(a) < Level.FOURSTAR:
        a = F2 + ctx.randint(F4 - F2)
    P = fr.g_point(a)
    N = nrc_through(T, [frob_vec(T, P, k) if k else P for k in range(4)] + abc)
    return N, {a, T.frob(a, 2)}


@register("4nrc-is-baby-1", "subconics/tangent-avoiding-T-converse",
          "A g-special or g*-special NRC4 comes from an F_q-conic of a tangent subplane avoiding T̄",
          min_q=8, hypothesis="requires q>7", observe_from=4)
def nrc4_is_baby(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    per = -(-max(51, ctx.n // 4) // 3)
    expected_kind = {"secant": "g-special NRC4", "tangent": "g-special NRC4",
                     "exterior": "gstar-special NRC4"}
    tries = 0
    for case in ("secant", "tangent", "exterior"):
        done = 0
        while done < per:
            tries += 1
            if tries > 200 * per:
                raise RuntimeError("could not synthesize enough curves")
            try:
                N, r_expected = synthesize_nrc4(ctx, case)
            except DegenerateError:
                continue
            done += 1
            rp = rational_points(N)
            if not ctx.expect(len(rp) == q + 1, "the NRC4 is defined over F_q", case=case,
                              found=len(rp)):
                continue
            sp = specialness(N, fr)
            ctx.expect(sp.kind == expected_kind[case], "synthesized curve has the intended kind",
                       case=case, kind=sp.kind)
            ctx.expect(not np.any(rp[:, 4] == 0), "no F_q point at infinity", case=case)
            back = pull_back(fr, rp.tolist())
            B, C = recover_conic(ctx, back)
            if B is None:
                continue
            ctx.expect(B.infinity_type == "tangent", "B is tangent", case=case)
            if B.infinity_type == "tangent":
                ctx.expect(B.tangent_point not in set(back), "C avoids T̄", case=case)
            lvl = Level.FOURSTAR if case == "exterior" else Level.STAR
            r = linf_meet(C.cplus, lvl)
            ok = set(r) == r_expected and (case != "tangent" or len(r) == 2)
            ctx.expect(ok, "C+ ∩ l_inf is where the curve meets g or g*", case=case, r=r,
                       expected=r_expected)
            ctx.expect(curve_of_fq_conic(fr, C).point_set(Level.BASE)
                       == frozenset(map(tuple, rp.tolist())), "[C] is the synthesized curve", case=case)
            ctx.tally(f"synthesized[{case}]")
    ctx.note("attempts", tries)
