"""Baer sublines and subplanes of PG(2,q^2) and what they become in PG(4,q)."""
from __future__ import annotations

import numpy as np

from ...gf_tower import INF, Level
from ...projective import frob_vec, hyperplane, meet, normalize, points_array, rank, span
from ...varieties.baer import (all_sublines, baer_closure, baer_subline_through, baer_subplane_through,
                               mobius_apply, solve, subline_params, unvec)
from ...varieties.conics import DegenerateError, conic_through
from ...varieties.curves import curve_of_fq_conic, curve_of_subline, specialness
from ...varieties.pencils import is_baer_subline_by_cross_ratio
from ...varieties.reguli import plane_coords, regulus_through, spread_reguli
from ...varieties.ruled import (RuledCubicSurface, conic_param_in_plane, is_plane_conic,
                                ruled_cubic_from_tangent_subplane)
from ..core import register
from ..instances import (affine_point, fq_conic, pull_back, quadrangle, random_delta, rows,
                         secant_subplane, tangent_subplane)
from .subconics import alpha_point, alphas, linf_deltas

SIGMA = (0, 0, 0, 0, 1)


def affine_fq_point(ctx) -> tuple:
    return tuple(ctx.randint(ctx.q) for _ in range(4)) + (1,)


def image_set(fr, pts) -> set:
    return {normalize(fr.tower, fr.bb_map(tuple(X))) for X in np.asarray(pts).tolist()}


def subplane_image(fr, B) -> set:
    """[B]: images of the affine points plus the spread lines of B ∩ l_inf."""
    out = image_set(fr, B.affine_points)
    for X in B.linf_points.tolist():
        out |= set(rows(fr.spread_line(fr.alpha_of_linf(tuple(X))).points()))
    return out


@register("BB-Baer-1", "baer/subline-at-infinity",
          "Baer sublines of l_inf are the reguli of the regular spread")
def bb_baer_1(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    if q <= 5 or ctx.exhaustive:
        regs = spread_reguli(fr)
        subs = set(all_sublines(T))
        ctx.expect(set(regs) == subs, "reguli of S = Baer sublines of l_inf",
                   reguli=len(regs), sublines=len(subs))
        ctx.expect(len(regs) == q * (q * q + 1), "q(q^2+1) reguli", found=len(regs))
        ctx.note("reguli", len(regs))
    for _ in range(min(ctx.n, 60)):
        a = random_delta(ctx)
        b = random_delta(ctx, exclude=(a,))
        c = random_delta(ctx, exclude=(a, b))
        reg = regulus_through(fr.spread_line(a), fr.spread_line(b), fr.spread_line(c))
        ds = frozenset(fr.delta_of_line(l) for l in reg.lines)
        ctx.expect(None not in ds, "the regulus lies in S", triple=(a, b, c))
        ctx.expect(ds == subline_params(T, a, b, c), "regulus deltas = subline through the three",
                   triple=(a, b, c))
        ctx.expect(is_baer_subline_by_cross_ratio(T, [fr.linf_point(d) for d in ds if d is not None]),
                   "cross-ratios lie in F_q", triple=(a, b, c))
        ctx.tally("triples")


@register("BB-Baer-2", "baer/subline-meeting-linf",
          "Baer sublines meeting l_inf are the lines of PG(4,q) off Sigma_inf")
def bb_baer_2(ctx):
    fr, T = ctx.frame, ctx.T
    F2 = T.size(Level.STAR)
    sigma = hyperplane(T, SIGMA)
    for _ in range(min(ctx.n, 100)):
        dT = random_delta(ctx)
        Tbar, A = fr.linf_point(dT), affine_point(ctx)
        t = 1 + ctx.randint(F2 - 1)
        Bp = normalize(T, tuple(T.add(a, T.mul(t, x)) for a, x in zip(A, Tbar)))
        b = baer_subline_through(T, [Tbar, A, Bp])
        imgs = [fr.bb_map(tuple(X)) for X in b.points.tolist() if X[2] != 0]
        L = span(imgs, T)
        ok = ctx.expect(len(imgs) == ctx.q and L.proj_dim == 1, "images are q collinear points", dT=dT)
        if ok:
            X = meet(L, sigma).basis[0]
            ctx.expect(fr.delta_of_point(X) == dT, "the line meets Sigma_inf on [T]", dT=dT)
        # converse: a line off Sigma_inf
        L = span([affine_fq_point(ctx), affine_fq_point(ctx)], T)
        if L.proj_dim != 1:
            continue
        pts = pull_back(fr, L.points().tolist())
        ctx.expect(is_baer_subline_by_cross_ratio(T, pts), "a line pulls back to a Baer subline",
                   line=L.basis)
        ctx.expect(baer_subline_through(T, pts[:3]).key == frozenset(pts),
                   "the pull-back is the subline through any three of its points", line=L.basis)
        ctx.tally("lines")


def plane_pull_back(ctx, alpha):
    fr, T = ctx.frame, ctx.T
    back = pull_back(fr, alpha.points(Level.BASE).tolist())
    quad = quadrangle(T, [X for X in back if X[2] != 0])
    return back, baer_subplane_through(T, quad)


@register("BB-Baer-3", "baer/secant-subplane",
          "Secant Baer subplanes are the planes of PG(4,q) with no spread line")
def bb_baer_3(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    sigma = hyperplane(T, SIGMA)
    for _ in range(min(ctx.n, 40)):
        B = secant_subplane(ctx)
        alpha = span(list(image_set(fr, B.affine_points)), T)
        if not ctx.expect(alpha.proj_dim == 2, "[B] spans a plane"):
            continue
        ell = meet(alpha, sigma)
        ctx.expect(fr.delta_of_line(ell) is None, "the plane contains no spread line")
        met = {fr.delta_of_point(tuple(X)) for X in ell.points().tolist()}
        ctx.expect(met == linf_deltas(fr, B), "its line at infinity meets the spread lines of B ∩ l_inf")
        ctx.tally("forward")
    done = 0
    while done < min(ctx.n, 20):
        alpha = span([affine_fq_point(ctx) for _ in range(3)], T)
        if alpha.proj_dim != 2 or fr.delta_of_line(meet(alpha, sigma)) is not None:
            continue
        done += 1
        back, B = plane_pull_back(ctx, alpha)
        ctx.expect(set(rows(B.points)) == set(back), "the plane pulls back to a Baer subplane")
        ctx.expect(B.infinity_type == "secant", "the subplane is secant")
        ctx.expect(B.line_profile_ok(), "every line meets it in 1 or q+1 points")
        if q <= 3:
            quad = quadrangle(T, back)
            ctx.expect(baer_closure(T, quad) == frozenset(back), "closure of a quadrangle agrees")
        ctx.tally("converse")


def g_special_plane_conic(ctx, dR):
    """An F_q conic in the plane <[R], A> through R, R^q and three affine points,
    found over F_q^2 and checked to be defined over F_q.  Returns (plane,
    conic points in PG(4,q)) or None when the points are degenerate."""
    fr, T = ctx.frame, ctx.T
    alpha = span([fr.spread_line(dR), affine_fq_point(ctx)], T)
    pts = alpha.points(Level.BASE)
    aff = pts[pts[:, 4] != 0]
    R = fr.g_point(dR)
    three = [tuple(x) for x in aff[ctx.rng.choice(len(aff), 3, replace=False)].tolist()]
    pc = [plane_coords(T, alpha.basis, X) for X in [R, frob_vec(T, R)] + three]
    try:
        form = conic_through(T, pc)
    except DegenerateError:
        return None
    ctx.expect(all(c < ctx.q for r in form.coeffs for c in r), "the conic is defined over F_q")
    npts = [alpha_point(T, alpha.basis, p) for p in form.points(Level.BASE).tolist()]
    return alpha, npts


@register("BB-Baer-4", "baer/subline-disjoint-linf",
          "Baer sublines disjoint from l_inf are the g-special conics")
def bb_baer_4(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    F2 = T.size(Level.STAR)
    done = 0
    while done < min(ctx.n, 50):
        A, A2 = affine_point(ctx), affine_point(ctx)
        if A == A2:
            continue
        t = 1 + ctx.randint(F2 - 1)
        C = normalize(T, tuple(T.add(a, T.mul(t, x)) for a, x in zip(A, A2)))
        try:
            b = baer_subline_through(T, [A, A2, C])
        except DegenerateError:
            continue
        if np.any(b.points[:, 2] == 0):
            continue
        done += 1
        line = span([A, A2], T)
        d = fr.alpha_of_linf(meet(line, span([(1, 0, 0), (0, 1, 0)], T)).basis[0])
        N = curve_of_subline(fr, b)
        ctx.expect(N.degree == 2, "[b] is a conic", degree=N.degree)
        ctx.expect(N.point_set(Level.BASE) == frozenset(image_set(fr, b.points)), "[b] = bb(b)")
        plane = span([fr.spread_line(d), fr.bb_map(A)], T)
        ctx.expect(all(plane.contains(tuple(X)) for X in N.points().tolist()),
                   "[b] lies in the plane <[L], A>")
        sp = specialness(N, fr)
        ctx.expect(sp.kind == "g-special conic" and alphas(sp.g) == {d},
                   "[b] is g-special at the point of g on [L]", special=sp.to_dict(), delta=d)
        ctx.tally("forward")
    done = 0
    while done < min(ctx.n, 30):
        dR = random_delta(ctx)
        made = g_special_plane_conic(ctx, dR)
        if made is None:
            continue
        done += 1
        _, npts = made
        ok = ctx.expect(len(npts) == q + 1 and all(X[4] != 0 for X in npts),
                        "q+1 affine F_q points", found=len(npts))
        if not ok:
            continue
        back = pull_back(fr, npts)
        ctx.expect(is_baer_subline_by_cross_ratio(T, back), "the conic pulls back to a Baer subline")
        line = span(back[:2], T)
        X = meet(line, span([(1, 0, 0), (0, 1, 0)], T)).basis[0]
        ctx.expect(fr.alpha_of_linf(X) == dR, "its line meets l_inf at R̄", dR=dR)
        ctx.tally("converse")


def omega_choices(T, phi_R, theta_T) -> list[tuple]:
    """Elements of PGL(2,q), one matrix each, sending phi_R to theta_T."""
    q = T.q
    out = []
    for a, b, c, d in points_array(3, q).tolist():
        m = ((a, b), (c, d))
        if rank(T, m) == 2 and mobius_apply(T, m, phi_R) == theta_T:
            out.append(m)
    return out


@register("BB-Baer-5", "baer/tangent-subplane",
          "Tangent Baer subplanes are the g-special ruled cubic surfaces")
def bb_baer_5(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    for _ in range(min(ctx.n, 10)):
        B = tangent_subplane(ctx)
        dT = fr.alpha_of_linf(B.tangent_point)
        V = ruled_cubic_from_tangent_subplane(B, fr, ctx.rng)
        V.validate()
        ctx.expect(set(rows(V.points(Level.BASE))) == subplane_image(fr, B), "[B] is the surface")
        ctx.expect(V.t == fr.spread_line(dT), "the line directrix is [T]", dT=dT)
        # over F_2 the three points of a conic directrix do not fix its extension
        with ctx.observing(q == 2):
            ctx.expect(V.contains_line(fr.g) and V.contains_line(fr.gq), "V* contains g and g^q")
            ctx.expect(fr.g in V.extend(Level.STAR).generators(), "g is a generator of V*")
        ctx.tally("forward")
    done = 0
    while done < min(ctx.n, 10):
        dT = random_delta(ctx)
        dR = random_delta(ctx, exclude=(dT,))
        made = g_special_plane_conic(ctx, dR)
        if made is None:
            continue
        _, npts = made
        K, par = conic_param_in_plane(T, npts)
        basis = span(npts, T).basis
        phi_R = par.theta(plane_coords(T, basis, fr.g_point(dR)))
        t = fr.spread_line(dT)
        theta_T = unvec(T, solve(T, [t.basis[0], t.basis[1]], fr.g_point(dT)))
        oms = omega_choices(T, phi_R, theta_T)
        ctx.expect(len(oms) == q + 1, "q+1 maps send phi_R to theta_T", found=len(oms))
        V = RuledCubicSurface(T, t.basis[0], t.basis[1], K, oms[ctx.randint(len(oms))])
        V.validate()
        done += 1
        ctx.expect(V.contains_line(fr.g) and V.contains_line(fr.gq), "the surface is g-special")
        Tbar = fr.linf_point(dT)
        back = set(pull_back(fr, [X for X in V.points(Level.BASE).tolist() if X[4] != 0])) | {Tbar}
        quad = quadrangle(T, sorted(back - {Tbar}), first=[Tbar])
        B = baer_subplane_through(T, quad)
        ctx.expect(set(rows(B.points)) == back, "the surface pulls back to a Baer subplane",
                   size=len(back))
        ctx.expect(B.infinity_type == "tangent" and B.tangent_point == Tbar, "tangent at T̄")
        ctx.tally("converse")


@register("cath-conic", "subconics/representation",
          "[C] is a conic, a twisted cubic or an NRC4 for an F_q-conic of a Baer subplane")
def cath_conic(ctx):
    fr, T, q = ctx.frame, ctx.T, ctx.q
    k = max(20, ctx.n // 10)
    for i in range(k):
        if i % 5 == 0:
            Bs, Bt = secant_subplane(ctx), tangent_subplane(ctx)
            img_t = subplane_image(fr, Bt)
            dT = fr.alpha_of_linf(Bt.tangent_point)
        C = fq_conic(ctx, Bs)
        N = curve_of_fq_conic(fr, C)
        plane = span(list(image_set(fr, Bs.affine_points)), T)
        npts = N.points(Level.BASE).tolist()
        ctx.expect(N.degree == 2 and all(plane.contains(tuple(X)) for X in npts),
                   "secant: [C] is a conic in the plane [B]")
        ctx.expect({tuple(X) for X in npts if X[4]} == image_set(fr, C.points[C.points[:, 2] != 0]),
                   "secant: affine part of [C] is bb(C)")
        ctx.expect(is_plane_conic(T, npts), "secant: [C] is a non-degenerate plane conic")
        ctx.tally("secant")
        with ctx.observing(q < 3):
            C = fq_conic(ctx, Bt, True)
            N = curve_of_fq_conic(fr, C)
            npts = [tuple(X) for X in N.points(Level.BASE).tolist()]
            at_inf = [fr.delta_of_point(X) for X in npts if X[4] == 0]
            ctx.expect(N.degree == 3 and N.is_normal() and set(npts) <= img_t and at_inf == [dT],
                       "through T̄: [C] is a twisted cubic on [B] meeting [T] once", degree=N.degree)
            ctx.tally("through_T")
        with ctx.observing(q < 4):
            C = fq_conic(ctx, Bt, False)
            N = curve_of_fq_conic(fr, C)
            npts = [tuple(X) for X in N.points(Level.BASE).tolist()]
            ctx.expect(N.degree == 4 and N.is_normal() and set(npts) <= img_t
                       and all(X[4] != 0 for X in npts),
                       "avoiding T̄: [C] is an affine NRC4 on [B]", degree=N.degree)
            ctx.tally("avoiding_T")
