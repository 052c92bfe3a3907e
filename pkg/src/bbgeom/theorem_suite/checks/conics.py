"""Conics of PG(2,q^2) as pencils of quadrics of PG(4,q): where they meet g and Sigma_inf."""
from __future__ import annotations

import numpy as np

from ...gf_tower import INF, Level
from ...kernels import vadd, vmul
from ...projective import points_array
from ...varieties.conics import (conic_to_pencil, is_nondegenerate, linf_meet, locus_at_infinity,
                                 pencil_member_on_g, predicted_locus, random_conic, standard_conic)
from ...varieties.quadrics import QuadricForm
from ..core import register
from ..instances import rows

KINDS = ("secant", "tangent", "exterior")
# number of lines of [O] ∩ Sigma_inf at the levels q, q^2, q^4
LINE_COUNTS = {"secant": (2, 4, 4), "tangent": (1, 1, 1), "exterior": (0, 0, 4)}


def stratified_conics(ctx, total: int):
    """(kind, O) pairs, the same number of each l_inf type."""
    per = -(-total // len(KINDS))
    return [(kind, random_conic(ctx.T, ctx.rng, kind)) for _ in range(per) for kind in KINDS]


def g_rows(frame, level: int) -> tuple[list[int], np.ndarray]:
    """The parameters alpha (INF last) and the points alpha A0 + A1 of g at a level."""
    T = frame.tower
    ft = T.tables()
    F = T.size(level)
    alphas = np.arange(F, dtype=np.int64)
    A0, A1 = np.array(frame.A0, dtype=np.int64), np.array(frame.A1, dtype=np.int64)
    pts = np.empty((F + 1, 5), dtype=np.int64)
    for i in range(5):
        pts[:F, i] = vadd(ft, vmul(ft, alphas, np.full(F, A0[i])), np.full(F, A1[i]))
    pts[F] = A0
    return alphas.tolist() + [INF], pts


def g_hits(Q, alphas, pts) -> set:
    vals = Q.eval_many(pts)
    return {alphas[i] for i in np.flatnonzero(vals == 0).tolist()}


@register("adult-conic-g", "conics/pencil-meets-g",
          "Every member of the pencil of a conic meets g in the points of O ∩ l_inf")
def adult_conic_g(ctx):
    fr = ctx.frame
    alphas, pts = g_rows(fr, Level.STAR)
    for kind, O in stratified_conics(ctx, max(30, ctx.n // 4)):
        pencil = conic_to_pencil(O, fr)
        r = set(linf_meet(O, Level.STAR))
        for t, Q in pencil.members():
            direct = g_hits(Q, alphas, pts)
            ctx.expect(direct == r, "Q_t ∩ g is the dictionary of O ∩ l_inf", kind=kind, t=t,
                       on_g=direct, linf=r)
            ctx.expect(set(pencil_member_on_g(pencil, t, fr)) == r, "pencil_member_on_g", kind=kind, t=t)
        ctx.tally(f"conics[{kind}]")
    # the conic y^2 = xz: the only point of g on any member is A0
    pencil = conic_to_pencil(standard_conic(ctx.T).extend(Level.STAR), fr)
    for t, Q in pencil.members():
        ctx.expect(g_hits(Q, alphas, pts) == {INF}, "y^2 = xz meets g in A0 only", t=t)


@register("cor:PcorrPsigma", "conics/points-of-g",
          "P̄ lies on O exactly when P lies on [O]*; exterior conics meet g* in P, P^(q^2)")
def p_corr_p_sigma(ctx):
    fr, T = ctx.frame, ctx.T
    a2, g2 = g_rows(fr, Level.STAR)
    a4, g4 = g_rows(fr, Level.FOURSTAR)
    F2 = T.size(Level.STAR)
    for kind, O in stratified_conics(ctx, max(15, ctx.n // 10)):
        pencil = conic_to_pencil(O, fr)
        both = lambda al, pts: g_hits(pencil.q_inf, al, pts) & g_hits(pencil.q_0, al, pts)
        r2 = set(linf_meet(O, Level.STAR))
        ctx.expect(both(a2, g2) == r2, "[O]* ∩ g matches O ∩ l_inf", kind=kind, linf=r2)
        r4 = set(linf_meet(O, Level.FOURSTAR))
        hit4 = both(a4, g4)
        ctx.expect(hit4 == r4, "[O]★ ∩ g★ matches O ∩ l_inf over F_q^4", kind=kind, linf=r4)
        if kind == "exterior":
            ctx.expect(len(r4) == 2 and all(a != INF and a >= F2 for a in r4)
                       and {T.frob(a, 2) for a in r4} == r4,
                       "exterior conic meets g★ minus g in P, P^(q^2)", alphas=r4)
        ctx.tally(f"conics[{kind}]")


@register("thm:Ccapsi", "conics/meet-hyperplane-at-infinity",
          "[O] ∩ Sigma_inf by l_inf type, at the levels q, q^2 and q^4")
def c_cap_sigma(ctx):
    fr = ctx.frame
    for kind, O in stratified_conics(ctx, max(102, ctx.n // 2)):
        pencil = conic_to_pencil(O, fr)
        for lvl, expected in zip((Level.BASE, Level.STAR, Level.FOURSTAR), LINE_COUNTS[kind]):
            pts, lines = locus_at_infinity(pencil, lvl, fr)
            pred = predicted_locus(O, lvl, fr)
            ctx.expect(lines == pred, "locus decomposes into the predicted lines", kind=kind,
                       level=lvl.name, found=len(lines), predicted=len(pred))
            ctx.expect(len(lines) == expected, "line count for the type", kind=kind, level=lvl.name,
                       found=len(lines), expected=expected)
        ctx.tally(f"conics[{kind}]")


@register("adult-conic-T", "conics/disjoint-spread-lines",
          "For L̄ off O the extended spread line [L]* misses [O]*")
def adult_conic_t(ctx):
    fr = ctx.frame
    for kind, O in stratified_conics(ctx, max(15, ctx.n // 10)):
        pencil = conic_to_pencil(O, fr)
        r = set(linf_meet(O, Level.STAR))
        for d in ctx.sample(fr.deltas, 30):
            line = fr.spread_line(d).points(Level.STAR)
            on = pencil.base_locus(line)
            if d in r:
                ctx.expect(len(on) == len(line), "[L]* lies in [O]* for L̄ on O", delta=d, kind=kind)
            else:
                ctx.expect(len(on) == 0, "[L]* misses [O]* for L̄ off O", delta=d, kind=kind,
                           meet=rows(on)[:2])
        ctx.tally(f"conics[{kind}]")


def affine_pairs(fr):
    """Affine points of PG(2,q^2) and their images, row for row."""
    T = fr.tower
    F2 = T.size(Level.STAR)
    xy = np.array([(x, y, 1) for x in range(F2) for y in range(F2)], dtype=np.int64)
    return xy, fr.bb_map_rows(xy)


@register("pencil-exactness", "conics/pencil-base-locus",
          "The affine base locus of the pencil of O is the image of the affine part of O")
def pencil_exactness(ctx):
    fr, T = ctx.frame, ctx.T
    xy, img = affine_pairs(fr)
    if ctx.exhaustive and ctx.q <= 3:
        forms = []
        for c in points_array(5, T.size(Level.STAR)).tolist():
            O = QuadricForm.from_array(T, [[c[0], c[3], c[4]], [0, c[1], c[5]], [0, 0, c[2]]],
                                       Level.STAR)
            if is_nondegenerate(O):
                forms.append(("any", O))
    else:
        forms = stratified_conics(ctx, ctx.n)
    for kind, O in forms:
        pencil = conic_to_pencil(O, fr)
        on_O = O.eval_many(xy) == 0
        base = (pencil.q_inf.eval_many(img) == 0) & (pencil.q_0.eval_many(img) == 0)
        ctx.expect(np.array_equal(on_O, base), "affine base locus = bb(O minus l_inf)", kind=kind)
        ctx.tally(f"conics[{kind}]")
