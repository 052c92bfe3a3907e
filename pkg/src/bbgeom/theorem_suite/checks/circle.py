"""Circle partitions of a secant conic and of the spread, and the reguli of S
against the transversals and the hyperbolic congruence of g, g^q."""
from __future__ import annotations

import numpy as np

from ...gf_tower import Level
from ...projective import frob_vec, meet, span
from ...varieties.baer import all_fq_conics, baer_subline_through, fq_conic_through, mobius_apply, mobius_through
from ...varieties.conics import is_nondegenerate, linf_meet, parametrize, random_conic
from ...varieties.quadrics import matmul_codes
from ...varieties.reguli import (circle_check, conics_through_conjugate_pair, hyperbolic_lines, norm,
                                 plane_coords, plane_form, regulus_quadric, sigma_planes, spread_reguli)
from ..core import register
from ..instances import random_delta, secant_subplane
from .baer import image_set


def exact_covers(universe: frozenset, blocks: list[frozenset], limit: int = 10) -> int:
    """Number of partitions of the universe into blocks (stops counting at limit)."""
    blocks = [b for b in set(blocks) if b <= universe]

    def count(left: frozenset) -> int:
        if not left:
            return 1
        x = min(left)
        total = 0
        for b in blocks:
            if x in b and b <= left:
                total += count(left - b)
                if total >= limit:
                    break
        return total

    return count(universe)


def secant_circles(fr, O):
    """The q - 1 parameter circles of a secant conic O, as point sets of O."""
    T = O.tower
    q = T.q
    par = parametrize(O)
    dP, dQ = linf_meet(O)
    thP, thQ = (par.theta(fr.linf_point(d)) for d in (dP, dQ))
    other = next(t for t in range(q * q) if t not in (thP, thQ))
    mu = mobius_through(T, thP, thQ, other)
    circles = {c: set() for c in range(1, q)}
    for x in range(1, q * q):
        circles[norm(T, x)].add(par.point(mobius_apply(T, mu, x)))
    return [frozenset(c) for c in circles.values()]


@register("part-sec-conic", "circle-geometry/secant-conic-partition",
          "The affine points of a secant conic split uniquely into q-1 subconics of secant subplanes")
def part_sec_conic(ctx):
    T = ctx.T
    q = T.q
    for _ in range(max(5, ctx.count() // 40)):
        O = random_conic(T, ctx.rng, "secant")
        affine = frozenset(tuple(r) for r in O.points(Level.STAR).tolist() if r[2] != 0)
        circles = secant_circles(ctx.frame, O)
        ctx.expect(len(circles) == q - 1 and frozenset().union(*circles) == affine
                   and all(len(c) == q + 1 for c in circles),
                   "the circles partition the affine points", sizes=sorted(map(len, circles)))
        sublines = []
        for circ in circles:
            C = fq_conic_through(O, sorted(circ)[:3])
            ctx.expect(C.key == circ, "a circle is a subconic of O", circle=sorted(circ)[:3])
            ctx.expect(C.host.infinity_type == "secant", "the host subplane is secant")
            sublines.append(C.host.linf_subline.key)
        ctx.expect(all(a == b or not (a & b) for a in sublines for b in sublines),
                   "host sublines on l_inf are equal or disjoint")
        if q <= 5:
            blocks = [C.key for C in all_fq_conics(O)
                      if C.host.infinity_type == "secant" and C.key <= affine]
            n = exact_covers(affine, blocks)
            ctx.expect(n == 1, "the partition into secant subconics is unique", covers=n)
            ctx.tally("uniqueness_checked")
        ctx.tally("conics")


@register("res:circle", "circle-geometry/spread-partition",
          "S minus two lines splits uniquely into q-1 reguli whose opposites give a spread with "
          "transversals PQ^q, P^qQ")
def res_circle(ctx):
    fr = ctx.frame
    T = ctx.T
    q = T.q
    pairs = [(a, b) for a in fr.deltas for b in fr.deltas if a != b]
    if not (ctx.exhaustive or q <= 3):
        pairs = ctx.sample(pairs, max(10, ctx.count() // 20))
    keys = list(spread_reguli(fr)) if q <= 5 else []
    for k, (dP, dQ) in enumerate(pairs):
        res = circle_check(fr, dP, dQ)
        ctx.expect(res["passed"], "circle partition, swapped spread and its transversals", dP=dP, dQ=dQ,
                   **{k2: v for k2, v in res.items() if k2 != "passed"})
        if keys and k < 5:
            rest = frozenset(fr.deltas) - {dP, dQ}
            n = exact_covers(rest, keys)
            ctx.expect(n == 1, "the partition into reguli is unique", dP=dP, dQ=dQ, covers=n)
            ctx.tally("uniqueness_checked")
        ctx.tally("pairs")


def plane_section(T, reg_pts, plane) -> np.ndarray:
    vals = matmul_codes(T, reg_pts[:, :4], np.array([plane.form]).T)[:, 0]
    return reg_pts[vals == 0]


@register("sec3-regulus-special", "specialness/reguli",
          "Non-degenerate conics in reguli of S are exactly the g-special conics of Sigma_inf")
def regulus_special(ctx):
    fr, T = ctx.frame, ctx.T
    q = T.q
    regs = spread_reguli(fr)
    planes = sigma_planes(fr)
    if not (ctx.exhaustive or q <= 5):
        planes = ctx.sample(planes, 12)
    forward = set()
    for key, reg in regs.items():
        pts = reg.points()
        Q = regulus_quadric(reg)
        n_conic = 0
        for pl in planes:
            sec = plane_section(T, pts, pl)
            if len(sec) != q + 1:
                ctx.expect(len(sec) == 2 * q + 1, "a plane section of a regulus is a conic or two lines",
                           points=len(sec))
                continue
            n_conic += 1
            f = plane_form(T, Q, pl.basis)
            X = fr.g_point(pl.delta)
            ok = (is_nondegenerate(f) and f(plane_coords(T, pl.basis, X)) == 0
                  and f(plane_coords(T, pl.basis, frob_vec(T, X))) == 0)
            ctx.expect(ok, "the section contains g ∩ plane and g^q ∩ plane", plane=pl.form)
            forward.add((key, pl.form))
        if len(planes) == (q ** 4 - 1) // (q - 1):
            ctx.expect(n_conic == q ** 3 - q, "planes meeting the regulus in a conic", found=n_conic)
        ctx.tally("reguli")
    converse = set()
    for pl in planes:
        Xc = plane_coords(T, pl.basis, fr.g_point(pl.delta))
        conics = conics_through_conjugate_pair(T, Xc)
        ctx.expect(len(conics) == q ** 3 - q ** 2, "g-special conics in a plane", found=len(conics))
        for f in conics:
            on = f.points(Level.BASE)
            ds = frozenset(fr.delta_of_point(_combine(T, pl.basis, r)) for r in on.tolist())
            ctx.expect(ds in regs, "a g-special conic lies on lines of a regulus of S",
                       plane=pl.form, deltas=sorted(ds, key=lambda d: (d >= 0, d)))
            converse.add((ds, pl.form))
        ctx.tally("planes")
    ctx.expect(forward == converse, "both directions give the same (regulus, plane) pairs",
               forward_only=len(forward - converse), converse_only=len(converse - forward))
    ctx.tally("pairs", len(forward))


def _combine(T, basis, coeffs) -> tuple:
    out = [0] * len(basis[0])
    for c, row in zip(coeffs, basis):
        if c:
            out = [T.add(o, T.mul(c, x)) for o, x in zip(out, row)]
    return tuple(out)


def random_subline(ctx):
    fr = ctx.frame
    ds = set()
    while len(ds) < 3:
        ds.add(random_delta(ctx))
    return baer_subline_through(ctx.T, [fr.linf_point(d) for d in sorted(ds, key=lambda d: (d >= 0, d))])


@register("thm:Baerline-trans", "hyperbolic-congruence/subline-reguli",
          "For P̄, Q̄ conjugate in a subline b of l_inf, PQ^q and P^qQ are lines of [b]*")
def baerline_trans(ctx):
    fr, T = ctx.frame, ctx.T
    q = T.q
    regs = spread_reguli(fr)
    for _ in range(max(20, ctx.count() // 10)):
        b = random_subline(ctx)
        key = frozenset(fr.alpha_of_linf(tuple(X)) for X in b.points.tolist())
        if not ctx.expect(key in regs, "the deltas of b form a regulus of S"):
            continue
        reg = regs[key]
        Q = regulus_quadric(reg).extend(Level.STAR)
        own = [l.extend(Level.STAR) for l in reg.lines]
        opp = [l.extend(Level.STAR) for l in reg.opposite.lines]
        found = set()
        for dP in fr.deltas:
            if dP in key:
                continue
            dQ = fr.alpha_of_linf(b.conjugate(fr.linf_point(dP)))
            ctx.expect(dQ not in key and dQ != dP, "conjugate of a point off b is another point off b")
            for h in hyperbolic_lines(fr, dP, dQ):
                pts = h.points(Level.STAR)
                ctx.expect(bool(np.all(Q.eval_many(pts[:, :4]) == 0)), "the line lies on the quadric of [b]",
                           dP=dP, dQ=dQ)
                ctx.expect(all(not meet(h, l).is_empty() for l in opp), "meets every opposite line",
                           dP=dP, dQ=dQ)
                ctx.expect(all(meet(h, l).is_empty() for l in own), "skew to the lines of [b]",
                           dP=dP, dQ=dQ)
                found.add(h.basis)
        ctx.expect(len(found) == q * q - q, "q^2 - q such lines in [b]*", found=len(found))
        ctx.tally("sublines")


@register("cor:Baerplane-trans", "hyperbolic-congruence/secant-subplanes",
          "For P̄, Q̄ conjugate with respect to a secant B, PQ^q and P^qQ meet [B]*")
def baerplane_trans(ctx):
    fr, T = ctx.frame, ctx.T
    for _ in range(max(20, ctx.count() // 10)):
        B = secant_subplane(ctx)
        plane = span(list(image_set(fr, B.affine_points)), T).extend(Level.STAR)
        ctx.expect(plane.proj_dim == 2, "[B] is a plane", dim=plane.proj_dim)
        on_b = {fr.alpha_of_linf(tuple(X)) for X in B.linf_points.tolist()}
        for dP in fr.deltas:
            if dP in on_b:
                continue
            P = fr.linf_point(dP)
            Qbar = B.conjugate(P)
            ctx.expect(Qbar[2] == 0 and Qbar == B.linf_subline.conjugate(P),
                       "conjugacy in B agrees with conjugacy in B ∩ l_inf", dP=dP)
            dQ = fr.alpha_of_linf(Qbar)
            for h in hyperbolic_lines(fr, dP, dQ):
                ctx.expect(not meet(h, plane).is_empty(), "the line meets [B]*", dP=dP, dQ=dQ)
        ctx.tally("subplanes")
