"""Ruled cubic surfaces: the hyperplane census and the two extensions."""
from __future__ import annotations

from ...gf_tower import Level
from ...projective import rank
from ...varieties.ruled import census_expected, hyperplane_census, random_ruled_cubic
from ...varieties.ruled import ruled_cubic_from_tangent_subplane
from ..core import register
from ..instances import rows, tangent_subplane


def surfaces(ctx, n_random: int):
    out = [random_ruled_cubic(ctx.T, ctx.rng) for _ in range(n_random)]
    out.append(ruled_cubic_from_tangent_subplane(tangent_subplane(ctx), ctx.frame, ctx.rng))
    return out


@register("3-space-meets-ruled", "ruled-cubics/hyperplane-census",
          "Every hyperplane meets a ruled cubic surface in one of five ways, with fixed counts")
def census(ctx):
    expected = census_expected(ctx.q)
    counts = None
    for V in surfaces(ctx, 5):
        res = hyperplane_census(V)
        counts = res["counts"]
        ctx.expect(res["counts"] == expected, "census counts", counts=res["counts"], expected=expected,
                   surface=(V.T0, V.T1, V.K, V.omega))
        ctx.expect(res["types_ok"], "every section has a listed type", bad=res["bad_hyperplane"])
        ctx.tally("surfaces")
    ctx.note("counts", list(counts))


@register("lem:tc-brs", "ruled-cubics/twisted-cubic-sections",
          "A twisted cubic section meets each generator in one point")
def tc_generators(ctx):
    for V in surfaces(ctx, 2):
        res = hyperplane_census(V)
        ctx.expect(res["twisted_cubic_meets_each_generator_once"], "twisted cubic meets generators once",
                   surface=(V.T0, V.T1, V.K, V.omega))
        ctx.tally("twisted_cubic_sections", res["counts"][4])


@register("ruled-extension-agreement", "ruled-cubics/extensions",
          "Extending by equations and by the parametrization give the same point set",
          only_q=(3, 4, 5))
def extension_agreement(ctx):
    fr = ctx.frame
    for k, V in enumerate(surfaces(ctx, 2)):
        fitted = V.quadrics_through_points()
        if ctx.q > 3:
            vecs = [tuple(c for r in Q.coeffs for c in r) for Q in fitted + V.equations]
            ctx.expect(len(fitted) == 3 and rank(ctx.T, vecs) == 3,
                       "the minors span the quadrics through the F_q points", fitted=len(fitted))
        else:
            ctx.tally("quadrics_through_points", len(fitted))
        for lvl in (Level.BASE, Level.STAR):
            by_eq = set(rows(V.points_by_equations(lvl)))
            by_par = set(rows(V.points(lvl)))
            ctx.expect(by_eq == by_par, "equations and parametrization agree", level=lvl.name,
                       eq_only=sorted(by_eq - by_par)[:3], par_only=sorted(by_par - by_eq)[:3])
            ctx.tally(f"points[{lvl.name}]", len(by_par))
        if k == 2:
            ctx.expect(V.contains_line(fr.g) and V.contains_line(fr.gq),
                       "the surface of a tangent subplane contains g and g^q")
