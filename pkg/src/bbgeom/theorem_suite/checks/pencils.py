"""3-spaces of PG(4,q) as l_inf-Baer pencils, and the partitions they cut on tangent subplanes."""
from __future__ import annotations

import numpy as np

from ...gf_tower import Level
from ...projective import dot, normalize, points_array
from ...varieties.conics import linf_meet
from ...varieties.pencils import (SIGMA_FORM, ell_inf_pencil_of_3space, hyperplane_affine_points,
                                  partition_summary, partition_tangent_subplane, pencil_meets_line_in_subline,
                                  pencil_of_conic_through_T, pencils_about_vertex, random_ell_inf_pencil,
                                  spread_delta_in, three_space_of_pencil)
from ...varieties.quadrics import matmul_codes
from ..core import register
from ..instances import SMALL_CONIC, fq_conic, random_delta, rows, tangent_subplane

def line_missing(ctx, X) -> tuple:
    """A random line form of PG(2,q^2) not through X."""
    T = ctx.T
    F = T.size(Level.STAR)
    while True:
        form = (ctx.randint(F), ctx.randint(F), ctx.randint(F))
        if dot(T, form, X) != 0:
            return form


@register("lemma-3-Baer", "baer-pencils/three-spaces",
          "A 3-space other than Sigma_inf is an l_inf-Baer pencil with vertex its spread line, and back")
def lemma_3_baer(ctx):
    fr, T = ctx.frame, ctx.T
    q = T.q
    forms = [tuple(f) for f in points_array(4, q).tolist() if tuple(f) != SIGMA_FORM]
    for form in ctx.sample(forms, max(20, ctx.count() // 10)):
        pencil = ell_inf_pencil_of_3space(fr, form)
        d = spread_delta_in(fr, form)
        ctx.expect(pencil.ell_inf_pencil and pencil.vertex == fr.linf_point(d),
                   "an l_inf-Baer pencil with vertex the spread line in the 3-space", form=form)
        behind = set(rows(fr.bb_unmap_rows(hyperplane_affine_points(fr, form))))
        own = set(rows(pencil.affine_points))
        ctx.expect(own == behind and len(own) == q ** 3, "affine points of the pencil are the 3-space",
                   form=form, pencil=len(own), space=len(behind))
        ctx.expect(three_space_of_pencil(fr, pencil) == normalize(T, form), "round trip", form=form)
        ctx.expect(pencil_meets_line_in_subline(pencil, line_missing(ctx, pencil.vertex)),
                   "a line off the vertex meets the pencil in a Baer subline", form=form)
        ctx.tally("three_spaces")
    for _ in range(max(20, ctx.count() // 10)):
        pencil = random_ell_inf_pencil(fr, ctx.rng)
        form = three_space_of_pencil(fr, pencil)
        back = ell_inf_pencil_of_3space(fr, form)
        ctx.expect(set(rows(back.affine_points)) == set(rows(pencil.affine_points))
                   and back.vertex == pencil.vertex, "a pencil is the pencil of its 3-space", form=form)
        ctx.tally("pencils")


@register("thm:partition-intro", "baer-pencils/tangent-subplane-sections",
          "Pencils with vertex P̄ ≠ T̄ meet a tangent B in q^2-1 conics through T̄ and q+1 line pairs",
          min_q=3, hypothesis=SMALL_CONIC, observe_from=2)
def partition_intro(ctx):
    fr, T = ctx.frame, ctx.T
    q = T.q
    for _ in range(max(5, ctx.count() // 40)):
        B = tangent_subplane(ctx)
        dT = fr.alpha_of_linf(B.tangent_point)
        dP = random_delta(ctx, exclude=(dT,))
        res = pencils_about_vertex(fr, B, dP)
        counts = {k: res[k] for k in ("pencils", "conics", "line_pairs", "other")}
        ctx.expect(counts == {"pencils": q * q + q, "conics": q * q - 1, "line_pairs": q + 1, "other": 0},
                   "section counts", dT=dT, dP=dP, **counts)
        for flag in ("each_line_through_T_once", "pair_second_line_through_vertex", "conics_through_vertex"):
            ctx.expect(res[flag], flag.replace("_", " "), dT=dT, dP=dP)
        second = {tuple(c.lines[1]) for c in res["cells"] if c.kind == "line pair"}
        ctx.expect(len(second) == 1, "one line of B extends through P̄", found=len(second))
        ctx.tally("subplanes")


@register("cor:tgt-baby", "baer-pencils/conics-through-tangent-point",
          "A conic of a tangent B through T̄ lies in one l_inf-Baer pencil whose vertex is on its extension")
def tgt_baby(ctx):
    fr = ctx.frame
    for k in range(max(20, ctx.count() // 10)):
        if k % 5 == 0:
            B = tangent_subplane(ctx)
        dT = fr.alpha_of_linf(B.tangent_point)
        C = fq_conic(ctx, B, through_T=True)
        res = pencil_of_conic_through_T(fr, C)
        if not ctx.expect(res["ok"], "[C] spans a 3-space whose vertex lies on C+",
                          **{k2: v for k2, v in res.items() if k2 != "ok"}):
            continue
        other = [d for d in linf_meet(C.cplus) if d != dT]
        ctx.expect(other == [res["vertex_delta"]], "the vertex is the second point of C+ on l_inf",
                   vertex=res["vertex_delta"], linf=linf_meet(C.cplus))
        pencil = ell_inf_pencil_of_3space(fr, res["form"])
        inside = set(rows(pencil.affine_points))
        ctx.expect(all(tuple(p) in inside for p in rows(C.points) if p[2] != 0),
                   "C lies in the pencil")
        ctx.tally("conics")


@register("thm:partition", "baer-pencils/partition",
          "q pencils about <X, [P]> split the affine points of B into q conics through T̄, one degenerate",
          min_q=3, hypothesis=SMALL_CONIC, observe_from=2)
def partition(ctx):
    fr, T = ctx.frame, ctx.T
    q = T.q
    aff4 = fr.affine_points
    for _ in range(max(20, ctx.count() // 10)):
        B = tangent_subplane(ctx)
        Tbar = B.tangent_point
        dT = fr.alpha_of_linf(Tbar)
        lines = B.lines_through(Tbar)
        m = lines[ctx.randint(len(lines))]
        dP = random_delta(ctx, exclude=(dT,))
        cells = partition_tangent_subplane(fr, B, rows(m), dP)
        s = partition_summary(fr, B, cells)
        ctx.expect(s["cells"] == q and s["partition_ok"] and s["one_degenerate"] and s["through_vertex"],
                   "q cells partition B minus T̄, one degenerate, all through P̄", dT=dT, dP=dP,
                   **{k: s[k] for k in ("cells", "partition_ok", "one_degenerate", "through_vertex")})
        ctx.expect(s["degenerate_size"] == [2 * q] and s["sizes"] == [q] * (q - 1) + [2 * q],
                   "cell sizes", sizes=s["sizes"])
        forms = np.array([c.form for c in cells]).T
        hits = np.count_nonzero(matmul_codes(T, aff4, forms) == 0, axis=1)
        ctx.expect(bool(np.all(hits == 1)), "the q 3-spaces partition the affine points",
                   multiplicities=sorted(set(hits.tolist())))
        ctx.tally("subplanes")

