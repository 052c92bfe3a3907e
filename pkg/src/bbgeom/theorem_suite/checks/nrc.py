"""Quadrics through a normal rational curve of PG(4,q) and their extensions."""
from __future__ import annotations

import numpy as np

from ...gf_tower import Level
from ...varieties.curves import RationalCurve, moment_curve
from ...varieties.quadrics import QuadricForm, linear_combination, quadrics_through
from ..core import register
from .frame import random_fq_curve


def composed(Q: QuadricForm, N: RationalCurve) -> list[int]:
    """Coefficients of Q(N(theta)), degree 2 deg N, untrimmed."""
    T = Q.tower
    out = [0] * (2 * N.degree + 1)
    for i in range(Q.n):
        for j in range(i, Q.n):
            c = Q.coeffs[i][j]
            if not c:
                continue
            for k, v in enumerate(T.poly_mul(list(N.coeffs[i]), list(N.coeffs[j]))):
                out[k] = T.add(out[k], T.mul(c, v))
    return out


@register("lem:nrc-extn", "normal-rational-curves/quadric-extension",
          "A quadric containing a 4-dimensional normal rational curve contains its extension",
          min_q=8, hypothesis="requires q>7")
def nrc_extension(ctx):
    T = ctx.T
    for _ in range(max(100, ctx.count() // 2)):
        N = random_fq_curve(ctx, 4)
        forms = quadrics_through(T, N.points(Level.BASE))
        ctx.expect(len(forms) == 6, "quadrics through q+1 points of an NRC4 form a 6-space", found=len(forms))
        while True:
            coeffs = [ctx.randint(T.q) for _ in forms]
            if any(coeffs):
                break
        Q = linear_combination(T, forms, coeffs)
        ctx.expect(not any(composed(Q, N)), "Q(N(theta)) is the zero polynomial", curve=N.coeffs)
        vals = Q.eval_many(N.points(Level.STAR))
        ctx.expect(bool(np.all(vals == 0)), "the extended curve lies on the extended quadric",
                   off=int(np.count_nonzero(vals)))
        ctx.tally("curves")


def tight_quadric(T) -> QuadricForm:
    """-x0 x1 - x3^2 + x2 x4 + x3 x4."""
    m1 = T.neg(1)
    arr = [[0] * 5 for _ in range(5)]
    arr[0][1], arr[3][3], arr[2][4], arr[3][4] = m1, m1, 1, 1
    return QuadricForm(T, tuple(map(tuple, arr)))


@register("lem:nrc-extn-tight", "normal-rational-curves/quadric-extension-tight",
          "Over F_7 the moment curve lies on a quadric whose extension misses most of its extension",
          only_q=(7,))
def nrc_extension_tight(ctx):
    T = ctx.T
    N = moment_curve(T, 4)
    Q = tight_quadric(T)
    poly = composed(Q, N)
    expected = [0, T.neg(1)] + [0] * 5 + [1, 0]
    ctx.expect(poly == expected, "Q(P_theta) = theta^7 - theta", found=poly)
    ctx.expect(bool(np.all(Q.eval_many(N.points(Level.BASE)) == 0)), "N lies on Q over F_7")
    tau = T.tau
    ctx.expect(Q(N.point(tau)) != 0, "P_tau is off the extended quadric", tau=tau)
    off = int(np.count_nonzero(Q.eval_many(N.points(Level.STAR))))
    ctx.expect(off == T.q ** 2 - T.q, "extension points off the quadric", off=off)
    ctx.note("points_off_quadric", off)
