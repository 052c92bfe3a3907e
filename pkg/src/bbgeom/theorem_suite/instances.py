"""Random and exhaustive instance generators shared by the checkers."""
from __future__ import annotations

import numpy as np

from ..gf_tower import Level
from ..projective import normalize, points_array, rank
from ..varieties.baer import BaerSubplane, FqConic, baer_subplane_through
from ..varieties.conics import (conic_image, is_nondegenerate, no_three_collinear,
                                normalize_form, standard_conic)
from ..varieties.quadrics import QuadricForm

SMALL_CONIC = "a conic of PG(2,2) has 3 points, too few to fix it"


def affine_point(ctx) -> tuple:
    F = ctx.T.size(Level.STAR)
    return (ctx.randint(F), ctx.randint(F), 1)


def random_delta(ctx, exclude=()) -> int:
    while True:
        d = ctx.frame.deltas[ctx.randint(len(ctx.frame.deltas))]
        if d not in exclude:
            return d


def tangent_subplane(ctx, dT=None) -> BaerSubplane:
    """Baer subplane through T̄ and three random affine points, tangent at T̄."""
    T = ctx.T
    dT = random_delta(ctx) if dT is None else dT
    Tbar = ctx.frame.linf_point(dT)
    while True:
        quad = [Tbar] + [affine_point(ctx) for _ in range(3)]
        if not no_three_collinear(T, quad):
            continue
        B = baer_subplane_through(T, quad)
        if B.infinity_type == "tangent":
            return B


def secant_subplane(ctx) -> BaerSubplane:
    """Baer subplane through two points of l_inf and two affine points."""
    T = ctx.T
    while True:
        dP = random_delta(ctx)
        dQ = random_delta(ctx, exclude=(dP,))
        quad = [ctx.frame.linf_point(dP), ctx.frame.linf_point(dQ), affine_point(ctx), affine_point(ctx)]
        if no_three_collinear(T, quad):
            B = baer_subplane_through(T, quad)
            if B.infinity_type == "secant":
                return B


def random_base_conic(ctx) -> QuadricForm:
    """A uniformly random non-degenerate conic of PG(2,q) (image of y^2 = xz)."""
    T = ctx.T
    std = standard_conic(T)
    while True:
        M = tuple(tuple(ctx.randint(T.q) for _ in range(3)) for _ in range(3))
        if rank(T, M) == 3:
            return conic_image(std, M)


def fq_conic(ctx, B: BaerSubplane, through_T: bool | None = None, max_tries: int = 10_000) -> FqConic:
    """A random F_q-conic of B; through_T selects conics with or without T̄."""
    T = ctx.T
    tf = B.frame_coords(B.tangent_point) if through_T is not None else None
    for _ in range(max_tries):
        form = random_base_conic(ctx)
        if through_T is not None and (form(tf) == 0) != through_T:
            continue
        return FqConic(T, B.M, form)
    raise RuntimeError("no conic of the requested kind")


def all_base_conics(T) -> list[QuadricForm]:
    """Every non-degenerate conic of PG(2,q), normalized, in enumeration order."""
    out = []
    for c in points_array(5, T.q).tolist():
        form = QuadricForm.from_array(T, [[c[0], c[3], c[4]], [0, c[1], c[5]], [0, 0, c[2]]])
        if is_nondegenerate(form):
            out.append(normalize_form(form))
    return out


def fq_conics_of(ctx, B: BaerSubplane, through_T: bool | None) -> list[FqConic]:
    """All F_q-conics of B of a kind (exhaustive mode) or n random ones."""
    if ctx.exhaustive:
        tf = B.frame_coords(B.tangent_point) if through_T is not None else None
        forms = [f for f in all_base_conics(ctx.T)
                 if through_T is None or (f(tf) == 0) == through_T]
        return [FqConic(ctx.T, B.M, f) for f in forms]
    return [fq_conic(ctx, B, through_T) for _ in range(ctx.n)]


def point_key(T, X) -> tuple:
    return tuple(int(c) for c in normalize(T, X))


def rows(a: np.ndarray) -> list[tuple]:
    return [tuple(r) for r in np.asarray(a).tolist()]


def subplane_conics(ctx, total: int, kind: str, through_T: bool | None = None):
    """(B, C) pairs, a fresh subplane of the kind every ten conics.  In
    exhaustive mode: every conic of the requested kind in one subplane."""
    draw = tangent_subplane if kind == "tangent" else secant_subplane
    if ctx.exhaustive:
        B = draw(ctx)
        return [(B, C) for C in fq_conics_of(ctx, B, through_T)]
    out = []
    for i in range(total):
        if i % 10 == 0:
            B = draw(ctx)
        out.append((B, fq_conic(ctx, B, through_T)))
    return out


def pull_back(frame, pts) -> list[tuple]:
    """Points of PG(2,q^2) behind F_q points of PG(4,q): affine points by the
    inverse map, points of Sigma_inf by their spread line."""
    out = []
    for X in pts:
        X = tuple(int(c) for c in X)
        out.append(frame.linf_point(frame.delta_of_point(X)) if X[4] == 0 else frame.bb_unmap(X))
    return out


def quadrangle(T, pts, first=()) -> list[tuple] | None:
    """Four of the points with no three collinear, starting from ``first``."""
    from itertools import combinations
    first = [tuple(p) for p in first]
    rest = [tuple(p) for p in pts if tuple(p) not in first]
    for extra in combinations(rest, 4 - len(first)):
        cand = first + list(extra)
        if no_three_collinear(T, cand):
            return cand
    return None
