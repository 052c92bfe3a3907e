"""l_inf-Baer pencils, their 3-spaces, and partitions of tangent Baer subplanes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bruckbose import BruckBoseFrame
from ..gf_tower import INF, FieldTower, Level
from ..projective import (Subspace, encode_rows, meet, normalize, nullspace, points_array, rank,
                          span, subspace)
from .baer import (BaerPencil, BaerSubplane, FqConic, baer_subline_through, fq_conic_in_subplane,
                   solve)
from .conics import DegenerateError, no_three_collinear
from .quadrics import matmul_codes

SIGMA_FORM = (0, 0, 0, 0, 1)


def cross_ratio(T: FieldTower, a, b, c, d) -> int:
    """(a, b; c, d) of four parameters on PG(1), INF allowed, as a code or INF."""
    def diff(x, y):
        if x == INF and y == INF:
            return 0
        if x == INF or y == INF:
            return INF
        return T.sub(x, y)
    num = [diff(c, a), diff(d, b)]
    den = [diff(c, b), diff(d, a)]
    n_inf, d_inf = num.count(INF), den.count(INF)
    num = [x for x in num if x != INF]
    den = [x for x in den if x != INF]
    if n_inf > d_inf:
        return INF
    if d_inf > n_inf:
        return 0
    nv, dv = 1, 1
    for x in num:
        nv = T.mul(nv, x)
    for x in den:
        dv = T.mul(dv, x)
    if dv == 0:
        return INF
    return T.div(nv, dv)


def line_params(T: FieldTower, pts) -> list:
    """Affine parameters of collinear points on the line through the first two."""
    pts = [tuple(p) for p in pts]
    U, V = pts[0], pts[1]
    out = []
    for X in pts:
        s, t = solve(T, [U, V], X)
        out.append(INF if s == 0 else T.div(t, s))
    return out


def is_baer_subline_by_cross_ratio(T: FieldTower, pts) -> bool:
    """q + 1 collinear points form a Baer subline iff every cross-ratio with
    the first three lies in F_q."""
    pts = [tuple(p) for p in pts]
    if len(set(pts)) != T.q + 1 or rank(T, pts) != 2:
        return False
    th = line_params(T, pts)
    a, b, c = th[:3]
    for d in th[3:]:
        cr = cross_ratio(T, a, b, c, d)
        if cr != INF and cr >= T.q:
            return False
    return True


# ---------------------------------------------------------------------------
# 3-spaces and l_inf-Baer pencils


def spread_delta_in(frame: BruckBoseFrame, form) -> int:
    """The unique spread line inside the hyperplane form . x = 0 (form != Sigma_inf)."""
    T = frame.tower
    ds = [d for d in frame.deltas
          if all(_dot(T, form, r) == 0 for r in frame.spread_line(d).basis)]
    if len(ds) != 1:
        raise AssertionError(f"hyperplane contains {len(ds)} spread lines")
    return ds[0]


def _dot(T, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = T.add(acc, T.mul(x, y))
    return acc


def hyperplane_affine_points(frame: BruckBoseFrame, form) -> np.ndarray:
    aff = frame.affine_points
    vals = matmul_codes(frame.tower, aff, np.array([form]).T)[:, 0]
    return aff[vals == 0]


def ell_inf_pencil_of_3space(frame: BruckBoseFrame, form) -> BaerPencil:
    """The l_inf-Baer pencil of PG(2,q^2) named by a hyperplane of PG(4,q)."""
    T = frame.tower
    if normalize(T, form) == SIGMA_FORM:
        raise ValueError("Sigma_inf has no pencil")
    d = spread_delta_in(frame, form)
    vertex = frame.linf_point(d)
    aff = frame.bb_unmap_rows(hyperplane_affine_points(frame, form))
    A = tuple(aff[0].tolist())
    # a second affine point off the line A vertex
    for row in aff[1:].tolist():
        if rank(T, [A, tuple(row), vertex]) == 3:
            B = tuple(row)
            break
    m = span([A, B], T)
    W = normalize(T, meet(m, frame.ell_inf.extend(Level.STAR)).basis[0])
    base = baer_subline_through(T, [W, A, B])
    return BaerPencil(T, vertex, base)


def three_space_of_pencil(frame: BruckBoseFrame, pencil: BaerPencil) -> tuple:
    """The hyperplane form of PG(4,q) spanned by the image of the pencil."""
    T = frame.tower
    if not pencil.ell_inf_pencil:
        raise ValueError("not an l_inf-Baer pencil")
    img = frame.bb_map_rows(pencil.affine_points)
    S = span([tuple(r) for r in img.tolist()], T)
    if S.proj_dim != 3:
        raise AssertionError("pencil image does not span a 3-space")
    form = normalize(T, S.annihilator()[0])
    d = frame.alpha_of_linf(pencil.vertex)
    if not S.contains(frame.spread_line(d)):
        raise AssertionError("3-space misses the vertex spread line")
    return form


def random_ell_inf_pencil(frame: BruckBoseFrame, rng) -> BaerPencil:
    T = frame.tower
    F = T.size(Level.STAR)
    while True:
        d = frame.deltas[int(rng.integers(len(frame.deltas)))]
        w = frame.deltas[int(rng.integers(len(frame.deltas)))]
        if w == d:
            continue
        vertex, W = frame.linf_point(d), frame.linf_point(w)
        A = (int(rng.integers(F)), int(rng.integers(F)), 1)
        t = int(rng.integers(1, F))
        B = normalize(T, tuple(T.add(a, T.mul(t, x)) for a, x in zip(A, W)))
        return BaerPencil(T, vertex, baer_subline_through(T, [W, A, B]))


def pencil_meets_line_in_subline(pencil: BaerPencil, line_form) -> bool:
    """The pencil lines meet a line not through the vertex in a Baer subline."""
    T = pencil.tower
    L = subspace(T, nullspace(T, [tuple(line_form)], 3))
    pts = [normalize(T, meet(l, L.extend(Level.STAR)).basis[0]) for l in pencil.lines]
    return is_baer_subline_by_cross_ratio(T, pts)


def hyperplanes_containing(frame: BruckBoseFrame, S: Subspace) -> list[tuple]:
    """Forms of the hyperplanes through a subspace, Sigma_inf excluded."""
    T = frame.tower
    ann = S.annihilator()
    out = []
    for c in points_array(len(ann) - 1, T.q).tolist():
        form = [0] * 5
        for coef, h in zip(c, ann):
            if coef:
                form = [T.add(a, T.mul(coef, b)) for a, b in zip(form, h)]
        form = normalize(T, form)
        if form != SIGMA_FORM:
            out.append(form)
    return sorted(out)


# ---------------------------------------------------------------------------
# cells of a tangent Baer subplane cut by a pencil


@dataclass
class Cell:
    form: tuple
    points: list            # affine points of B (PG(2,q^2) coordinates)
    kind: str               # "conic", "line pair" or "other"
    conic: FqConic | None = None
    lines: list = field(default_factory=list)   # for a line pair: point sets
    through_vertex: bool | None = None          # C+ or the line-pair extension meets the vertex


def _line_of(T, pts):
    return span([tuple(p) for p in pts], T)


def classify_cell(B: BaerSubplane, pts, vertex) -> Cell:
    """A set of affine points of a tangent B, completed by T̄, as a conic or a line pair."""
    T = B.tower
    Tbar = B.tangent_point
    pts = sorted(tuple(p) for p in pts)
    full = pts + [Tbar]
    q = T.q
    if len(pts) == q and no_three_collinear(T, full):
        try:
            C = fq_conic_in_subplane(B, full)
        except DegenerateError:
            return Cell(None, pts, "other")
        if set(map(tuple, C.points.tolist())) == set(full):
            return Cell(None, pts, "conic", conic=C, through_vertex=C.cplus(vertex) == 0)
        return Cell(None, pts, "other")
    if len(pts) == 2 * q:
        keys = set(full)
        for line in B.lines_through(Tbar):
            lk = set(map(tuple, line.tolist()))
            if not lk <= keys:
                continue
            rest = keys - lk
            if len(rest) != q:
                continue
            L2 = _line_of(T, list(rest))
            if L2.proj_dim != 1:
                continue
            on = [tuple(r) for r in B.points.tolist() if L2.contains(r)]
            if len(on) == q + 1 and set(on) <= keys and not L2.contains(Tbar):
                return Cell(None, pts, "line pair", lines=[sorted(lk), sorted(on)],
                            through_vertex=L2.contains(vertex))
    return Cell(None, pts, "other")


def pencil_cells(frame: BruckBoseFrame, B: BaerSubplane, forms, vertex) -> list[Cell]:
    aff_B = B.affine_points
    img = frame.bb_map_rows(aff_B)
    out = []
    for form in forms:
        vals = matmul_codes(frame.tower, img, np.array([form]).T)[:, 0]
        pts = aff_B[vals == 0]
        cell = classify_cell(B, [tuple(r) for r in pts.tolist()], vertex)
        cell.form = tuple(form)
        out.append(cell)
    return out


def pencils_about_vertex(frame: BruckBoseFrame, B: BaerSubplane, dP) -> dict:
    """Cells of B cut by every l_inf-Baer pencil with vertex dP (a 3-space through [P])."""
    vertex = frame.linf_point(dP)
    forms = hyperplanes_containing(frame, frame.spread_line(dP))
    cells = pencil_cells(frame, B, forms, vertex)
    kinds = [c.kind for c in cells]
    Tbar = B.tangent_point
    pair_lines = sorted(tuple(c.lines[0]) for c in cells if c.kind == "line pair")
    through_T = sorted(tuple(map(tuple, l.tolist())) for l in B.lines_through(Tbar))
    return {
        "pencils": len(cells),
        "conics": kinds.count("conic"),
        "line_pairs": kinds.count("line pair"),
        "other": kinds.count("other"),
        "each_line_through_T_once": pair_lines == through_T,
        "pair_second_line_through_vertex": all(c.through_vertex for c in cells if c.kind == "line pair"),
        "conics_through_vertex": all(c.through_vertex for c in cells if c.kind == "conic"),
        "cells": cells,
    }


def partition_tangent_subplane(frame: BruckBoseFrame, B: BaerSubplane, m_points, dP) -> list[Cell]:
    """The q cells cut on B by the 3-spaces about <X, [P]>, X = [m] ∩ [T]."""
    T = frame.tower
    Tbar = B.tangent_point
    dT = frame.alpha_of_linf(Tbar)
    if dP == dT:
        raise ValueError("vertex must differ from the tangent point")
    aff = [tuple(p) for p in m_points if p[2] != 0]
    if Tbar not in [tuple(p) for p in m_points] or len(aff) != T.q:
        raise ValueError("m must be a line of B through the tangent point")
    gen = span([frame.bb_map(A) for A in aff], T)
    X = meet(gen, frame.spread_line(dT))
    if X.proj_dim != 0:
        raise AssertionError("[m] does not meet [T] in a point")
    alpha = span([X, frame.spread_line(dP)], T)
    forms = hyperplanes_containing(frame, alpha)
    return pencil_cells(frame, B, forms, frame.linf_point(dP))


def partition_summary(frame: BruckBoseFrame, B: BaerSubplane, cells: list[Cell]) -> dict:
    q = frame.q
    allpts = [p for c in cells for p in c.points]
    aff_B = set(map(tuple, B.affine_points.tolist()))
    kinds = [c.kind for c in cells]
    return {
        "cells": len(cells),
        "sizes": sorted(len(c.points) for c in cells),
        "degenerate_size": [len(c.points) for c in cells if c.kind == "line pair"],
        "partition_ok": len(allpts) == len(set(allpts)) and set(allpts) == aff_B,
        "one_degenerate": kinds.count("line pair") == 1 and kinds.count("conic") == q - 1,
        "through_vertex": all(c.through_vertex for c in cells if c.kind in ("conic", "line pair")),
    }


def pencil_of_conic_through_T(frame: BruckBoseFrame, C: FqConic) -> dict:
    """For C through T̄ in a tangent B: the 3-space of [C], its vertex, and whether
    C+ passes through that vertex."""
    from .curves import curve_of_fq_conic
    T = frame.tower
    N = curve_of_fq_conic(frame, C)
    S = N.span()
    if S.proj_dim != 3:
        return {"ok": False, "reason": f"[C] spans dimension {S.proj_dim}"}
    form = normalize(T, S.annihilator()[0])
    d = spread_delta_in(frame, form)
    vertex = frame.linf_point(d)
    aff = frame.bb_unmap_rows(hyperplane_affine_points(frame, form))
    keys = set(map(tuple, aff.tolist()))
    inside = all(tuple(p) in keys for p in C.points.tolist() if p[2] != 0)
    return {"ok": inside and C.cplus(vertex) == 0, "vertex_delta": d, "form": form,
            "inside": inside, "vertex_on_cplus": C.cplus(vertex) == 0}
