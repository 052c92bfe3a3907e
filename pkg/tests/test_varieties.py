from itertools import combinations
from math import comb

import numpy as np
import pytest

from bbgeom import INF, Level, make_frame, make_tower
from bbgeom.projective import encode_rows, normalize, points_array
from bbgeom.varieties.baer import (all_fq_conics, all_sublines, baer_closure, baer_subplane_through,
                                   fq_conic_through)
from bbgeom.varieties.conics import (DegenerateError, conic_through, conic_to_pencil, infinity_type,
                                     linf_meet, random_conic, standard_conic)
from bbgeom.varieties.pencils import is_baer_subline_by_cross_ratio
from bbgeom.varieties.reguli import circle_partition, regulus_through
from bbgeom.varieties.ruled import census_expected, hyperplane_census, random_ruled_cubic


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pencil_of_standard_conic(q):
    fr = make_frame(q)
    T = fr.tower
    P = conic_to_pencil(standard_conic(T), fr)
    m, a = T.mul, T.add
    # y^2 - xz with tau^2 = t1 tau + t0, split over {1, tau}
    for X in points_array(4, q).tolist():
        x0, x1, y0, y1, z = X
        f_inf = T.sub(a(m(y0, y0), m(T.t0, m(y1, y1))), m(x0, z))
        f_0 = T.sub(a(m(T.from_int(2), m(y0, y1)), m(T.t1, m(y1, y1))), m(x1, z))
        assert P.q_inf(X) == f_inf and P.q_0(X) == f_0


@pytest.mark.parametrize("q", [3, 4])
def test_pencil_base_locus_is_image_of_conic(q):
    fr = make_frame(q)
    T = fr.tower
    O = random_conic(T, np.random.default_rng(q))
    aff = O.points(Level.STAR)
    aff = aff[aff[:, 2] != 0]
    image = {normalize(T, fr.bb_map(tuple(p))) for p in aff.tolist()}
    base = conic_to_pencil(O, fr).base_locus(fr.affine_points)
    assert {tuple(r) for r in base.tolist()} == image


@pytest.mark.parametrize("q,expected", [(3, (3, 4, 6, 36, 72)), (4, (6, 5, 10, 80, 240))])
def test_hyperplane_census(q, expected):
    assert census_expected(q) == expected
    T = make_tower(q)
    rng = np.random.default_rng(q)
    for _ in range(2):
        res = hyperplane_census(random_ruled_cubic(T, rng))
        assert res["counts"] == expected
        assert res["types_ok"] and res["twisted_cubic_meets_each_generator_once"]
        assert sum(expected) == len(points_array(4, q))


def test_adult_baby_exhaustive_q3():
    T = make_tower(3)
    O = random_conic(T, np.random.default_rng(0))
    pts = [tuple(r) for r in O.points(Level.STAR).tolist()]
    assert len(pts) == 10
    keys = {fq_conic_through(O, tri).key for tri in combinations(pts, 3)}
    assert len(keys) == 30
    assert {C.key for C in all_fq_conics(O)} == keys


@pytest.mark.parametrize("q", [4, 5])
def test_adult_baby_double_count(q):
    # each F_q-conic holds C(q+1,3) triples and each triple lies in exactly one
    assert comb(q * q + 1, 3) == q * (q * q + 1) * comb(q + 1, 3)
    T = make_tower(q)
    assert len(all_sublines(T)) == q * (q * q + 1)


@pytest.mark.parametrize("q", [2, 3])
def test_baer_frame_matches_closure(q):
    T = make_tower(q)
    rng = np.random.default_rng(q)
    F = q * q
    done = 0
    while done < 3:
        pts = points_array(2, F)
        quad = [tuple(pts[i].tolist()) for i in rng.choice(len(pts), 4, replace=False)]
        try:
            B = baer_subplane_through(T, quad)
        except DegenerateError:
            continue
        closure = baer_closure(T, quad)
        assert {tuple(r) for r in B.points.tolist()} == set(closure)
        assert len(closure) == q * q + q + 1
        assert B.line_profile_ok
        assert B.infinity_type in ("tangent", "secant")
        done += 1


def test_cross_ratio_agrees_with_sublines():
    T = make_tower(3)
    params = [INF] + list(range(9))
    subs = set(all_sublines(T))
    for four in combinations(params, 4):
        pts = [(1, 0) if t == INF else (t, 1) for t in four]
        in_one = any(set(four) <= s for s in subs)
        assert is_baer_subline_by_cross_ratio(T, pts) == in_one


@pytest.mark.parametrize("q", [3, 4, 5])
def test_circle_partition(q):
    fr = make_frame(q)
    circles = circle_partition(fr, 0, INF)
    assert len(circles) == q - 1
    assert all(len(c) == q + 1 for c in circles)
    union = set().union(*circles)
    assert len(union) == q * q - 1 and not union & {0, INF}
    for c in circles:
        ds = sorted(c)
        reg = regulus_through(*(fr.spread_line(d) for d in ds[:3]))
        assert {fr.delta_of_line(l) for l in reg.lines} == set(c)


def test_conic_through_errors():
    T = make_tower(3)
    with pytest.raises(DegenerateError):
        conic_through(T, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    with pytest.raises(DegenerateError):
        conic_through(T, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 2, 1)])


def test_conic_through_recovers_conic():
    T = make_tower(4)
    O = random_conic(T, np.random.default_rng(1))
    pts = [tuple(r) for r in O.points(Level.STAR).tolist()]
    R = conic_through(T, pts[:5])
    assert all(R(P) == 0 for P in pts)


@pytest.mark.parametrize("kind,n", [("secant", 2), ("tangent", 1), ("exterior", 0)])
def test_infinity_types(kind, n):
    T = make_tower(5)
    O = random_conic(T, np.random.default_rng(7), kind=kind)
    assert infinity_type(O) == kind
    assert len(set(linf_meet(O))) == n
    pts = O.points(Level.STAR)
    assert np.count_nonzero(pts[:, 2] == 0) == n
    assert len(encode_rows(pts, 25)) == 26
