import itertools

import numpy as np
import pytest

from bbgeom import Level, make_tower
from bbgeom.projective import (count_points, enumerate_points, hyperplane, meet, normalize,
                               points_array, rank, span, subspace, whole_space)


@pytest.mark.parametrize("n,F,expected", [(1, 3, 4), (4, 3, 121), (2, 9, 91), (3, 2, 15)])
def test_point_counts(n, F, expected):
    assert count_points(n, F) == expected
    pts = points_array(n, F)
    assert len(pts) == expected
    assert len({tuple(r) for r in pts.tolist()}) == expected


@pytest.mark.parametrize("q", [2, 3, 4])
def test_points_are_normalized_and_unique_projectively(q):
    T = make_tower(q)
    pts = list(enumerate_points(2, Level.STAR, T))
    assert all(normalize(T, P) == P for P in pts)
    # no two points are scalar multiples of one another
    seen = set()
    for P in pts:
        for s in range(1, q * q):
            assert normalize(T, tuple(T.mul(s, c) for c in P)) == P
        seen.add(P)
    assert len(seen) == count_points(2, q * q)


def test_span_of_transversal_points():
    T = make_tower(3)
    tq = T.frob(T.tau)
    A0 = (tq, T.neg(1), 0, 0, 0)
    A1 = (0, 0, tq, T.neg(1), 0)
    g = span([A0, A1], T)
    assert g.proj_dim == 1 and g.level == Level.STAR
    assert g.contains(tuple(T.add(T.mul(5, a), b) for a, b in zip(A0, A1)))
    assert not g.contains((1, 0, 0, 0, 0))
    assert len(g.points()) == 10


@pytest.mark.parametrize("q", [2, 3])
def test_meet_dimension_formula(q):
    T = make_tower(q)
    rng = np.random.default_rng(q)
    for _ in range(60):
        a = subspace(T, rng.integers(0, q, size=(int(rng.integers(1, 4)), 5)).tolist())
        b = subspace(T, rng.integers(0, q, size=(int(rng.integers(1, 4)), 5)).tolist())
        if a.is_empty() or b.is_empty():
            continue
        j, m = span([a, b]), meet(a, b)
        assert len(a.basis) + len(b.basis) == len(j.basis) + len(m.basis)
        assert a.contains(m) and b.contains(m) and j.contains(a) and j.contains(b)
        # brute force the meet as a point set
        assert m.point_set() == a.point_set() & b.point_set()


def test_hyperplane_and_whole_space():
    T = make_tower(3)
    H = hyperplane(T, (0, 0, 0, 0, 1))
    assert H.proj_dim == 3 and len(H.points()) == 40
    W = whole_space(T, 4)
    assert W.proj_dim == 4 and W.contains(H)
    assert meet(H, W).basis == H.basis


def test_frobenius_of_subspace_and_rank():
    T = make_tower(2)
    L = span([(1, T.tau, 0), (0, 1, 1)], T)
    Lq = L.frobenius()
    assert Lq.frobenius() == L
    assert rank(T, [(1, 0, 0), (0, 1, 0), (1, 1, 0)]) == 2
    with pytest.raises(ValueError):
        L.extend(Level.BASE)


def test_line_sizes_at_each_level():
    T = make_tower(2)
    L = span([(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)], T)
    for lvl, F in ((Level.BASE, 2), (Level.STAR, 4), (Level.FOURSTAR, 16)):
        assert len(L.points(lvl)) == F + 1
    for P, Q in itertools.combinations(L.points().tolist(), 2):
        assert span([P, Q], T) == L
