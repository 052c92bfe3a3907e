import numpy as np
import pytest

from bbgeom import INF, Level, make_frame
from bbgeom.bruckbose import incidence_plane_check, is_spread, spread_from_transversal, transversal_check
from bbgeom.projective import meet, normalize, points_array, subspace
from bbgeom.varieties.reguli import is_regular, mutated_spread, non_regular_spread

QS = [2, 3, 4, 5, 7, 8, 9]


def test_bb_map_example():
    fr = make_frame(3)
    T = fr.tower
    assert fr.bb_map((T.tau, 1, 1)) == (0, 1, 1, 0, 1)
    assert fr.bb_unmap((0, 1, 1, 0, 1)) == normalize(T, (T.tau, 1, 1))
    # bb_map output is unnormalized: scale before comparing
    assert normalize(T, fr.bb_map((T.tau, 1, 1))) == (0, 1, 1, 0, 1)
    with pytest.raises(ValueError):
        fr.bb_map((1, 0, 0))


def test_spread_line_examples():
    fr = make_frame(3)
    T = fr.tower
    assert fr.spread_line(0) == subspace(T, [(0, 0, 1, 0, 0), (0, 0, 0, 1, 0)])
    assert fr.spread_line(INF) == subspace(T, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0)])
    # x = tau y: y = 1 gives x = tau, y = tau gives x = tau^2 = t1 tau + t0
    L = fr.spread_line(T.tau)
    assert L.contains((0, 1, 1, 0, 0))
    assert L.contains((T.t0, T.t1, 0, 1, 0))


@pytest.mark.parametrize("q", QS)
def test_round_trip(q):
    fr = make_frame(q)
    T = fr.tower
    rng = np.random.default_rng(q)
    for _ in range(50):
        A = (int(rng.integers(q * q)), int(rng.integers(q * q)), 1)
        X = fr.bb_map(A)
        assert all(c < q for c in X)
        assert fr.bb_unmap(X) == normalize(T, A)
    pts = points_array(2, q * q)
    aff = pts[pts[:, 2] != 0]
    back = fr.bb_unmap_rows(fr.bb_map_rows(aff))
    assert np.array_equal(back, aff)  # points_array rows are already normalized


@pytest.mark.parametrize("q", QS)
def test_spread_partitions_sigma_inf(q):
    fr = make_frame(q)
    lines = list(fr.spread.values())
    assert len(lines) == q * q + 1
    assert is_spread(fr, lines)
    covered = set()
    for L in lines:
        pts = L.point_set()
        assert len(pts) == q + 1 and not (covered & pts)
        covered |= pts
    assert len(covered) == q ** 3 + q ** 2 + q + 1
    for X in list(covered)[:40]:
        assert fr.spread[fr.delta_of_point(X)].contains(X)


@pytest.mark.parametrize("q", QS)
def test_two_spread_constructions_agree(q):
    fr = make_frame(q)
    via_g = spread_from_transversal(fr)
    assert via_g == fr.spread
    assert transversal_check(fr)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_dictionary_between_linf_and_g(q):
    fr = make_frame(q)
    T = fr.tower
    for d in fr.deltas:
        P = fr.g_point(d)
        assert fr.on_g(P)
        assert fr.alpha_of(P) == d
        ext = fr.spread_line(d).extend(Level.STAR)
        assert not meet(ext, fr.g).is_empty()
        assert ext.contains(P)
    assert meet(fr.g, fr.gq).is_empty()
    assert meet(fr.g, fr.sigma_inf.extend(Level.STAR)) == fr.g


def test_incidence_plane_q3():
    fr = make_frame(3)
    res = incidence_plane_check(fr)
    assert res["points"] == 81 and res["lines"] == 90
    assert res["passed"] and res["is_spread"]


def test_non_regular_spread_fixture():
    fr = make_frame(3)
    lines = non_regular_spread(fr)
    assert is_spread(fr, lines)
    assert not is_regular(lines)
    assert not transversal_check(fr, lines)
    # a spread, regular or not, still gives an affine plane
    assert incidence_plane_check(fr, lines)["passed"]
    assert is_regular(list(fr.spread.values()))


def test_mutated_spread_fixture():
    fr = make_frame(3)
    lines = mutated_spread(fr)
    assert not is_spread(fr, lines)
    res = incidence_plane_check(fr, lines)
    assert not res["passed"] and not res["is_spread"]
