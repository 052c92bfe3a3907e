import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbgeom.gf_tower import (INF, MAX_Q, FElem, Level, TowerError, frobenius, make_tower, prime_power,
                             roots)

QS = [2, 3, 4, 5, 7, 8, 9]


def brute_order(T, x, level):
    """Multiplicative order of x found by repeated multiplication."""
    k, y = 1, x
    while y != 1:
        y = T.mul(y, x)
        k += 1
        assert k <= T.size(level)
    return k


@pytest.mark.parametrize("q", QS)
def test_tau_identities(q):
    T = make_tower(q)
    tau, tq = T.tau, T.frob(T.tau)
    assert T.mul(tau, tq) == T.neg(T.t0)
    assert T.add(tau, tq) == T.t1
    assert T.frob(tau, 2) == tau
    # tau^(q^2) = tau, while tau^(q^2) = 1 never holds for a primitive tau
    y = 1
    for _ in range(q * q - 1):
        y = T.mul(y, tau)
    assert y == 1 and T.mul(y, tau) == tau != 1
    assert T.pow(tau, q * q) == tau


@pytest.mark.parametrize("q", QS)
def test_tau_and_sigma_primitive(q):
    T = make_tower(q)
    assert brute_order(T, T.tau, Level.STAR) == q * q - 1
    assert brute_order(T, T.sigma, Level.FOURSTAR) == q ** 4 - 1


def test_q2_polynomial_is_unique_choice():
    T = make_tower(2)
    assert (T.t1, T.t0) == (1, 1)


def test_q3_default_is_least_primitive():
    T = make_tower(3)
    for t1, t0 in itertools.product(range(3), range(1, 3)):
        if (t1, t0) == (T.t1, T.t0):
            break
        with pytest.raises(TowerError):
            make_tower(3, (t1, t0))


@pytest.mark.parametrize("poly", [(1, 3), (1, 4), (6, 2), (0, 3)])
def test_q7_override_accepted_iff_primitive(poly):
    base = make_tower(7)
    t1, t0 = poly
    # a root of x^2 - t1 x - t0 in F_49, then its order by brute force
    rts = [x for x in range(49)
           if base.sub(base.sub(base.mul(x, x), base.mul(t1, x)), t0) == 0 and x >= 7]
    primitive = bool(rts) and brute_order(base, rts[0], Level.STAR) == 48
    if primitive:
        T = make_tower(7, poly)
        assert (T.t1, T.t0) == poly
    else:
        with pytest.raises(TowerError):
            make_tower(7, poly)


@pytest.mark.parametrize("q", [1, 6, 10, 12, 0])
def test_not_prime_power(q):
    with pytest.raises(TowerError, match="not a prime power"):
        prime_power(q)


def test_ceiling():
    with pytest.raises(TowerError):
        make_tower(MAX_Q + 1 if MAX_Q + 1 in (17,) else 17)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_field_axioms_exhaustive_star(q):
    T = make_tower(q)
    F = T.size(Level.STAR)
    xs = range(F)
    for a in xs:
        assert T.add(a, T.neg(a)) == 0
        if a:
            assert T.mul(a, T.inv(a)) == 1
        for b in xs:
            assert T.add(a, b) == T.add(b, a)
            assert T.mul(a, b) == T.mul(b, a)
            assert T.frob(T.add(a, b)) == T.add(T.frob(a), T.frob(b))
            assert T.frob(T.mul(a, b)) == T.mul(T.frob(a), T.frob(b))


@pytest.mark.parametrize("q", [2, 3])
def test_associativity_distributivity_exhaustive(q):
    T = make_tower(q)
    F = T.size(Level.STAR)
    for a, b, c in itertools.product(range(F), repeat=3):
        assert T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))
        assert T.add(T.add(a, b), c) == T.add(a, T.add(b, c))
        assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(QS), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_field_axioms_fourstar(q, i, j, k):
    T = make_tower(q)
    F = T.size(Level.FOURSTAR)
    a, b, c = i % F, j % F, k % F
    assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))
    assert T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))
    assert T.frob(T.mul(a, b)) == T.mul(T.frob(a), T.frob(b))
    assert T.frob(T.add(a, b)) == T.add(T.frob(a), T.frob(b))
    assert T.frob(a, 4) == a


@pytest.mark.parametrize("q", QS)
def test_subfields_are_closed_and_fixed(q):
    T = make_tower(q)
    for a in range(q):
        assert T.frob(a) == a
        for b in range(q):
            assert T.add(a, b) < q and T.mul(a, b) < q
    for a in range(q * q):
        assert T.frob(a, 2) == a
        assert T.level_of(T.frob(a)) <= Level.STAR


def test_felem_and_frobenius():
    T = make_tower(5)
    tau = FElem(T, T.tau)
    assert frobenius(tau) == FElem(T, T.t1) - tau
    x = FElem(T, 3)
    assert frobenius(x) == x
    y = FElem(T, 400)
    assert frobenius(y, 4) == y
    assert (y * y.inverse()).code == 1
    assert y.coords == tuple((400 // 5 ** i) % 5 for i in range(4))
    with pytest.raises(ValueError):
        frobenius(x, 0)


def brute_roots(T, poly, level):
    return [x for x in range(T.size(level)) if T.poly_eval(poly, x) == 0]


def test_roots_examples():
    T = make_tower(7)
    assert roots(T, [T.neg(1), 0, 1], Level.BASE) == [1, 6]
    T = make_tower(4)
    pr = roots(T, [T.neg(T.t0), T.neg(T.t1), 1], Level.STAR)
    assert sorted(pr) == sorted([T.tau, T.frob(T.tau)])


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_roots_match_exhaustive_evaluation(q):
    T = make_tower(q)
    rng = np.random.default_rng(q)
    for level in (Level.BASE, Level.STAR):
        for _ in range(100):
            deg = int(rng.integers(1, 9))
            poly = [int(c) for c in rng.integers(0, T.size(level), deg + 1)]
            poly[-1] = poly[-1] or 1
            found = roots(T, poly, Level.FOURSTAR)
            assert sorted(set(found)) == brute_roots(T, poly, Level.FOURSTAR)
            assert len(found) <= deg


def test_roots_multiplicity_and_projective():
    T = make_tower(5)
    # (x - 2)^3 (x - 1) as a binary form of degree 6: INF twice
    p = T.poly_mul(T.poly_mul([T.neg(2), 1], [T.neg(2), 1]), T.poly_mul([T.neg(2), 1], [T.neg(1), 1]))
    assert roots(T, p, Level.BASE) == [1, 2, 2, 2]
    assert roots(T, p + [0, 0], Level.BASE, projective=True) == [INF, INF, 1, 2, 2, 2]
    with pytest.raises(ValueError):
        roots(T, [0, 0], Level.BASE)
