import numpy as np
import pytest

from bbgeom import Level, make_tower
from bbgeom.kernels import available_backends, get_backend

BACKENDS = available_backends()


def upper(rng, n, F):
    Q = np.triu(rng.integers(0, F, size=(n, n)))
    Q[n - 1, n - 1] = 1 + rng.integers(0, F - 1)
    return Q.astype(np.int64)


def test_numpy_always_available():
    assert "numpy" in BACKENDS
    with pytest.raises(ValueError):
        get_backend("fortran")


def test_env_var_forces_numpy(monkeypatch):
    monkeypatch.setenv("BBGEOM_PURE_PYTHON", "1")
    assert get_backend().__name__.endswith("_pykernels")
    monkeypatch.setenv("BBGEOM_PURE_PYTHON", "0")
    expected = "_ckernels" if "cython" in BACKENDS else "_pykernels"
    assert get_backend().__name__.endswith(expected)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_poly_eval_matches_tower(q):
    T = make_tower(q)
    ft = T.tables()
    rng = np.random.default_rng(q)
    coeffs = rng.integers(0, T.size(Level.STAR), size=6).astype(np.int64)
    xs = np.arange(T.size(Level.FOURSTAR), dtype=np.int64)
    want = np.array([T.poly_eval(coeffs.tolist(), int(x)) for x in xs])
    for b in BACKENDS:
        assert np.array_equal(get_backend(b).poly_eval(ft, coeffs, xs), want)


@pytest.mark.parametrize("q", [2, 3, 4, 7, 8, 9])
def test_backends_agree(q):
    T = make_tower(q)
    ft = T.tables()
    rng = np.random.default_rng(q)
    F2 = T.size(Level.STAR)
    pts = rng.integers(0, F2, size=(2000, 5)).astype(np.int64)
    form = rng.integers(0, F2, size=5).astype(np.int64)
    Q5 = upper(rng, 5, F2)
    Q1, Q2 = upper(rng, 4, q), upper(rng, 4, q)
    ref = get_backend("numpy")
    lin = ref.lin_eval(ft, form, pts)
    quad = ref.quad_eval(ft, Q5, pts)
    # spot check the numpy kernels against scalar arithmetic
    for P, lv, qv in list(zip(pts.tolist(), lin.tolist(), quad.tolist()))[:50]:
        s = 0
        for c, x in zip(form.tolist(), P):
            s = T.add(s, T.mul(c, x))
        assert s == lv
        s = 0
        for i in range(5):
            for j in range(i, 5):
                s = T.add(s, T.mul(int(Q5[i, j]), T.mul(P[i], P[j])))
        assert s == qv
    scan = ref.pair_scan(ft, Q1, Q2, F2)
    for b in BACKENDS:
        k = get_backend(b)
        assert np.array_equal(k.lin_eval(ft, form, pts), lin)
        assert np.array_equal(k.quad_eval(ft, Q5, pts), quad)
        assert np.array_equal(np.asarray(k.pair_scan(ft, Q1, Q2, F2)), np.asarray(scan))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_pair_scan_matches_brute_force(q):
    from bbgeom.projective import points_array
    T = make_tower(q)
    ft = T.tables()
    rng = np.random.default_rng(10 + q)
    F2 = T.size(Level.STAR)
    allpts = points_array(3, F2)
    for _ in range(5):
        Q1, Q2 = upper(rng, 4, q), upper(rng, 4, q)
        ref = get_backend("numpy")
        z1 = ref.quad_eval(ft, Q1, allpts) == 0
        z2 = ref.quad_eval(ft, Q2, allpts) == 0
        want = allpts[z1 & z2]
        want = want[np.lexsort(want.T[::-1])]
        for b in BACKENDS:
            got = np.asarray(get_backend(b).pair_scan(ft, Q1, Q2, F2))
            assert np.array_equal(got, want)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pair_scan_degenerate_directions(q):
    # Q2 = Q1 + L*M with M(e3) = 0: every line through e3 in M = 0 makes the
    # eliminated form vanish identically, which takes the fallback path
    from bbgeom.projective import points_array
    T = make_tower(q)
    ft = T.tables()
    rng = np.random.default_rng(20 + q)
    F2 = T.size(Level.STAR)
    allpts = points_array(3, F2)
    ref = get_backend("numpy")
    for _ in range(4):
        Q1 = upper(rng, 4, q)
        L = rng.integers(0, q, 4)
        M = np.append(rng.integers(0, q, 3), 0)
        LM = np.zeros((4, 4), dtype=np.int64)
        for i in range(4):
            LM[i, i] = T.mul(int(L[i]), int(M[i]))
            for j in range(i + 1, 4):
                LM[i, j] = T.add(T.mul(int(L[i]), int(M[j])), T.mul(int(L[j]), int(M[i])))
        Q2 = np.array([[T.add(int(a), int(b)) for a, b in zip(r1, r2)] for r1, r2 in zip(Q1, LM)])
        z = (ref.quad_eval(ft, Q1, allpts) == 0) & (ref.quad_eval(ft, Q2, allpts) == 0)
        want = allpts[z]
        want = want[np.lexsort(want.T[::-1])]
        for b in BACKENDS:
            assert np.array_equal(np.asarray(get_backend(b).pair_scan(ft, Q1, Q2, F2)), want)
