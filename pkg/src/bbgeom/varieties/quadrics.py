"""Quadratic forms, pencils of quadrics and their point sets.

A form in n variables is an upper-triangular n x n array of codes: entry
(i, j), i <= j, is the coefficient of x_i x_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from ..gf_tower import INF, FieldTower, Level
from ..kernels import get_backend, vadd, vmul
from ..projective import nullspace, points_array


@dataclass(frozen=True, eq=False)
class QuadricForm:
    tower: FieldTower
    coeffs: tuple  # tuple of row tuples, upper triangular
    level: Level = Level.BASE

    @classmethod
    def from_array(cls, T: FieldTower, arr, level: int | None = None) -> "QuadricForm":
        arr = np.asarray(arr, dtype=np.int64)
        n = arr.shape[0]
        up = np.zeros_like(arr)
        for i in range(n):
            up[i, i] = arr[i, i]
            for j in range(i + 1, n):
                up[i, j] = T.add(int(arr[i, j]), int(arr[j, i]))
        lvl = max(int(T.level_of(int(c))) for c in up.ravel()) if level is None else level
        return cls(T, tuple(tuple(int(c) for c in r) for r in up), Level(lvl))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, QuadricForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x) -> int:
        T = self.tower
        acc = 0
        for i in range(self.n):
            if not x[i]:
                continue
            row = 0
            for j in range(i, self.n):
                c = self.coeffs[i][j]
                if c and x[j]:
                    row = T.add(row, T.mul(c, x[j]))
            acc = T.add(acc, T.mul(row, x[i]))
        return acc

    def eval_many(self, pts) -> np.ndarray:
        kern = get_backend()
        return kern.quad_eval(self.tower.tables(), self.array(), np.asarray(pts, dtype=np.int64))

    def bilinear(self, u, v) -> int:
        """B(u, v) = Q(u + v) - Q(u) - Q(v)."""
        T = self.tower
        acc = 0
        for i in range(self.n):
            for j in range(i, self.n):
                c = self.coeffs[i][j]
                if not c:
                    continue
                if i == j:
                    t = T.mul(T.from_int(2), T.mul(u[i], v[i]))
                else:
                    t = T.add(T.mul(u[i], v[j]), T.mul(u[j], v[i]))
                acc = T.add(acc, T.mul(c, t))
        return acc

    def scale(self, a: int) -> "QuadricForm":
        T = self.tower
        return QuadricForm(T, tuple(tuple(T.mul(a, c) for c in r) for r in self.coeffs),
                           Level(max(self.level, T.level_of(a))))

    def __add__(self, other: "QuadricForm") -> "QuadricForm":
        T = self.tower
        return QuadricForm(T, tuple(tuple(T.add(a, b) for a, b in zip(r, s))
                                    for r, s in zip(self.coeffs, other.coeffs)),
                           max(self.level, other.level))

    def substitute(self, M) -> "QuadricForm":
        """The form y -> Q(M y) for an n x k matrix M (rows = old variables)."""
        T = self.tower
        k = len(M[0])
        out = [[0] * k for _ in range(k)]
        for i in range(self.n):
            for j in range(i, self.n):
                c = self.coeffs[i][j]
                if not c:
                    continue
                li, lj = M[i], M[j]
                for a in range(k):
                    if not li[a] and not lj[a]:
                        continue
                    for b in range(k):
                        v = T.mul(li[a], lj[b])
                        if not v:
                            continue
                        lo, hi = min(a, b), max(a, b)
                        out[lo][hi] = T.add(out[lo][hi], T.mul(c, v))
        lvl = max([int(self.level)] + [int(T.level_of(x)) for r in M for x in r])
        return QuadricForm(T, tuple(map(tuple, out)), Level(lvl))

    def restrict(self, idx) -> "QuadricForm":
        """Restriction to the coordinate subspace spanned by the given indices."""
        return QuadricForm(self.tower, tuple(tuple(self.coeffs[i][j] for j in idx) for i in idx),
                           self.level)

    def split(self) -> tuple["QuadricForm", "QuadricForm"]:
        """Write a form over F_{q^2} as Q_inf + tau*Q_0 with both over F_q."""
        q = self.tower.q
        a = tuple(tuple(c % q for c in r) for r in self.coeffs)
        b = tuple(tuple(c // q for c in r) for r in self.coeffs)
        return QuadricForm(self.tower, a), QuadricForm(self.tower, b)

    def extend(self, level: int) -> "QuadricForm":
        return QuadricForm(self.tower, self.coeffs, Level(max(level, self.level)))

    def points(self, level: int | None = None) -> np.ndarray:
        """Zeros in PG(n-1, level), in enumeration order."""
        lvl = self.level if level is None else level
        pts = points_array(self.n - 1, self.tower.size(lvl))
        return pts[self.eval_many(pts) == 0]

    def contains_subspace(self, S) -> bool:
        """True when the form vanishes on a subspace (checked on basis sums)."""
        B = list(S.basis)
        if any(self(b) for b in B):
            return False
        return all(self.bilinear(u, v) == 0 for i, u in enumerate(B) for v in B[i + 1:])

    def __repr__(self):
        return f"QuadricForm(n={self.n}, level={self.level.name}, coeffs={self.coeffs})"


@dataclass(frozen=True, eq=False)
class QuadricPencil:
    """Members Q_t = t*Q_inf + Q_0 (t in F_q) and Q_inf (t = INF)."""

    q_inf: QuadricForm
    q_0: QuadricForm

    @property
    def tower(self) -> FieldTower:
        return self.q_inf.tower

    def member(self, t: int) -> QuadricForm:
        if t == INF:
            return self.q_inf
        return self.q_inf.scale(t) + self.q_0

    def members(self):
        q = self.tower.q
        return [(INF, self.q_inf)] + [(t, self.member(t)) for t in range(q)]

    def base_locus(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.int64)
        return pts[(self.q_inf.eval_many(pts) == 0) & (self.q_0.eval_many(pts) == 0)]


# ---------------------------------------------------------------------------
# quadrics through point sets


def monomials(n: int) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(n), 2))


def monomial_rows(T: FieldTower, pts) -> np.ndarray:
    """Rows (x_i x_j) over the monomials, one per point."""
    ft = T.tables()
    pts = np.asarray(pts, dtype=np.int64)
    mons = monomials(pts.shape[1])
    return np.stack([vmul(ft, pts[:, i], pts[:, j]) for i, j in mons], axis=1)


def quadrics_through(T: FieldTower, pts, n_vars: int | None = None) -> list[QuadricForm]:
    """Basis of the space of quadratic forms vanishing at every given point."""
    pts = np.asarray(pts, dtype=np.int64)
    n = pts.shape[1] if n_vars is None else n_vars
    mons = monomials(n)
    rows = monomial_rows(T, pts).tolist() if len(pts) else []
    out = []
    for v in nullspace(T, rows, len(mons)):
        arr = [[0] * n for _ in range(n)]
        for (i, j), c in zip(mons, v):
            arr[i][j] = c
        out.append(QuadricForm(T, tuple(map(tuple, arr)),
                               Level(max(T.level_of(c) for c in v))))
    return out


def linear_combination(T: FieldTower, forms, coeffs) -> QuadricForm:
    acc = None
    for f, c in zip(forms, coeffs):
        if not c:
            continue
        term = f.scale(c)
        acc = term if acc is None else acc + term
    if acc is None:
        n = forms[0].n
        return QuadricForm(T, tuple((0,) * n for _ in range(n)))
    return acc


def matmul_codes(T: FieldTower, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product over the field of two code arrays (A: m x k, B: k x n)."""
    ft = T.tables()
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = vadd(ft, out, vmul(ft, A[:, k:k + 1], B[k:k + 1, :]))
    return out
