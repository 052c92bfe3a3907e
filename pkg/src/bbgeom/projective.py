"""Points, subspaces and linear algebra in PG(n, F) for F a level of the tower.

A point is a tuple of codes whose first nonzero entry is 1 (the type alias
``ProjPoint``).  A :class:`Subspace` keeps the reduced row echelon basis of
its vector subspace, so equal subspaces compare equal.

Point enumeration order: points are grouped by the position of their
leading 1 (position 0 first); inside a group the trailing coordinates run
through codes in lexicographic order, last coordinate fastest.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gf_tower import FieldTower, Level
from .kernels import vadd, vinv, vmul

ProjPoint = tuple  # normalized tuple of int codes

ENUM_BUDGET = 30_000_000


# ---------------------------------------------------------------------------
# scalar linear algebra on lists of codes


def normalize(T: FieldTower, v: Sequence[int]) -> ProjPoint:
    for c in v:
        if c:
            inv = T.inv(c)
            return tuple(T.mul(x, inv) for x in v)
    raise ValueError("the zero vector is not a projective point")


def is_zero(v) -> bool:
    return not any(v)


def rref(T: FieldTower, rows: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form, zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = T.inv(m[r][c])
        m[r] = [T.mul(x, inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [T.sub(x, T.mul(f, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    for row in m[:r]:
        out.append(tuple(row))
    return tuple(out)


def rank(T: FieldTower, rows) -> int:
    return len(rref(T, rows))


def nullspace(T: FieldTower, rows, ncols: int) -> list[tuple[int, ...]]:
    """Basis of {v : row . v = 0 for every row}."""
    R = rref(T, rows)
    pivots = [next(i for i, x in enumerate(r) if x) for r in R]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(R, pivots):
            v[pc] = T.neg(r[f])
        basis.append(tuple(v))
    return basis


def mat_vec(T: FieldTower, M, v) -> tuple[int, ...]:
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = T.add(acc, T.mul(a, b))
        out.append(acc)
    return tuple(out)


def mat_mul(T: FieldTower, A, B):
    Bt = list(zip(*B))
    return tuple(tuple(mat_vec(T, Bt, row)) for row in A)


def mat_inv(T: FieldTower, M):
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    R = rref(T, aug)
    if len(R) < n or any(R[i][i] != 1 for i in range(n)):
        raise ValueError("singular matrix")
    return tuple(tuple(r[n:]) for r in R)


def transpose(M):
    return tuple(tuple(c) for c in zip(*M))


def det_nonzero(T: FieldTower, M) -> bool:
    return rank(T, M) == len(M)


def frob_vec(T: FieldTower, v, power: int = 1) -> tuple[int, ...]:
    return tuple(T.frob(c, power) for c in v)


def dot(T: FieldTower, u, v) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = T.add(acc, T.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# vectorized helpers on (m, n+1) arrays of codes


def apply_matrix(T: FieldTower, M, pts: np.ndarray) -> np.ndarray:
    """Rows X -> M X for every row of pts."""
    ft = T.tables()
    pts = np.asarray(pts, dtype=np.int64)
    out = np.zeros((pts.shape[0], len(M)), dtype=np.int64)
    for i, row in enumerate(M):
        acc = np.zeros(pts.shape[0], dtype=np.int64)
        for j, c in enumerate(row):
            if c:
                acc = vadd(ft, acc, vmul(ft, pts[:, j], c))
        out[:, i] = acc
    return out


def normalize_rows(T: FieldTower, pts: np.ndarray) -> np.ndarray:
    ft = T.tables()
    pts = np.asarray(pts, dtype=np.int64)
    if pts.size == 0:
        return pts.reshape(0, pts.shape[1] if pts.ndim == 2 else 0)
    nz = pts != 0
    if not nz.any(axis=1).all():
        raise ValueError("zero row")
    lead = nz.argmax(axis=1)
    piv = pts[np.arange(pts.shape[0]), lead]
    inv = vinv(ft, piv)
    return vmul(ft, pts, inv[:, None])


def frob_rows(T: FieldTower, pts: np.ndarray, power: int = 1) -> np.ndarray:
    ft = T.tables()
    pts = np.asarray(pts, dtype=np.int64)
    k = pow(T.q, power, T.N)
    r = ft.exp[(ft.log[pts] * k) % T.N]
    return np.where(pts == 0, 0, r)


def encode_rows(pts: np.ndarray, base: int) -> np.ndarray:
    """Injective integer key for each row of codes below ``base``."""
    pts = np.asarray(pts, dtype=np.int64)
    key = np.zeros(pts.shape[0], dtype=np.int64)
    for j in range(pts.shape[1]):
        key = key * base + pts[:, j]
    return key


def points_array(n: int, F: int) -> np.ndarray:
    """All normalized points of PG(n, F) in the documented order."""
    count = sum(F**k for k in range(n + 1))
    if count * (n + 1) > ENUM_BUDGET:
        raise MemoryError(f"PG({n},{F}) exceeds the enumeration budget")
    blocks = []
    for lead in range(n + 1):
        tail = n - lead
        m = F**tail
        blk = np.zeros((m, n + 1), dtype=np.int64)
        blk[:, lead] = 1
        idx = np.arange(m, dtype=np.int64)
        for j in range(n, lead, -1):
            blk[:, j] = idx % F
            idx //= F
        blocks.append(blk)
    return np.concatenate(blocks)


def enumerate_points(n: int, level: int, tower: FieldTower) -> Iterator[ProjPoint]:
    """Stream every point of PG(n, level) exactly once."""
    F = tower.size(level)
    for row in points_array(n, F).tolist():
        yield tuple(row)


def count_points(n: int, F: int) -> int:
    return (F ** (n + 1) - 1) // (F - 1)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A projective subspace, stored as its canonical RREF basis."""

    tower: FieldTower = field(compare=False, repr=False)
    n: int
    level: Level
    basis: tuple[tuple[int, ...], ...]

    @property
    def proj_dim(self) -> int:
        return len(self.basis) - 1

    @property
    def space_dim(self) -> int:
        return self.n

    def is_empty(self) -> bool:
        return not self.basis

    def reduce(self, v) -> tuple[int, ...]:
        T = self.tower
        v = list(v)
        for row in self.basis:
            pc = next(i for i, x in enumerate(row) if x)
            if v[pc]:
                f = v[pc]
                v = [T.sub(a, T.mul(f, b)) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, other) -> bool:
        if isinstance(other, Subspace):
            return all(is_zero(self.reduce(r)) for r in other.basis)
        return is_zero(self.reduce(other))

    __contains__ = contains

    def extend(self, level: int) -> "Subspace":
        if level < self.level:
            raise ValueError("cannot restrict a subspace to a lower level")
        return Subspace(self.tower, self.n, Level(level), self.basis)

    def frobenius(self, power: int = 1) -> "Subspace":
        T = self.tower
        return Subspace(T, self.n, self.level, rref(T, [frob_vec(T, r, power) for r in self.basis]))

    def annihilator(self) -> list[tuple[int, ...]]:
        """Linear forms vanishing on the subspace."""
        return nullspace(self.tower, self.basis, self.n + 1)

    def points(self, level: int | None = None) -> np.ndarray:
        """All points at the given level (default: own level), normalized and sorted."""
        T = self.tower
        lvl = self.level if level is None else level
        k = len(self.basis)
        if k == 0:
            return np.zeros((0, self.n + 1), dtype=np.int64)
        coeffs = points_array(k - 1, T.size(lvl))
        pts = apply_matrix(T, transpose(self.basis), coeffs)
        pts = normalize_rows(T, pts)
        return pts[np.lexsort(pts.T[::-1])]

    def point_set(self, level: int | None = None) -> frozenset:
        return frozenset(map(tuple, self.points(level).tolist()))

    def __repr__(self):
        return f"Subspace(PG({self.n}), dim={self.proj_dim}, level={self.level.name}, basis={self.basis})"


def subspace(T: FieldTower, rows, level: int = Level.BASE, n: int | None = None) -> Subspace:
    rows = [tuple(r) for r in rows]
    if n is None:
        if not rows:
            raise ValueError("need n for an empty subspace")
        n = len(rows[0]) - 1
    lvl = max([int(level)] + [int(T.level_of(c)) for r in rows for c in r])
    return Subspace(T, n, Level(lvl), rref(T, rows))


def span(items, tower: FieldTower | None = None) -> Subspace:
    """Least subspace containing the given points (tuples) and subspaces."""
    items = list(items)
    if not items:
        raise ValueError("span of nothing")
    rows, level, T, n = [], Level.BASE, tower, None
    for it in items:
        if isinstance(it, Subspace):
            rows.extend(it.basis)
            level = max(level, it.level)
            T = T or it.tower
            n = it.n
        else:
            rows.append(tuple(it))
            n = len(it) - 1
    if T is None:
        raise ValueError("span of bare points needs a tower")
    return subspace(T, rows, level, n)


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection, computed from the union of the two annihilators."""
    T = a.tower
    forms = a.annihilator() + b.annihilator()
    basis = nullspace(T, forms, a.n + 1) if forms else [
        tuple(1 if i == j else 0 for j in range(a.n + 1)) for i in range(a.n + 1)]
    return Subspace(T, a.n, max(a.level, b.level), rref(T, basis))


def whole_space(T: FieldTower, n: int, level: int = Level.BASE) -> Subspace:
    return subspace(T, [tuple(1 if i == j else 0 for j in range(n + 1)) for i in range(n + 1)],
                    level, n)


def hyperplane(T: FieldTower, form, level: int = Level.BASE) -> Subspace:
    """The hyperplane {x : form . x = 0}."""
    basis = nullspace(T, [tuple(form)], len(form))
    lvl = max([int(level)] + [int(T.level_of(c)) for c in form])
    return Subspace(T, len(form) - 1, Level(lvl), rref(T, basis))


def line_through(T: FieldTower, P, Q) -> Subspace:
    return span([P, Q], T)
