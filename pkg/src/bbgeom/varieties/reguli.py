"""Reguli of Sigma_inf, the circle partition of a regular spread, spread
fixtures and conics special with respect to lines of the hyperbolic
congruence of g, g^q.

Reguli are built from transversals only: the transversal through a point X
of l1 is <X, Y> with Y = <X, l2> ∩ l3.  Nothing here consults the
Baer-subline dictionary, so the dictionary can be tested against it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from ..bruckbose import BruckBoseFrame, is_spread
from ..gf_tower import INF, FieldTower, Level
from ..projective import (Subspace, frob_vec, meet, normalize, nullspace, points_array, rank,
                          span, subspace)
from .baer import mobius_apply, mobius_through, solve
from .conics import DegenerateError, is_nondegenerate
from .quadrics import QuadricForm, linear_combination, quadrics_through


def transversals(l1: Subspace, l2: Subspace, l3: Subspace, level: int | None = None) -> list[Subspace]:
    """The lines meeting three mutually skew lines of a 3-space, one through
    each point of l1 at the given level."""
    T = l1.tower
    lvl = max(l1.level, l2.level, l3.level) if level is None else level
    out = []
    for X in l1.points(lvl).tolist():
        X = tuple(X)
        Y = meet(span([X, l2], T), l3)
        if Y.proj_dim != 0:
            raise DegenerateError("lines are not in general position")
        out.append(span([X, Y.basis[0]], T).extend(lvl))
    return out


def _skew(a: Subspace, b: Subspace) -> bool:
    return meet(a, b).is_empty()


@dataclass(frozen=True, eq=False)
class Regulus:
    tower: FieldTower
    lines: tuple  # Subspaces, sorted by basis
    level: Level = Level.BASE

    @cached_property
    def opposite(self) -> "Regulus":
        tr = transversals(*self.lines[:3], level=self.level)
        return Regulus(self.tower, tuple(sorted(tr, key=lambda l: l.basis)), self.level)

    @property
    def key(self) -> frozenset:
        return frozenset(l.basis for l in self.lines)

    def points(self) -> np.ndarray:
        return np.unique(np.concatenate([l.points(self.level) for l in self.lines]), axis=0)

    def contains_line(self, L: Subspace) -> bool:
        return L.basis in self.key


def regulus_through(l1: Subspace, l2: Subspace, l3: Subspace, level: int | None = None) -> Regulus:
    """The unique regulus containing three mutually skew lines."""
    if not (_skew(l1, l2) and _skew(l1, l3) and _skew(l2, l3)):
        raise DegenerateError("lines are not mutually skew")
    lvl = Level(max(l1.level, l2.level, l3.level) if level is None else level)
    tr = transversals(l1, l2, l3, lvl)
    lines = transversals(*tr[:3], level=lvl)
    reg = Regulus(l1.tower, tuple(sorted(lines, key=lambda l: l.basis)), lvl)
    if not all(reg.contains_line(l) for l in (l1, l2, l3)):
        raise AssertionError("regulus misses a generating line")
    return reg


def regulus_quadric(reg: Regulus) -> QuadricForm:
    """The quadric of Sigma_inf (coordinates x0, x1, y0, y1) carrying a regulus."""
    pts = reg.points()[:, :4]
    forms = quadrics_through(reg.tower, pts)
    if len(forms) != 1:
        raise AssertionError("a regulus lies on exactly one quadric")
    return forms[0]


# ---------------------------------------------------------------------------
# reguli of the spread

_REGULI_CACHE: dict = {}


def spread_reguli(frame: BruckBoseFrame) -> dict:
    """Every regulus contained in S, keyed by the frozenset of its deltas.

    Three spread lines lie in exactly one regulus, so triples already
    covered are skipped.
    """
    key = (frame.q, frame.tower.t1, frame.tower.t0)
    if key in _REGULI_CACHE:
        return _REGULI_CACHE[key]
    lines = frame.spread
    deltas = frame.deltas
    covered, out = set(), {}
    for tri in combinations(deltas, 3):
        if tri in covered:
            continue
        reg = regulus_through(*(lines[d] for d in tri))
        ds = frozenset(frame.delta_of_line(l) for l in reg.lines)
        if None in ds:
            raise AssertionError("regulus through spread lines leaves the spread")
        out[ds] = reg
        covered.update(combinations(sorted(ds, key=_dkey), 3))
    _REGULI_CACHE[key] = out
    return out


def _dkey(d):
    return -1 if d == INF else d


def sorted_deltas(ds) -> list:
    return sorted(ds, key=_dkey)


def is_regular(lines: list[Subspace], max_triples: int | None = None) -> bool:
    """Every regulus through three of the lines is contained in the set."""
    keys = {l.basis for l in lines}
    for k, tri in enumerate(combinations(lines, 3)):
        if max_triples is not None and k >= max_triples:
            break
        reg = regulus_through(*tri)
        if not reg.key <= keys:
            return False
    return True


# ---------------------------------------------------------------------------
# the circle partition


def norm(T: FieldTower, x: int) -> int:
    return T.mul(x, T.frob(x))


def circle_partition(frame: BruckBoseFrame, dP, dQ) -> list[frozenset]:
    """The q - 1 circles of PG(1,q^2) separating dP from dQ.

    With mu sending 0 to dP and INF to dQ, the circles are the images of
    {x : x^(q+1) = c}, c in F_q^*.
    """
    T = frame.tower
    q = T.q
    other = next(d for d in frame.deltas if d not in (dP, dQ))
    mu = mobius_through(T, dP, dQ, other)
    circles = {c: set() for c in range(1, q)}
    for x in range(1, q * q):
        circles[norm(T, x)].add(mobius_apply(T, mu, x))
    return [frozenset(circles[c]) for c in range(1, q)]


def circle_reguli(frame: BruckBoseFrame, dP, dQ) -> list[Regulus]:
    """The reguli of S over the circles, each rebuilt from three of its lines."""
    out = []
    for circ in circle_partition(frame, dP, dQ):
        ds = sorted_deltas(circ)
        reg = regulus_through(*(frame.spread_line(d) for d in ds[:3]))
        if frozenset(frame.delta_of_line(l) for l in reg.lines) != circ:
            raise AssertionError("circle is not a regulus of the spread")
        out.append(reg)
    return out


def swapped_spread(frame: BruckBoseFrame, dP, dQ) -> list[Subspace]:
    """{[P], [Q]} together with the opposite of every circle regulus."""
    lines = [frame.spread_line(dP), frame.spread_line(dQ)]
    for reg in circle_reguli(frame, dP, dQ):
        lines.extend(reg.opposite.lines)
    return lines


def hyperbolic_lines(frame: BruckBoseFrame, dP, dQ) -> tuple[Subspace, Subspace]:
    """PQ^q and P^qQ for P, Q the points of g on [P], [Q]."""
    T = frame.tower
    P, Q = frame.g_point(dP), frame.g_point(dQ)
    return span([P, frob_vec(T, Q)], T), span([frob_vec(T, P), Q], T)


def circle_check(frame: BruckBoseFrame, dP, dQ) -> dict:
    """The partition of S, and the swapped set as a spread with transversals PQ^q, P^qQ."""
    T = frame.tower
    q = T.q
    circles = circle_partition(frame, dP, dQ)
    covered = set().union(*circles) | {dP, dQ}
    partition_ok = (len(covered) == q * q + 1 and sum(len(c) for c in circles) == q * q - 1
                    and all(len(c) == q + 1 for c in circles))
    reg_ok = True
    try:
        circle_reguli(frame, dP, dQ)
    except AssertionError:
        reg_ok = False
    new = swapped_spread(frame, dP, dQ)
    spread_ok = is_spread(frame, new)
    h1, h2 = hyperbolic_lines(frame, dP, dQ)
    trans_ok = all(not meet(l.extend(Level.STAR), h).is_empty() for l in new for h in (h1, h2))
    return {"circles": len(circles), "sizes": sorted(len(c) for c in circles),
            "partition_ok": partition_ok, "reguli_ok": reg_ok, "swapped_is_spread": spread_ok,
            "transversals_ok": trans_ok,
            "passed": partition_ok and reg_ok and spread_ok and trans_ok}


# ---------------------------------------------------------------------------
# spread fixtures for negative tests


def non_regular_spread(frame: BruckBoseFrame) -> list[Subspace]:
    """S with the regulus over the circle through INF, 0, 1 replaced by its
    opposite: still a spread, not regular for q > 2."""
    regs = spread_reguli(frame)
    ds = next(k for k in regs if {INF, 0, 1} <= k)
    lines = [frame.spread_line(d) for d in frame.deltas if d not in ds]
    return lines + list(regs[ds].opposite.lines)


def mutated_spread(frame: BruckBoseFrame) -> list[Subspace]:
    """S with one line replaced by a line meeting two spread lines: not a spread."""
    T = frame.tower
    a = frame.spread_line(0).basis[0]
    b = frame.spread_line(INF).basis[0]
    bad = span([a, b], T)
    return [bad] + [frame.spread_line(d) for d in frame.deltas if d != 0]


# ---------------------------------------------------------------------------
# planes of Sigma_inf and conics in them


@dataclass(frozen=True)
class SigmaPlane:
    form: tuple       # the plane inside Sigma_inf: form . (x0, x1, y0, y1) = 0
    basis: tuple      # 3 rows in PG(4) coordinates
    delta: int        # the unique spread line in the plane


def sigma_planes(frame: BruckBoseFrame) -> list[SigmaPlane]:
    T = frame.tower
    out = []
    for h in points_array(3, T.q).tolist():
        basis = tuple(tuple(r) + (0,) for r in nullspace(T, [tuple(h)], 4))
        plane = subspace(T, basis)
        ds = [d for d in frame.deltas if plane.contains(frame.spread_line(d))]
        if len(ds) != 1:
            raise AssertionError("a plane of Sigma_inf contains one spread line")
        out.append(SigmaPlane(tuple(h), plane.basis, ds[0]))
    return out


def plane_form(T: FieldTower, Q: QuadricForm, basis) -> QuadricForm:
    """Restriction of a quaternary form to a plane (basis rows in PG(4) coordinates)."""
    M = tuple(tuple(basis[j][i] for j in range(3)) for i in range(4))
    return Q.substitute(M)


def plane_coords(T: FieldTower, basis, X) -> tuple:
    return solve(T, list(basis), X)


def conics_through_conjugate_pair(T: FieldTower, X_c) -> list[QuadricForm]:
    """Non-degenerate conics of PG(2,q) whose extension passes through X_c
    (a point over F_{q^2}) and hence through its conjugate."""
    from .quadrics import monomials
    q = T.q
    mons = monomials(3)
    vals = [T.mul(X_c[i], X_c[j]) for i, j in mons]
    rows = [tuple(v % q for v in vals), tuple(v // q for v in vals)]
    basis = nullspace(T, rows, 6)
    forms = []
    for v in basis:
        arr = [[0] * 3 for _ in range(3)]
        for (i, j), c in zip(mons, v):
            arr[i][j] = c
        forms.append(QuadricForm(T, tuple(map(tuple, arr))))
    out = []
    for coeffs in points_array(len(forms) - 1, q).tolist():
        f = linear_combination(T, forms, coeffs)
        if is_nondegenerate(f):
            out.append(f)
    return out


def special_conic_wrt(frame: BruckBoseFrame, lines, curve) -> bool:
    """True when the extension of a conic of PG(4,q) to q^2 meets every given line."""
    return all(curve.meet_subspace(L, Level.STAR) for L in lines)
