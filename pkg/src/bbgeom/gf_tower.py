"""Exact arithmetic in the field tower F_q < F_{q^2} < F_{q^4}.

Every element of every level is an integer code in ``range(q**4)``.

* F_q codes are ``0..q-1``: the base-p digits of the code are the
  coordinates over F_p[b]/(m) where m is the base primitive polynomial
  (for prime q the code is just the residue).
* An F_{q^2} code is ``a0 + q*a1`` for ``a0 + a1*tau`` with
  ``tau**2 = t1*tau + t0``.
* An F_{q^4} code is ``A0 + q**2*A1`` for ``A0 + A1*sigma`` with
  ``sigma**2 = s1*sigma + s0`` and ``s0, s1`` in F_{q^2}.

So the embeddings between levels are the identity on codes and an
element lies in the level of order ``q**(2**k)`` iff its code is below
that order.  ``sigma`` is primitive in F_{q^4}, and the log/exp tables
are built from it.

``tau`` is primitive in F_{q^2}, so ``tau**(q**2 - 1) == 1`` and
``tau**(q**2) == tau``: the Frobenius ``x -> x**q`` has order 2 on
F_{q^2}.  The identity "tau^(q^2) = 1" is false for every q and is
not used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

MAX_Q = 16
INF = -1  # the parameter / dictionary value "infinity"


class Level(IntEnum):
    """Extension level: BASE is F_q, STAR is F_{q^2}, FOURSTAR is F_{q^4}."""

    BASE = 0
    STAR = 1
    FOURSTAR = 2


class TowerError(ValueError):
    pass


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e`` or raise TowerError."""
    if not isinstance(q, (int, np.integer)) or q < 2:
        raise TowerError(f"{q} is not a prime power")
    q = int(q)
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise TowerError(f"{q} is not a prime power")
    return p, e


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# construction helpers (plain python, only used while building the tables)


def _base_tables(p: int, e: int):
    """Addition and multiplication tables of F_q, q = p**e, on codes."""
    q = p**e

    def digits(c):
        return [(c // p**i) % p for i in range(e)]

    def undigits(d):
        return sum(x * p**i for i, x in enumerate(d))

    add = [[undigits([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q)]
           for a in range(q)]
    if e == 1:
        mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        return add, mul, None

    def polymul(a, b, m):
        # a, b, m as digit lists; m monic of degree e given by its low coefficients
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i in range(e):
                    prod[k - e + i] = (prod[k - e + i] - c * m[i]) % p
        return prod[:e]

    order = q - 1
    facs = prime_factors(order)
    x = [0, 1] + [0] * (e - 2)
    one = [1] + [0] * (e - 1)

    def power(a, k, m):
        r, b = one, a
        while k:
            if k & 1:
                r = polymul(r, b, m)
            b = polymul(b, b, m)
            k >>= 1
        return r

    for n in range(q):
        m = digits(n)
        if m[0] == 0:
            continue
        if power(x, order, m) != one:
            continue
        if all(power(x, order // r, m) != one for r in facs):
            mul = [[undigits(polymul(digits(a), digits(b), m)) for b in range(q)] for a in range(q)]
            return add, mul, tuple(m)
    raise TowerError(f"no primitive polynomial of degree {e} over F_{p}")  # pragma: no cover


class _PairField:
    """F[x]/(x^2 - c1 x - c0) over a field given by add/mul/neg callables."""

    def __init__(self, size, add, mul, neg, c1, c0):
        self.size, self.add, self.mul, self.neg, self.c1, self.c0 = size, add, mul, neg, c1, c0

    def pmul(self, a, b):
        a0, a1 = a % self.size, a // self.size
        b0, b1 = b % self.size, b // self.size
        add, mul = self.add, self.mul
        hi = mul(a1, b1)
        r0 = add(mul(a0, b0), mul(hi, self.c0))
        r1 = add(add(mul(a0, b1), mul(a1, b0)), mul(hi, self.c1))
        return r0 + self.size * r1

    def ppow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self.pmul(r, a)
            a = self.pmul(a, a)
            k >>= 1
        return r

    def x_is_primitive(self):
        order = self.size * self.size - 1
        x = self.size
        if self.ppow(x, order) != 1:
            return False
        return all(self.ppow(x, order // r) != 1 for r in prime_factors(order))


def _pick_quadratic(size, add, mul, neg, override=None):
    """Least (c1, c0) making x primitive in F[x]/(x^2 - c1 x - c0)."""
    if override is not None:
        c1, c0 = override
        if not (0 <= c1 < size and 0 <= c0 < size) or c0 == 0:
            raise TowerError(f"x^2 - {c1}x - {c0} is not primitive")
        if not _PairField(size, add, mul, neg, c1, c0).x_is_primitive():
            raise TowerError(f"x^2 - {c1}x - {c0} is not primitive")
        return c1, c0
    for c1 in range(size):
        for c0 in range(1, size):
            if _PairField(size, add, mul, neg, c1, c0).x_is_primitive():
                return c1, c0
    raise TowerError("no primitive quadratic")  # pragma: no cover


# ---------------------------------------------------------------------------


class FieldTower:
    """Tables for F_q < F_{q^2} < F_{q^4}; immutable once built.

    Build with :func:`make_tower`.  Arithmetic methods take and return int
    codes; :class:`FElem` wraps a code for operator syntax.
    """

    def __init__(self, q: int, primpoly: tuple[int, int] | None = None):
        p, e = prime_power(q)
        if q > MAX_Q:
            raise TowerError(f"q={q} exceeds the ceiling {MAX_Q}")
        self.q, self.p, self.e = q, p, e
        badd, bmul, self.base_poly = _base_tables(p, e)
        bneg = [next(b for b in range(q) if badd[a][b] == 0) for a in range(q)]

        self.t1, self.t0 = _pick_quadratic(
            q, lambda a, b: badd[a][b], lambda a, b: bmul[a][b], lambda a: bneg[a], primpoly)

        # F_{q^2} tables from powers of tau
        q2 = q * q
        quad = _PairField(q, lambda a, b: badd[a][b], lambda a, b: bmul[a][b],
                          lambda a: bneg[a], self.t1, self.t0)
        exp2 = [1] * (q2 - 1)
        for k in range(1, q2 - 1):
            exp2[k] = quad.pmul(exp2[k - 1], q)
        log2 = [0] * q2
        for k, c in enumerate(exp2):
            log2[c] = k

        def qadd(a, b):
            return badd[a % q][b % q] + q * badd[a // q][b // q]

        def qmul(a, b):
            if a == 0 or b == 0:
                return 0
            return exp2[(log2[a] + log2[b]) % (q2 - 1)]

        def qneg(a):
            return bneg[a % q] + q * bneg[a // q]

        self.s1, self.s0 = _pick_quadratic(q2, qadd, qmul, qneg)

        # F_{q^4} tables from powers of sigma
        self.order = q2 * q2
        N = self.order - 1
        self.N = N
        top = _PairField(q2, qadd, qmul, qneg, self.s1, self.s0)
        exp = np.empty(2 * N, dtype=np.int64)
        x = 1
        for k in range(N):
            exp[k] = x
            x0, x1 = x % q2, x // q2
            hi = qmul(x1, self.s0), qadd(x0, qmul(x1, self.s1))
            x = hi[0] + q2 * hi[1]
        exp[N:] = exp[:N]
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:N]] = np.arange(N, dtype=np.int64)
        log[0] = N  # sentinel: zero has no logarithm
        self.exp, self.log = exp, log
        self._exp = exp.tolist()
        self._log = log.tolist()

        # zech[k] = log(1 + sigma^k), or N when 1 + sigma^k = 0
        codes = exp[:N]
        onep = codes - codes % p + (codes % p + 1) % p
        zech = np.where(onep == 0, N, log[onep])
        self.zech = zech.astype(np.int64)
        self._zech = self.zech.tolist()
        self.tau = q
        self.sigma = q2
        self.half = N // 2 if p != 2 else 0
        del top

    # -- levels -----------------------------------------------------------
    def size(self, level: int) -> int:
        return self.q ** (1 << int(level))

    def level_of(self, a: int) -> Level:
        if a < self.q:
            return Level.BASE
        if a < self.q * self.q:
            return Level.STAR
        return Level.FOURSTAR

    def elements(self, level: int) -> range:
        return range(self.size(level))

    # -- scalar arithmetic on codes ---------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % self.N]
        if z == self.N:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self._exp[self._log[a] + self.half]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.N - self._log[a]) % self.N]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[a] * k) % self.N]

    def frob(self, a: int, power: int = 1) -> int:
        """a ** (q ** power)."""
        if a == 0:
            return 0
        return self._exp[(self._log[a] * pow(self.q, power, self.N)) % self.N]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def sqrt(self, a: int) -> int | None:
        """Some square root of a in F_{q^4}, or None."""
        if a == 0:
            return 0
        la = self._log[a]
        if self.p == 2:
            return self._exp[(la * ((self.N + 1) // 2)) % self.N]
        if la % 2:
            return None
        return self._exp[la // 2]

    def split(self, a: int, level: int = Level.STAR) -> tuple[int, int]:
        """Coordinates of a over the next level down: a = c0 + c1 * generator."""
        s = self.size(level - 1)
        return a % s, a // s

    def tables(self):
        from .kernels import FieldTables
        return FieldTables.from_tower(self)

    def __repr__(self):
        return (f"FieldTower(q={self.q}, t1={self.t1}, t0={self.t0}, "
                f"s1={self.s1}, s0={self.s0})")

    # -- polynomials (coefficient lists, low degree first) ----------------
    def poly_eval(self, coeffs, x: int) -> int:
        r = 0
        for c in reversed(coeffs):
            r = self.add(self.mul(r, x), c)
        return r

    def poly_trim(self, coeffs) -> list[int]:
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        return c

    def poly_mul(self, a, b) -> list[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = self.add(out[i + j], self.mul(x, y))
        return self.poly_trim(out)

    def poly_divmod(self, a, b):
        a = self.poly_trim(a)
        b = self.poly_trim(b)
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        if len(a) < len(b):
            return [], a
        inv_lead = self.inv(b[-1])
        quot = [0] * (len(a) - len(b) + 1)
        rem = list(a)
        for k in range(len(a) - len(b), -1, -1):
            c = self.mul(rem[k + len(b) - 1], inv_lead)
            quot[k] = c
            if c:
                for j, y in enumerate(b):
                    rem[k + j] = self.sub(rem[k + j], self.mul(c, y))
        return self.poly_trim(quot), self.poly_trim(rem[:len(b) - 1])

    def poly_gcd(self, a, b) -> list[int]:
        a, b = self.poly_trim(a), self.poly_trim(b)
        while b:
            a, b = b, self.poly_divmod(a, b)[1]
        if not a:
            return []
        inv_lead = self.inv(a[-1])
        return [self.mul(c, inv_lead) for c in a]


@lru_cache(maxsize=None)
def make_tower(q: int, primpoly_override: tuple[int, int] | None = None) -> FieldTower:
    """Build (and cache) the tower for q.

    With no override, ``(t1, t0)`` is the least pair in lexicographic order
    of codes making x^2 - t1 x - t0 primitive over F_q; the same rule picks
    ``(s1, s0)`` over F_{q^2}.  For q = p^e with e > 1 the base field is
    F_p[b]/(m) with m the least primitive monic of degree e, its low
    coefficients read as the base-p digits of a code.
    """
    if primpoly_override is not None:
        primpoly_override = tuple(int(c) for c in primpoly_override)
    return FieldTower(q, primpoly_override)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FElem:
    """A field element: a tower plus a code.  Operators follow the tower."""

    tower: FieldTower
    code: int

    @property
    def level(self) -> Level:
        return self.tower.level_of(self.code)

    @property
    def coords(self) -> tuple[int, ...]:
        """Coordinates over F_p in the polynomial basis of its level."""
        t = self.tower
        n = t.e * (1 << int(self.level))
        return tuple((self.code // t.p**i) % t.p for i in range(n))

    def _wrap(self, c):
        return FElem(self.tower, c)

    def _code(self, other):
        if isinstance(other, FElem):
            if other.tower is not self.tower:
                raise TowerError("elements of different towers")
            return other.code
        return self.tower.from_int(int(other))

    def __add__(self, o):
        return self._wrap(self.tower.add(self.code, self._code(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.tower.sub(self.code, self._code(o)))

    def __rsub__(self, o):
        return self._wrap(self.tower.sub(self._code(o), self.code))

    def __mul__(self, o):
        return self._wrap(self.tower.mul(self.code, self._code(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._wrap(self.tower.div(self.code, self._code(o)))

    def __neg__(self):
        return self._wrap(self.tower.neg(self.code))

    def __pow__(self, k: int):
        return self._wrap(self.tower.pow(self.code, k))

    def inverse(self):
        return self._wrap(self.tower.inv(self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FElem({self.code}, q={self.tower.q})"


def frobenius(x: FElem, power: int = 1) -> FElem:
    """x ** (q ** power)."""
    if power < 1:
        raise ValueError("power must be >= 1")
    return FElem(x.tower, x.tower.frob(x.code, power))


def roots(tower: FieldTower, poly, search_level: int = Level.FOURSTAR,
          projective: bool = False) -> list[int]:
    """All roots of ``poly`` (codes, low degree first) in a level, with multiplicity.

    The scan is exhaustive over the level.  Multiplicities come from
    repeated synthetic division.  With ``projective=True`` the list is read
    as a binary form of degree ``len(poly) - 1`` and INF is reported with
    multiplicity equal to the drop in degree.  Output is sorted, INF first.
    """
    coeffs = [c.code if isinstance(c, FElem) else int(c) for c in poly]
    trimmed = tower.poly_trim(coeffs)
    if not trimmed:
        raise ValueError("zero polynomial")
    from .kernels import get_backend
    kern = get_backend()
    xs = np.arange(tower.size(search_level), dtype=np.int64)
    vals = kern.poly_eval(tower.tables(), np.asarray(trimmed, dtype=np.int64), xs)
    out: list[int] = []
    if projective:
        out.extend([INF] * (len(coeffs) - len(trimmed)))
    for r in np.flatnonzero(vals == 0).tolist():
        cur = trimmed
        while True:
            quot, rem = tower.poly_divmod(cur, [tower.neg(r), 1])
            if rem:
                break
            out.append(r)
            cur = quot
            if len(cur) < 2:
                break
    return out
