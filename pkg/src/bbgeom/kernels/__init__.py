"""Hot loops: polynomial and quadratic-form evaluation, quadric-pair scans.

Two interchangeable backends share one API: the compiled ``_ckernels``
extension and the pure numpy ``_pykernels``.  The compiled one is used
when it imports, unless ``BBGEOM_PURE_PYTHON`` is set to a non-empty
value other than ``0``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pykernels

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Flat int64 tables of one tower, shaped for the kernels.

    ``log[0] == N`` marks zero; ``exp`` is long enough that any sum of two
    logs (including the sentinel) indexes it.  ``zech[k] = log(1 + g^k)``
    with N meaning zero.  ``hsolve[c]`` (characteristic 2 only) is one
    root of u^2 + u = c, or -1.
    """

    p: int
    q: int
    N: int
    order: int
    half: int
    exp: np.ndarray
    log: np.ndarray
    zech: np.ndarray
    hsolve: np.ndarray

    @classmethod
    def from_tower(cls, tower):
        cached = getattr(tower, "_tables", None)
        if cached is not None:
            return cached
        N = tower.N
        exp = np.concatenate([tower.exp[:N], tower.exp[:N], tower.exp[:2]]).astype(np.int64)
        log = tower.log.astype(np.int64)
        zech = np.concatenate([tower.zech, [N]]).astype(np.int64)
        ft = cls(tower.p, tower.q, N, tower.order, tower.half, exp, log, zech,
                 np.zeros(0, dtype=np.int64))
        if tower.p == 2:
            u = np.arange(tower.order, dtype=np.int64)
            v = _pykernels.vmul(ft, u, u) ^ u
            hs = np.full(tower.order, -1, dtype=np.int64)
            hs[v] = u
            object.__setattr__(ft, "hsolve", hs)
        tower._tables = ft
        return ft

    def solve_quadratic(self, a0, a1, a2, F):
        """Roots t with code < F of a0 + a1 t + a2 t^2 (a2 != 0), sorted."""
        mul, add = self._mul, self._add
        inv_a2 = self._inv(a2)
        if self.p != 2:
            # t = (-a1 +- sqrt(a1^2 - 4 a0 a2)) / (2 a2)
            four = 4 % self.p
            disc = add(mul(a1, a1), self._neg(mul(four, mul(a0, a2))))
            if disc == 0:
                roots = {mul(self._neg(a1), self._inv(mul(2 % self.p, a2)))}
            else:
                ld = int(self.log[disc])
                if ld % 2:
                    return []
                s = int(self.exp[ld // 2])
                inv2a = self._inv(mul(2 % self.p, a2))
                roots = {mul(add(self._neg(a1), s), inv2a),
                         mul(add(self._neg(a1), self._neg(s)), inv2a)}
        else:
            if a1 == 0:
                c = mul(a0, inv_a2)
                lc = int(self.log[c]) if c else None
                r = 0 if c == 0 else int(self.exp[(lc * ((self.N + 1) // 2)) % self.N])
                roots = {r}
            else:
                # t = (a1/a2) u with u^2 + u = a0 a2 / a1^2
                c = mul(mul(a0, a2), self._inv(mul(a1, a1)))
                u = int(self.hsolve[c])
                if u < 0:
                    return []
                k = mul(a1, inv_a2)
                roots = {mul(k, u), mul(k, u ^ 1)}
        return sorted(r for r in roots if r < F)

    def _mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def _add(self, a, b):
        return int(_pykernels.vadd(self, np.int64(a), np.int64(b)))

    def _neg(self, a):
        return int(_pykernels.vneg(self, np.int64(a)))

    def _inv(self, a):
        return int(self.exp[(self.N - self.log[a]) % self.N])


def available_backends() -> list[str]:
    names = ["numpy"]
    if _ckernels is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str | None = None):
    """The kernel module to use: ``"cython"``, ``"numpy"`` or the default."""
    if name is None:
        forced = os.environ.get("BBGEOM_PURE_PYTHON", "")
        name = "numpy" if (forced and forced != "0") or _ckernels is None else "cython"
    if name == "numpy":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


vmul = _pykernels.vmul
vadd = _pykernels.vadd
vneg = _pykernels.vneg
vsub = _pykernels.vsub
vinv = _pykernels.vinv

__all__ = ["FieldTables", "get_backend", "available_backends",
           "vmul", "vadd", "vneg", "vsub", "vinv"]
