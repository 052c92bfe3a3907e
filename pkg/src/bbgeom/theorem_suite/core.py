"""Check records, the per-check context and the registry."""
from __future__ import annotations

import hashlib
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..bruckbose import BruckBoseFrame, make_frame
from ..gf_tower import INF

MAX_WITNESSES = 5
MODES = ("sampled", "exhaustive")


class Skip(Exception):
    """A hypothesis of the result is not met for this q."""


class UnknownTheorem(KeyError):
    pass


def jsonable(x):
    """Plain JSON values; the parameter INF is rendered as "inf"."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return "inf" if int(x) == INF else int(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return sorted((jsonable(v) for v in x), key=repr)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "basis"):
        return jsonable(x.basis)
    return repr(x)


@dataclass
class CheckRecord:
    theorem_id: str
    q: int
    status: str                 # pass, fail or skip
    reason: str | None = None
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    elapsed_ms: float = 0.0
    tower: dict = field(default_factory=dict)
    mode: str = "sampled"

    def to_dict(self, timings: bool = True) -> dict:
        out = {"theorem_id": self.theorem_id, "q": self.q, "status": self.status}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.counts:
            out["counts"] = jsonable(self.counts)
        if self.witnesses:
            out["witnesses"] = jsonable(self.witnesses)
        out["elapsed_ms"] = round(self.elapsed_ms, 3) if timings else 0.0
        out["tower"] = dict(self.tower)
        out["mode"] = self.mode
        return out


def check_rng(seed: int, theorem_id: str, q: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, theorem, q): independent of run order."""
    h = hashlib.blake2b(f"{seed}|{theorem_id}|{q}".encode(), digest_size=16).digest()
    return np.random.Generator(np.random.Philox(key=int.from_bytes(h, "little")))


class Context:
    """Everything a checker needs, plus the tally it fills in."""

    def __init__(self, theorem_id: str, frame: BruckBoseFrame, mode: str, n: int, seed: int):
        self.theorem_id = theorem_id
        self.frame = frame
        self.T = frame.tower
        self.q = frame.q
        self.mode = mode
        self.n = n
        self.seed = seed
        self.rng = check_rng(seed, theorem_id, frame.q)
        self.counts: dict = {}
        self.witnesses: list = []
        self.failures = 0
        self.observational = False

    @property
    def exhaustive(self) -> bool:
        return self.mode == "exhaustive"

    def tally(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    def note(self, key: str, value) -> None:
        self.counts[key] = value

    def expect(self, cond, check: str, **data) -> bool:
        """Count one verified instance; on failure keep a witness."""
        if self.observational:
            self.tally("observed_holds" if cond else "observed_violations")
            if not cond and len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append({"observed": check, **jsonable(data)})
            return bool(cond)
        self.tally("checked")
        if cond:
            return True
        self.failures += 1
        self.tally("failed")
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append({"check": check, **jsonable(data)})
        return False

    @contextmanager
    def observing(self, active: bool = True):
        """Inside the block, expectations are recorded as observations only."""
        prev = self.observational
        self.observational = prev or active
        try:
            yield
        finally:
            self.observational = prev

    def sample(self, items, n: int | None = None) -> list:
        """All items when exhaustive, otherwise n drawn without replacement."""
        items = list(items)
        k = self.n if n is None else n
        if self.exhaustive or len(items) <= k:
            return items
        idx = sorted(self.rng.choice(len(items), size=k, replace=False).tolist())
        return [items[i] for i in idx]

    def count(self, n: int | None = None) -> int:
        return self.n if n is None else n

    def randint(self, hi: int) -> int:
        return int(self.rng.integers(hi))


@dataclass(frozen=True)
class Theorem:
    theorem_id: str
    anchor: str                          # topic key
    summary: str
    fn: Callable[[Context], None]
    min_q: int = 2                       # hypothesis q >= min_q
    only_q: tuple = ()                   # the check is defined for these q only
    hypothesis: str = ""
    observe_from: int | None = None      # below min_q, run as observation from this q

    def unmet(self, q: int) -> str | None:
        if self.only_q and q not in self.only_q:
            return f"defined for q in {list(self.only_q)} only"
        if q < self.min_q:
            return self.hypothesis or f"requires q>={self.min_q}"
        return None


REGISTRY: dict[str, Theorem] = {}


def register(theorem_id: str, anchor: str, summary: str, min_q: int = 2,
             only_q: tuple = (), hypothesis: str = "", observe_from: int | None = None):
    def deco(fn):
        if theorem_id in REGISTRY:
            raise ValueError(f"duplicate theorem id {theorem_id}")
        REGISTRY[theorem_id] = Theorem(theorem_id, anchor, summary, fn, min_q, only_q,
                                       hypothesis, observe_from)
        return fn
    return deco


def tower_constants(frame: BruckBoseFrame) -> dict:
    T = frame.tower
    return {"t1": T.t1, "t0": T.t0, "s1": T.s1, "s0": T.s0}


def run_check(theorem_id: str, q: int, mode: str = "sampled", n: int = 200, seed: int = 0,
              frame: BruckBoseFrame | None = None, primpoly=None) -> CheckRecord:
    """Run one registered checker and return its record.

    Checkers raise Skip for an unmet hypothesis.  Any other exception is a
    failure whose witness is the exception message.
    """
    from . import checks  # noqa: F401  (fills the registry)
    if theorem_id not in REGISTRY:
        raise UnknownTheorem(theorem_id)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    th = REGISTRY[theorem_id]
    frame = frame if frame is not None else make_frame(q, primpoly)
    rec = CheckRecord(theorem_id, q, "pass", tower=tower_constants(frame), mode=mode)
    start = time.perf_counter()
    unmet = th.unmet(q)
    observe = bool(unmet) and not th.only_q and th.observe_from is not None and q >= th.observe_from
    if unmet and not observe:
        rec.status, rec.reason = "skip", unmet
    else:
        ctx = Context(theorem_id, frame, mode, n, seed)
        if observe:
            ctx.observational = True
            rec.status, rec.reason = "skip", f"{unmet}; observation only"
        try:
            th.fn(ctx)
        except Skip as exc:
            rec.status, rec.reason = "skip", str(exc)
        except Exception as exc:  # a checker crash is a failure, never a pass
            ctx.failures += 1
            ctx.witnesses.append({"check": "exception", "error": f"{type(exc).__name__}: {exc}"})
            rec.reason = "checker raised"
        rec.counts = ctx.counts
        rec.witnesses = ctx.witnesses[:MAX_WITNESSES + 1]
        if rec.status != "skip":
            if ctx.failures:
                rec.status = "fail"
                rec.reason = rec.reason or f"{ctx.failures} failed checks"
            elif not ctx.counts.get("checked"):
                rec.status, rec.reason = "fail", "nothing was checked"
    rec.elapsed_ms = (time.perf_counter() - start) * 1000.0
    return rec


def registered_ids() -> list[str]:
    from . import checks  # noqa: F401
    return list(REGISTRY)
