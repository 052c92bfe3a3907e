"""Acceptance criteria 1-10, one pass/fail line each.

    pytest -v -s tests/test_acceptance.py
    python3 tests/test_acceptance.py [1 4 10 ...]

Every criterion runs the registered checkers (or the library directly) at
the stated q, checks the instance counts in the records and holds the
wall-clock budget.
"""
from __future__ import annotations

import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

from bbgeom import make_frame, make_tower
from bbgeom.bruckbose import is_spread, spread_from_transversal
from bbgeom.theorem_suite import run_check
from bbgeom.varieties.ruled import census_expected


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def records(ids, qs, mode="sampled"):
    return {(t, q): run_check(t, q, mode) for t in ids for q in qs}


def failed(recs) -> list[str]:
    return [f"{t}@{q}:{r.status}" for (t, q), r in recs.items() if r.status != "pass"]


def total(rec, prefix: str) -> int:
    return sum(v for k, v in rec.counts.items() if k.startswith(prefix) and isinstance(v, int))


def crit_1():
    qs = [2, 3, 4, 5, 7, 8, 9]
    bad = []
    with Timer() as tm:
        for q in qs:
            T = make_tower(q)
            tq = T.frob(T.tau)
            if T.mul(T.tau, tq) != T.neg(T.t0) or T.add(T.tau, tq) != T.t1:
                bad.append(f"tower@{q}")
            fr = make_frame(q)
            lines = list(fr.spread.values())
            if len(lines) != q * q + 1 or not is_spread(fr, lines):
                bad.append(f"spread@{q}")
            if spread_from_transversal(fr) != fr.spread:
                bad.append(f"constructions@{q}")
        bad += failed(records(["bb-coordinates", "spread-construction"], qs))
    ok = not bad and tm.seconds < 5
    return ok, f"q={qs} {tm.seconds:.1f}s (budget 5s) {' '.join(bad)}"


def crit_2():
    with Timer() as tm:
        recs = records(["bb-incidence"], [3, 4])
    bad = failed(recs)
    bad += [f"points@{q}" for (_, q), r in recs.items() if r.counts.get("points") != q ** 4]
    ok = not bad and tm.seconds < 30
    return ok, f"q=[3, 4] exhaustive pair cover {tm.seconds:.1f}s (budget 30s) {' '.join(bad)}"


def crit_3():
    bad, times = [], []
    for q in (3, 4, 5):
        with Timer() as tm:
            recs = records(["3-space-meets-ruled", "lem:tc-brs"], [q])
        times.append(tm.seconds)
        bad += failed(recs)
        census = recs[("3-space-meets-ruled", q)]
        if census.counts.get("surfaces", 0) < 5 or census.counts.get("counts") != list(census_expected(q)):
            bad.append(f"census@{q}")
        if tm.seconds >= 120:
            bad.append(f"time@{q}")
    return not bad, f"q=[3, 4, 5] max {max(times):.1f}s per q (budget 120s) {' '.join(bad)}"


def crit_4():
    bad, times, seen = [], [], []
    for q in (3, 4, 5, 7):
        with Timer() as tm:
            rec = run_check("thm:Ccapsi", q)
        times.append(tm.seconds)
        kinds = {k: v for k, v in rec.counts.items() if k.startswith("conics[")}
        seen.append(sum(kinds.values()))
        if rec.status != "pass":
            bad.append(f"fail@{q}")
        if sum(kinds.values()) < 100 or len(kinds) != 3 or min(kinds.values()) == 0:
            bad.append(f"coverage@{q}")
        if tm.seconds >= 120:
            bad.append(f"time@{q}")
    return not bad, (f"q=[3, 4, 5, 7] conics {seen}, max {max(times):.1f}s per q (budget 120s) "
                     f"{' '.join(bad)}")


def crit_5():
    recs = records(["adult-conic-g", "cor:PcorrPsigma"], [3, 4, 5, 7])
    bad = failed(recs)
    return not bad, f"q=[3, 4, 5, 7] every pencil member, {len(recs)} records {' '.join(bad)}"


def crit_6():
    with Timer() as tm:
        recs = records(["lem:nrc-extn"], [8, 9, 11])
        tight = run_check("lem:nrc-extn-tight", 7)
    bad = failed(recs)
    bad += [f"curves@{q}" for (_, q), r in recs.items() if r.counts.get("curves", 0) < 100]
    if tight.status != "pass":
        bad.append("tight@7")
    ok = not bad and tm.seconds < 60
    return ok, (f"q=[8, 9, 11] extension, q=7 tight witness ({tight.counts.get('points_off_quadric')} "
                f"points off) {tm.seconds:.1f}s (budget 60s) {' '.join(bad)}")


def crit_7():
    bad = []
    with Timer() as tm:
        a = records(["sec3-regulus-special"], [3, 4, 5], mode="exhaustive")
        bad += failed(a)
        b = records(["thm-tgt-conic-T-1", "thm-tgt-conic-T-2", "conv-tgt"], [7, 8, 9])
        bad += failed(b)
        for q in (7, 8, 9):
            if b[("thm-tgt-conic-T-2", q)].counts.get("conics", 0) < 200:
                bad.append(f"(b)conics@{q}")
            if b[("conv-tgt", q)].counts.get("synthesized", 0) < 50:
                bad.append(f"(b)synthesized@{q}")
        c = records(["smiley-conic", "baby-not-T-part2", "4nrc-is-baby-1"], [8, 9, 11])
        bad += failed(c)
        for q in (8, 9, 11):
            if total(c[("baby-not-T-part2", q)], "case[") < 200:
                bad.append(f"(c)conics@{q}")
            if total(c[("4nrc-is-baby-1", q)], "synthesized[") < 50:
                bad.append(f"(c)synthesized@{q}")
    ok = not bad and tm.seconds < 900
    return ok, f"(a) q=[3, 4, 5] (b) q=[7, 8, 9] (c) q=[8, 9, 11] {tm.seconds:.0f}s (budget 900s) {' '.join(bad)}"


def crit_8():
    recs = records(["thm:partition"], [3, 4, 5])
    bad = failed(recs)
    bad += [f"triples@{q}" for (_, q), r in recs.items() if r.counts.get("subplanes", 0) < 20]
    baby = records(["adult-baby"], [3, 4, 5])
    bad += failed(baby)
    for (_, q), r in baby.items():
        if r.counts.get("fq_conics_per_conic") != q * (q * q + 1):
            bad.append(f"count@{q}")
    return not bad, f"partition q=[3, 4, 5], subconic count 30/68/130 {' '.join(bad)}"


def crit_9():
    recs = records(["thm:Baerline-trans", "cor:Baerplane-trans"], [3, 4, 5])
    bad = failed(recs)
    for (t, q), r in recs.items():
        key = "sublines" if t == "thm:Baerline-trans" else "subplanes"
        if r.counts.get(key, 0) < 20:
            bad.append(f"{key}@{q}")
    return not bad, f"q=[3, 4, 5] all conjugate pairs, >= 20 sublines/subplanes {' '.join(bad)}"


def crit_10():
    with tempfile.TemporaryDirectory() as d:
        outs = []
        for k in range(2):
            dest = Path(d) / f"run{k}.json"
            proc = subprocess.run([sys.executable, "-m", "bbgeom", "--q", "2,3", "--seed", "0",
                                   "--no-timings", "--out", str(dest)], capture_output=True, text=True)
            if proc.returncode != 0:
                return False, f"run {k} exited {proc.returncode}: {proc.stderr.strip()[:200]}"
            outs.append(dest.read_bytes())
    same = outs[0] == outs[1]
    return same, f"full suite at q=[2, 3] twice, {len(outs[0])} bytes, {'identical' if same else 'differ'}"


CRITERIA = {1: crit_1, 2: crit_2, 3: crit_3, 4: crit_4, 5: crit_5,
            6: crit_6, 7: crit_7, 8: crit_8, 9: crit_9, 10: crit_10}
TITLES = {1: "field and frame bedrock", 2: "plane axioms", 3: "hyperplane census",
          4: "conic locus at infinity", 5: "pencils meet g", 6: "quadric extension and tightness",
          7: "specialness equivalences", 8: "partitions and subconic count",
          9: "hyperbolic congruence", 10: "determinism"}


def line(k: int, ok: bool, detail: str) -> str:
    return f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {TITLES[k]}: {detail.strip()}"


@pytest.mark.slow
@pytest.mark.parametrize("k", list(CRITERIA))
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k]()
    with capsys.disabled():
        print("\n" + line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    wanted = [int(a) for a in sys.argv[1:]] or list(CRITERIA)
    results = [(k, *CRITERIA[k]()) for k in wanted]
    for k, ok, detail in results:
        print(line(k, ok, detail), flush=True)
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
