"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--q 3,5,7] [--repeat 5] [--json]

Both backends get the same inputs; their outputs must agree before any
timing is reported.
"""
from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from bbgeom import Level, make_tower
from bbgeom.kernels import available_backends, get_backend


def random_upper(rng, n: int, F: int) -> np.ndarray:
    Q = np.triu(rng.integers(0, F, size=(n, n)))
    Q[n - 1, n - 1] = 1 + rng.integers(0, F - 1)
    return Q.astype(np.int64)


def cases(q: int, rng):
    T = make_tower(q)
    ft = T.tables()
    F2, F4 = T.size(Level.STAR), T.size(Level.FOURSTAR)
    xs = np.arange(F4, dtype=np.int64)
    coeffs = rng.integers(0, F2, size=9).astype(np.int64)
    pts = rng.integers(0, F2, size=(200_000, 5)).astype(np.int64)
    form = rng.integers(0, F2, size=5).astype(np.int64)
    Q5 = random_upper(rng, 5, F2)
    Q1, Q2 = random_upper(rng, 4, q), random_upper(rng, 4, q)
    return [
        ("poly_eval deg 8 on F_q^4", lambda k: k.poly_eval(ft, coeffs, xs)),
        ("lin_eval 200k points", lambda k: k.lin_eval(ft, form, pts)),
        ("quad_eval 200k points", lambda k: k.quad_eval(ft, Q5, pts)),
        ("pair_scan PG(3,q^2)", lambda k: k.pair_scan(ft, Q1, Q2, F2)),
        ("pair_scan PG(3,q^4)", lambda k: k.pair_scan(ft, Q1, Q2, F4)),
    ]


def same(a, b) -> bool:
    if isinstance(a, list):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", default="3,5,7")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the numpy fallback only", file=sys.stderr)
    rows = []
    for q in (int(x) for x in args.q.split(",")):
        rng = np.random.default_rng(args.seed)
        for name, fn in cases(q, rng):
            outs = {b: fn(get_backend(b)) for b in backends}
            ref = outs["numpy"]
            if not all(same(o, ref) for o in outs.values()):
                print(f"q={q} {name}: backends disagree", file=sys.stderr)
                return 1
            row = {"q": q, "kernel": name}
            for b in backends:
                kern = get_backend(b)
                row[b] = min(timeit.repeat(lambda: fn(kern), number=1, repeat=args.repeat))
            if "cython" in row:
                row["speedup"] = row["numpy"] / row["cython"]
            rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'q':>3s}  {'kernel':28s} {'numpy s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for r in rows:
        cy = f"{r['cython']:10.4f}" if "cython" in r else f"{'-':>10s}"
        sp = f"{r['speedup']:7.1f}x" if "speedup" in r else f"{'-':>8s}"
        print(f"{r['q']:3d}  {r['kernel']:28s} {r['numpy']:10.4f} {cy} {sp}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
