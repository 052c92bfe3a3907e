"""bbgeom: run the registered checkers over a list of q and write a report.

Exit status is 0 when no checker failed (skips do not fail), 1 when one
did, and 2 for invalid flags.

CSV flattening: one row per record with columns theorem_id, anchor, q,
status, reason, mode, elapsed_ms, t1, t0, s1, s0, counts, witnesses; the
last two hold compact JSON.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .gf_tower import TowerError, make_tower, prime_power
from .theorem_suite import MODES, REGISTRY, registered_ids, run_check

FORMATS = ("json", "csv", "text")
CSV_COLUMNS = ("theorem_id", "anchor", "q", "status", "reason", "mode", "elapsed_ms",
               "t1", "t0", "s1", "s0", "counts", "witnesses")


@dataclass
class RunConfig:
    q_list: list[int]
    primpoly: dict[int, tuple[int, int]] = field(default_factory=dict)
    suite: list[str] = field(default_factory=list)
    mode: str = "sampled"
    samples: int = 200
    seed: int = 0
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    timings: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["primpoly"] = {str(q): list(v) for q, v in sorted(self.primpoly.items())}
        del d["out"], d["jobs"]
        return d


def parse_q_list(text: str) -> list[int]:
    """'3,4,7' or '2-5' or a mix; every q must be a prime power."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-", 1))
            qs = range(lo, hi + 1)
            qs = [q for q in qs if is_prime_power(q)]
        else:
            q = int(part)
            make_tower(q)
            qs = [q]
        out.extend(q for q in qs if q not in out)
    if not out:
        raise ValueError("empty q list")
    return out


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except TowerError:
        return False
    return True


def parse_primpoly(items: list[str]) -> dict[int, tuple[int, int]]:
    out = {}
    for item in items:
        q_text, _, coeffs = item.partition(":")
        t1, t0 = (int(x) for x in coeffs.split(","))
        q = int(q_text)
        make_tower(q, (t1, t0))
        out[q] = (t1, t0)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bbgeom", description=__doc__.splitlines()[0].partition(": ")[2],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--q", help="comma list of prime powers, ranges a-b allowed")
    p.add_argument("--primpoly", action="append", default=[], metavar="Q:T1,T0",
                   help="use x^2 - t1 x - t0 over F_q for the quadratic step (repeatable)")
    p.add_argument("--suite", default="all", help="'all' or a comma list of checker ids")
    p.add_argument("--mode", choices=MODES, default="sampled")
    p.add_argument("--samples", type=int, default=200, help="instances per checker in sampled mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--no-timings", action="store_true",
                   help="write elapsed_ms as 0 so reports are byte-identical across runs")
    p.add_argument("--list", action="store_true", help="list checker ids and exit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def config_from_args(parser: argparse.ArgumentParser, args) -> RunConfig:
    if args.q is None:
        parser.error("--q is required")
    try:
        q_list = parse_q_list(args.q)
    except TowerError as exc:
        parser.error(str(exc))
    except ValueError:
        parser.error(f"cannot read --q {args.q!r}")
    try:
        primpoly = parse_primpoly(args.primpoly)
    except TowerError as exc:
        parser.error(str(exc))
    except ValueError:
        parser.error("--primpoly takes Q:T1,T0")
    known = registered_ids()
    if args.suite == "all":
        suite = known
    else:
        suite = [s.strip() for s in args.suite.split(",") if s.strip()]
        unknown = [s for s in suite if s not in REGISTRY]
        if unknown or not suite:
            parser.error(f"unknown checker id(s): {', '.join(unknown) or '(none given)'}")
        suite = [s for s in known if s in suite]
    if args.samples < 1 or args.jobs < 1:
        parser.error("--samples and --jobs must be positive")
    return RunConfig(q_list, primpoly, suite, args.mode, args.samples, args.seed, args.format,
                     args.out, args.jobs, not args.no_timings)


def _task(job):
    theorem_id, q, mode, n, seed, primpoly = job
    return run_check(theorem_id, q, mode, n, seed, primpoly=primpoly)


def run_suite(cfg: RunConfig) -> list:
    """Records in checker order, then q order, whatever the pool finishes first."""
    jobs = [(t, q, cfg.mode, cfg.samples, cfg.seed, cfg.primpoly.get(q))
            for t in cfg.suite for q in cfg.q_list]
    if cfg.jobs == 1:
        return [_task(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        return list(pool.map(_task, jobs))


def record_dict(rec, timings: bool) -> dict:
    d = rec.to_dict(timings)
    return {"theorem_id": d.pop("theorem_id"), "anchor": REGISTRY[rec.theorem_id].anchor, **d}


def render_json(cfg: RunConfig, records) -> str:
    report = {"version": __version__, "config": cfg.to_dict(),
              "records": [record_dict(r, cfg.timings) for r in records]}
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def render_csv(cfg: RunConfig, records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        d = record_dict(r, cfg.timings)
        row = {k: d.get(k, "") for k in CSV_COLUMNS}
        row.update(d["tower"])
        row["counts"] = json.dumps(d.get("counts", {}), sort_keys=True, ensure_ascii=False)
        row["witnesses"] = json.dumps(d.get("witnesses", []), ensure_ascii=False)
        w.writerow(row)
    return buf.getvalue()


def render_text(cfg: RunConfig, records) -> str:
    lines = []
    for r in records:
        t = f"{r.elapsed_ms / 1000:8.2f}s" if cfg.timings else ""
        reason = f"  ({r.reason})" if r.reason else ""
        lines.append(f"{r.status.upper():4s}  q={r.q:<3d} {r.theorem_id:28s}{t}{reason}")
    lines.append("")
    lines.append(f"{'q':>4s} {'pass':>5s} {'fail':>5s} {'skip':>5s}")
    for q in cfg.q_list:
        st = [r.status for r in records if r.q == q]
        lines.append(f"{q:4d} {st.count('pass'):5d} {st.count('fail'):5d} {st.count('skip'):5d}")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.list:
        for t in registered_ids():
            th = REGISTRY[t]
            print(f"{t:28s} {th.anchor:48s} {th.summary}")
        return 0
    try:
        cfg = config_from_args(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    records = run_suite(cfg)
    text = RENDERERS[cfg.format](cfg, records)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if any(r.status == "fail" for r in records) else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
