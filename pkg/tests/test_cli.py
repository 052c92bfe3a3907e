import csv
import io
import json
import subprocess
import sys

import pytest

from bbgeom import __version__
from bbgeom.cli import CSV_COLUMNS, main, parse_q_list
from bbgeom.theorem_suite import registered_ids

FAST = "bb-coordinates,spread-construction,adult-conic-g"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_q_list():
    assert parse_q_list("3,4,7") == [3, 4, 7]
    assert parse_q_list("2-9") == [2, 3, 4, 5, 7, 8, 9]
    assert parse_q_list("3, 3,2") == [3, 2]


@pytest.mark.parametrize("argv,msg", [
    (["--q", "6"], "6 is not a prime power"),
    (["--q", "3", "--suite", "nope"], "unknown checker id"),
    (["--q", "x"], "cannot read --q"),
    (["--q", "3", "--primpoly", "3:0,0"], ""),
    (["--q", "3", "--samples", "0"], "must be positive"),
    ([], "--q is required"),
])
def test_bad_flags_exit_2(argv, msg, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and msg in err and out == ""


def test_list_and_version(capsys):
    code, out, _ = run(["--list"], capsys)
    assert code == 0 and "thm:Ccapsi" in out and len(out.splitlines()) == 41
    code, out, _ = run(["--version"], capsys)
    assert code == 0 and out.strip() == f"bbgeom {__version__}"


def test_json_report(capsys):
    code, out, _ = run(["--q", "2,3", "--suite", FAST], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["version"] == __version__
    assert rep["config"]["q_list"] == [2, 3]
    ids = [(r["theorem_id"], r["q"]) for r in rep["records"]]
    order = [t for t in registered_ids() if t in FAST.split(",")]
    assert ids == [(t, q) for t in order for q in (2, 3)]
    r = rep["records"][0]
    assert list(r)[:3] == ["theorem_id", "anchor", "q"]
    assert set(r["tower"]) == {"t1", "t0", "s1", "s0"}


def test_csv_and_text(capsys):
    code, out, _ = run(["--q", "3", "--suite", FAST, "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 3
    assert json.loads(rows[0]["counts"])["checked"] > 0
    code, out, _ = run(["--q", "3", "--suite", FAST, "--format", "text"], capsys)
    assert code == 0 and out.splitlines()[0].startswith("PASS")
    assert "   3     3     0     0" in out


def test_skips_do_not_fail(capsys):
    code, out, _ = run(["--q", "5", "--suite", "lem:nrc-extn,smiley-conic"], capsys)
    assert code == 0
    assert {r["status"] for r in json.loads(out)["records"]} == {"skip"}


def test_out_file_and_primpoly(tmp_path, capsys):
    dest = tmp_path / "r.json"
    code, out, _ = run(["--q", "7", "--suite", "bb-coordinates", "--primpoly", "7:1,4",
                        "--out", str(dest)], capsys)
    assert code == 0 and out == ""
    rep = json.loads(dest.read_text())
    assert rep["config"]["primpoly"] == {"7": [1, 4]}
    assert rep["records"][0]["tower"]["t0"] == 4


def test_byte_identical_across_runs_and_jobs(tmp_path):
    outs = []
    for jobs in ("1", "1", "3"):
        dest = tmp_path / f"r{len(outs)}.json"
        subprocess.run([sys.executable, "-m", "bbgeom", "--q", "2,3,4", "--suite", FAST, "--seed", "11",
                        "--no-timings", "--jobs", jobs, "--out", str(dest)], check=True)
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1] == outs[2]
