import json

import pytest

from bbgeom.theorem_suite import MODES, REGISTRY, UnknownTheorem, registered_ids, run_check

EXPECTED_IDS = {
    "bb-coordinates", "spread-construction", "bb-incidence", "quartic-extension", "conjugate-points",
    "hyperbolic-congruence", "g-special-definitions",
    "BB-Baer-1", "BB-Baer-2", "BB-Baer-3", "BB-Baer-4", "BB-Baer-5",
    "adult-conic-g", "cor:PcorrPsigma", "thm:Ccapsi", "adult-conic-T", "pencil-exactness",
    "3-space-meets-ruled", "lem:tc-brs", "ruled-extension-agreement",
    "cath-conic", "adult-baby", "lem:sect-conic", "lem:sect-conic-converse",
    "thm-tgt-conic-T-1", "thm-tgt-conic-T-2", "conv-tgt",
    "smiley-conic", "baby-not-T-part2", "4nrc-is-baby-1",
    "lem:nrc-extn", "lem:nrc-extn-tight",
    "lemma-3-Baer", "thm:partition-intro", "cor:tgt-baby", "thm:partition",
    "part-sec-conic", "res:circle", "sec3-regulus-special",
    "thm:Baerline-trans", "cor:Baerplane-trans",
}


def test_registry_is_complete():
    assert set(registered_ids()) == EXPECTED_IDS
    anchors = [REGISTRY[t].anchor for t in registered_ids()]
    assert len(set(anchors)) == len(anchors)
    assert all("/" in a for a in anchors)


@pytest.mark.parametrize("theorem_id", sorted(EXPECTED_IDS))
def test_every_checker_passes_or_skips_at_q3(theorem_id):
    rec = run_check(theorem_id, 3, n=40)
    assert rec.status in ("pass", "skip"), rec.witnesses
    if rec.status == "pass":
        assert rec.counts["checked"] > 0 and not rec.witnesses


@pytest.mark.parametrize("theorem_id", sorted(EXPECTED_IDS))
def test_every_checker_passes_or_skips_at_q2(theorem_id):
    rec = run_check(theorem_id, 2, n=40)
    assert rec.status in ("pass", "skip"), rec.witnesses


def test_skip_reasons():
    rec = run_check("smiley-conic", 5)
    assert rec.status == "skip" and rec.reason.startswith("requires q>7")
    rec = run_check("lem:nrc-extn-tight", 8)
    assert rec.status == "skip" and "q in [7]" in rec.reason
    rec = run_check("thm:partition", 2)
    assert rec.status == "skip" and rec.reason.endswith("observation only")
    assert rec.counts.get("observed_holds", 0) > 0


def test_small_conic_hypothesis_is_real():
    # at q = 2 a conic cell has 3 points and cannot be told from other cells
    rec = run_check("thm:partition-intro", 2)
    assert rec.status == "skip"
    assert rec.counts.get("observed_violations", 0) > 0


def test_unknown_id_and_mode():
    with pytest.raises(UnknownTheorem):
        run_check("no-such-result", 3)
    with pytest.raises(ValueError):
        run_check("bb-coordinates", 3, mode="lazy")
    assert set(MODES) == {"sampled", "exhaustive"}


def test_records_are_deterministic():
    a = run_check("adult-conic-g", 4, n=30, seed=5).to_dict(timings=False)
    b = run_check("adult-conic-g", 4, n=30, seed=5).to_dict(timings=False)
    assert json.dumps(a) == json.dumps(b)
    assert a["tower"] == {"t1": b["tower"]["t1"], "t0": b["tower"]["t0"],
                          "s1": b["tower"]["s1"], "s0": b["tower"]["s0"]}


def test_primpoly_override_reaches_record():
    rec = run_check("bb-coordinates", 7, primpoly=(1, 4))
    assert rec.status == "pass"
    assert (rec.tower["t1"], rec.tower["t0"]) == (1, 4)


def test_record_shape():
    d = run_check("spread-construction", 3).to_dict()
    assert list(d) == ["theorem_id", "q", "status", "counts", "elapsed_ms", "tower", "mode"]
    assert d["elapsed_ms"] > 0
