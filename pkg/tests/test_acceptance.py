"""One test per acceptance criterion, each run at full scale.

Every run goes through the same manifest path as ``forcinglab run``, and
the last test replays all of them byte for byte.
"""

import time

import pytest

from forcinglab.cli import execute
from forcinglab.serialize import RunManifest, loads
from forcinglab.suites import ACCEPTANCE, summary_lines

SEED = 0
RUNS = {}


@pytest.fixture
def report(capsys):
    def emit(ok: bool, label: str, detail: str = "", notes=()):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label}" + (f" ({detail})" if detail else ""))
            for line in notes:
                print(f"  {line}")
    return emit


def manifest(suite: str) -> RunManifest:
    return RunManifest("run", suite, {"scale": 1.0}, SEED)


def run(suite: str, report, label: str, budget: float | None = None) -> dict:
    start = time.perf_counter()
    out = execute(manifest(suite))
    took = time.perf_counter() - start
    RUNS[suite] = out.text
    doc = loads(out.text)["report"]
    ok = out.passed and (budget is None or took < budget)
    detail = f"{took:.1f} s" + (f", budget {budget:.0f} s" if budget else "")
    notes = [line for line in summary_lines(doc) if not line.startswith("PASS") or "search failures" in line]
    report(ok, label, detail, notes)
    assert out.passed, "\n".join(summary_lines(doc))
    if budget is not None:
        assert took < budget, f"took {took:.1f} s"
    return doc


def cases(doc: dict) -> dict:
    return {c["case"]: c for c in doc["cases"]}


def test_fast_predicates_agree_with_naive_checkers(report):
    doc = run("oracle-equivalence", report, "oracle equivalence on 10^5 instances", budget=60)
    assert sum(c["instances"] for c in doc["cases"]) >= 100_000
    assert all(c["failed"] == 0 for c in doc["cases"])


def test_split_families_amalgamate(report):
    doc = run("split-amalgamation", report, "split delta-system families amalgamate")
    assert cases(doc)["families d=2..4"]["instances"] >= 10_000


def test_normalization_meets_every_clause(report):
    doc = run("normalization", report, "normalization meets every conclusion clause")
    assert cases(doc)["tree-and-subtree conditions"]["instances"] >= 10_000


def test_compatible_pair_among_translated_copies(report):
    doc = run("compatible-pair", report, "compatible pair among 200 translated copies")
    assert all(c["failed"] == 0 for c in doc["cases"])


def test_pprime_simulation_with_all_pairs_committed(report):
    run("pprime-simulation", report, "P' simulation, 8 indices, height 12, 28 pairs", budget=30)


def test_side_condition_unions_stay_adequate(report):
    doc = run("universe-profiles", report, "union-adequacy profiles")
    default = [c for c in doc["cases"] if c["case"].endswith("on default")]
    assert sum(c["instances"] for c in default) >= 10_000
    assert all(c["failed"] == 0 for c in doc["cases"])


def test_amalgamation_over_models(report):
    doc = run("model-amalgamation", report, "amalgamation over models, clause plants rejected")
    assert cases(doc)["fingerprint-matched families"]["instances"] >= 1000


def test_projection_laws(report):
    doc = run("projection-laws", report, "projection laws and amalgam below both")
    by = cases(doc)
    for name in ("extends its projection", "monotone", "below a cut condition", "distributes over sums"):
        assert by[name]["instances"] >= 10_000 and by[name]["failed"] == 0
    assert by["amalgam below both"]["instances"] >= 1000 and by["amalgam below both"]["failed"] == 0


def test_planted_witnesses_are_recovered(report):
    doc = run("reflection-density", report, "planted witness recovery")
    for c in doc["cases"]:
        if not c["honest"]:
            assert c["instances"] >= 500 and c["failed"] == 0


def test_quotient_semantics(report):
    doc = run("quotient-semantics", report, "converse counterexample and incomparability criterion")
    assert cases(doc)["converse counterexample as planted"]["failed"] == 0


def test_replayed_runs_are_byte_identical(report):
    names = list(ACCEPTANCE)
    assert len(names) == 10
    missing = [n for n in names if n not in RUNS]
    for n in missing:
        RUNS[n] = execute(manifest(n)).text
    differ = [n for n in names if execute(manifest(n)).text != RUNS[n]]
    report(not differ, "replay from manifest is byte-identical", f"{len(names)} runs")
    assert not differ, differ
