import dataclasses
import random

from click.testing import CliRunner

from forcinglab.cli import main
from forcinglab.generators import plant_split_family
from forcinglab.serialize import RunManifest, dumps, loads


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_gen_is_reproducible(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert invoke("gen", "tree", "--count", 5, "--seed", 3, "--out", a).exit_code == 0
    assert invoke("gen", "tree", "--count", 5, "--seed", 3, "--out", b).exit_code == 0
    assert a.read_bytes() == b.read_bytes()
    doc = loads(a.read_text())
    assert doc["manifest"] == RunManifest("gen", "tree", {"kind": "tree", "count": 5}, 3)
    assert len(doc["instances"]) == 5


def test_usage_errors_exit_2(tmp_path):
    assert invoke("gen", "bogus").exit_code == 2
    assert invoke("run", "--suite", "bogus").exit_code == 2
    assert invoke("run", "--suite", "split-amalgamation", "--corpus", tmp_path / "missing.txt").exit_code == 2
    assert invoke("verify", tmp_path / "missing.txt").exit_code == 2
    assert invoke("export", tmp_path / "missing.txt").exit_code == 2


def test_export_formats(tmp_path):
    path = tmp_path / "c.txt"
    invoke("gen", "p", "--count", 2, "--out", path)
    assert invoke("export", path, "--format", "svg").exit_code == 2
    res = invoke("export", path, "--format", "dot", "--index", 1)
    assert res.exit_code == 0 and res.stdout.startswith("digraph")
    assert invoke("export", path, "--format", "dot", "--index", 5).exit_code == 2
    res = invoke("export", path)
    assert res.exit_code == 0 and loads(res.stdout) == loads(path.read_text())


def test_empty_corpus_passes_vacuously(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text(dumps({"kind": "split-family", "instances": []}))
    res = invoke("run", "--suite", "split-amalgamation", "--corpus", path)
    assert res.exit_code == 0
    assert "0 instances, 0 failed" in res.stderr


def test_planted_violation_is_reported(tmp_path):
    fam = plant_split_family(random.Random(3), 3)
    bad = dataclasses.replace(fam, deltas=list(reversed(fam.deltas)))
    path = tmp_path / "bad.txt"
    path.write_text(dumps({"kind": "split-family", "instances": [fam, bad]}))
    res = invoke("run", "--suite", "split-amalgamation", "--corpus", path)
    assert res.exit_code == 1
    (case,) = loads(res.stdout)["report"]["cases"]
    assert case["failed"] == 1 and case["counterexamples"]


def test_corpus_of_the_wrong_kind_is_a_usage_error(tmp_path):
    path = tmp_path / "t.txt"
    invoke("gen", "tree", "--count", 2, "--out", path)
    assert invoke("run", "--suite", "split-amalgamation", "--corpus", path).exit_code == 2


def test_verify_replays_byte_for_byte(tmp_path):
    corpus, report = tmp_path / "c.txt", tmp_path / "r.txt"
    invoke("gen", "split-family", "--count", 3, "--seed", 9, "--out", corpus)
    assert invoke("verify", corpus).exit_code == 0
    assert invoke("run", "--suite", "split-amalgamation", "--corpus", corpus, "--out", report).exit_code == 0
    res = invoke("verify", report)
    assert res.exit_code == 0 and "byte-identical" in res.stdout
    report.write_text(report.read_text() + " ")
    assert invoke("verify", report).exit_code == 1


def test_config_file_supplies_options(tmp_path):
    cfg, out = tmp_path / "cfg.txt", tmp_path / "o.txt"
    cfg.write_text(dumps({"kind": "pstar", "count": 4, "seed": 2}))
    assert invoke("gen", "--config", cfg, "--out", out).exit_code == 0
    m = loads(out.read_text())["manifest"]
    assert (m.target, m.config["count"], m.seed) == ("pstar", 4, 2)


def test_small_simulations_verify(tmp_path):
    for fmt in ("text", "dot"):
        out = tmp_path / f"sim.{fmt}"
        res = invoke("simulate", "--indices", 3, "--height", 4, "--seed", 1, "--format", fmt, "--out", out)
        assert res.exit_code == 0, res.output
        assert invoke("verify", out).exit_code == 0
    out = tmp_path / "ptheta.txt"
    assert invoke("simulate", "--target", "ptheta", "--indices", 3, "--height", 4, "--out", out).exit_code == 0
    assert invoke("verify", out).exit_code == 0
