"""Command line driver: ``gen``, ``run``, ``simulate``, ``export`` and ``verify``.

Every output document carries the manifest that produced it, and the
output is a pure function of that manifest, so ``verify`` can replay a
run and compare the bytes.
"""

from __future__ import annotations

import json
import sys
from itertools import combinations
from pathlib import Path

import click

from . import corpus, serialize, suites
from .ccc import SimConfig, simulate_generic_pprime
from .generators import THETA
from .quotient import FilterConfig, simulate_ptheta_filter
from .serialize import RunManifest, dumps, loads, to_dot
from .side import p_violations
from .trees import validate_tree
from .universe import DEFAULT_UNIVERSE, Universe

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DOT_PREFIX = "// manifest "

SIM_DEFAULTS = {"target": "pprime", "indices": 8, "height": 12, "pairs": "all", "theta": THETA, "reuse": 0.7}


class Outcome:
    def __init__(self, text: str, passed: bool, summary=()):
        self.text = text
        self.passed = passed
        self.summary = list(summary)


# execution ---------------------------------------------------------------------

def _document(m: RunManifest, **body) -> str:
    return dumps({"manifest": m, **body})


def _dot_document(m: RunManifest, obj) -> str:
    return DOT_PREFIX + serialize._key(serialize.encode(m)) + "\n" + to_dot(obj)


def _corpus_from(config: dict):
    c = config.get("corpus")
    if c is None:
        return None
    if isinstance(c, RunManifest):
        return c.config["kind"], loads(execute(c).text)["instances"]
    return c["kind"], c["instances"]


def _exec_gen(m: RunManifest) -> Outcome:
    kind, count = m.config["kind"], m.config["count"]
    xs = corpus.generate(kind, count, m.seed)
    return Outcome(_document(m, instances=xs), True, [f"generated {len(xs)} {kind} instances"])


def _exec_run(m: RunManifest) -> Outcome:
    report = suites.run_suite(m.target, m.seed, m.config.get("scale", 1.0), corpus=_corpus_from(m.config))
    return Outcome(_document(m, report=report), report["passed"], suites.summary_lines(report))


def _sim_config(cfg: dict, seed: int) -> SimConfig:
    idx = tuple(range(cfg["indices"]))
    pairs = tuple(combinations(idx, 2)) if cfg["pairs"] == "all" else tuple(tuple(p) for p in cfg["pairs"])
    return SimConfig(indices=idx, height=cfg["height"], pairs=pairs, seed=seed, reuse=cfg["reuse"])


def _exec_simulate(m: RunManifest) -> Outcome:
    cfg = {**SIM_DEFAULTS, **m.config}
    sim = _sim_config(cfg, m.seed)
    if m.target == "pprime":
        approx = simulate_generic_pprime(sim)
        fails = suites.simulation_failures(approx)
    elif m.target == "ptheta":
        u = cfg.get("universe", DEFAULT_UNIVERSE)
        approx = simulate_ptheta_filter(FilterConfig(cfg["theta"], sim), u)
        fails = [f"generator: {v}" for v in p_violations(approx.generator, u)]
        if validate_tree(approx.tree).as_tuple() != (True, True, True):
            fails.append("tree: final tree fails a flag")
    else:
        raise click.UsageError(f"unknown simulation target {m.target!r}")
    nodes = len(approx.tree.nodes)
    summary = [f"{'PASS' if not fails else 'FAIL'} simulate {m.target}: {nodes} nodes"] + [f"  {f}" for f in fails]
    if cfg.get("format") == "dot":
        return Outcome(_dot_document(m, approx), not fails, summary)
    return Outcome(_document(m, approx=approx, failures=fails), not fails, summary)


EXECUTORS = {"gen": _exec_gen, "run": _exec_run, "simulate": _exec_simulate}


def execute(m: RunManifest) -> Outcome:
    """Run a manifest; the text depends on nothing else."""
    if m.schema != serialize.SCHEMA_VERSION:
        raise click.UsageError(f"manifest schema {m.schema} is not {serialize.SCHEMA_VERSION}")
    if m.verb not in EXECUTORS:
        raise click.UsageError(f"cannot replay verb {m.verb!r}")
    return EXECUTORS[m.verb](m)


def read_manifest(text: str) -> RunManifest:
    if text.startswith(DOT_PREFIX):
        return serialize.decode(json.loads(text.splitlines()[0][len(DOT_PREFIX):]))
    doc = loads(text)
    if isinstance(doc, RunManifest):
        return doc
    if isinstance(doc, dict) and isinstance(doc.get("manifest"), RunManifest):
        return doc["manifest"]
    raise click.UsageError("no manifest in this file")


# plumbing ----------------------------------------------------------------------

def _load(path) -> object:
    try:
        return loads(Path(path).read_text())
    except FileNotFoundError:
        raise click.UsageError(f"no such file: {path}")
    except ValueError as exc:
        raise click.UsageError(f"{path}: not a schema file ({exc})")


def _config(path) -> dict:
    if path is None:
        return {}
    cfg = _load(path)
    if isinstance(cfg, RunManifest):
        return dict(cfg.config)
    if not isinstance(cfg, dict):
        raise click.UsageError("a config file holds a map of option values")
    return cfg


def _emit(out: Outcome, path) -> None:
    if path:
        Path(path).write_text(out.text)
    else:
        sys.stdout.write(out.text)
    for line in out.summary:
        click.echo(line, err=True)


def _finish(m: RunManifest, path) -> None:
    try:
        out = execute(m)
    except (KeyError, ValueError) as exc:
        raise click.UsageError(str(exc))
    _emit(out, path)
    sys.exit(EXIT_PASS if out.passed else EXIT_FAIL)


def _seed(seed, cfg) -> int:
    return seed if seed is not None else cfg.get("seed", 0)


seed_opt = click.option("--seed", type=int, default=None, help="Seed for every random choice (default 0).")
config_opt = click.option("--config", "config_path", type=click.Path(), default=None, help="Schema-text file of option values.")
out_opt = click.option("--out", type=click.Path(), default=None, help="Write the document here instead of stdout.")


@click.group()
def main():
    """Finite-condition forcing lab."""


@main.command()
@click.argument("kind", required=False)
@click.option("--count", type=int, default=None, help="Number of instances (default 10).")
@seed_opt
@config_opt
@out_opt
def gen(kind, count, seed, config_path, out):
    """Generate a validated instance corpus of KIND."""
    cfg = _config(config_path)
    kind = kind or cfg.get("kind")
    if kind not in corpus.KINDS:
        raise click.UsageError(f"unknown kind {kind!r}; choose from {', '.join(corpus.KINDS)}")
    count = count if count is not None else cfg.get("count", 10)
    _finish(RunManifest("gen", kind, {"kind": kind, "count": count}, _seed(seed, cfg)), out)


@main.command()
@click.option("--suite", default=None, help="Suite name; 'all' runs every acceptance suite.")
@click.option("--corpus", "corpus_path", type=click.Path(), default=None, help="Instance file from gen.")
@click.option("--scale", type=float, default=None, help="Fraction of each case's instance count.")
@seed_opt
@config_opt
@out_opt
def run(suite, corpus_path, scale, seed, config_path, out):
    """Run a property suite and report pass/fail counts."""
    cfg = _config(config_path)
    suite = suite or cfg.get("suite")
    if suite == "all":
        _run_all(_seed(seed, cfg), scale if scale is not None else cfg.get("scale", 1.0), out)
        return
    if suite not in suites.SUITES:
        raise click.UsageError(f"unknown suite {suite!r}; choose from {', '.join(suites.SUITES)}")
    config = {"scale": scale if scale is not None else cfg.get("scale", 1.0)}
    if corpus_path is not None:
        doc = _load(corpus_path)
        if not isinstance(doc, dict) or "instances" not in doc:
            raise click.UsageError(f"{corpus_path}: not an instance file")
        config["corpus"] = doc.get("manifest") or {"kind": doc["kind"], "instances": doc["instances"]}
    _finish(RunManifest("run", suite, config, _seed(seed, cfg)), out)


def _run_all(seed, scale, out):
    ok = True
    for name in suites.ACCEPTANCE:
        res = execute(RunManifest("run", name, {"scale": scale}, seed))
        ok = ok and res.passed
        if out:
            Path(out).mkdir(parents=True, exist_ok=True)
            Path(out, f"{name}.txt").write_text(res.text)
        for line in res.summary:
            click.echo(line, err=True)
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


@main.command()
@click.option("--target", type=click.Choice(["pprime", "ptheta"]), default=None, help="Which generic object to approximate.")
@click.option("--indices", type=int, default=None)
@click.option("--height", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "dot"]), default="text")
@seed_opt
@config_opt
@out_opt
def simulate(target, indices, height, fmt, seed, config_path, out):
    """Drive the dense-requirement simulator and check the final approximation."""
    cfg = _config(config_path)
    config = {k: cfg[k] for k in SIM_DEFAULTS if k in cfg}
    if isinstance(cfg.get("universe"), Universe):
        config["universe"] = cfg["universe"]
    for key, val in (("target", target), ("indices", indices), ("height", height)):
        if val is not None:
            config[key] = val
    if fmt == "dot":
        config["format"] = "dot"
    tgt = config.pop("target", SIM_DEFAULTS["target"])
    _finish(RunManifest("simulate", tgt, config, _seed(seed, cfg)), out)


@main.command()
@click.argument("path", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["text", "dot"]), default="text")
@click.option("--index", type=int, default=0, help="Which instance of a corpus to draw.")
@out_opt
def export(path, fmt, index, out):
    """Re-emit a schema file canonically, or draw its tree as DOT."""
    doc = _load(path)
    if fmt == "text":
        text = dumps(doc)
    else:
        obj = doc
        if isinstance(doc, dict):
            if "approx" in doc:
                obj = doc["approx"]
            elif "instances" in doc:
                if not 0 <= index < len(doc["instances"]):
                    raise click.UsageError(f"no instance {index}")
                obj = doc["instances"][index]
        obj = getattr(obj, "happrox", obj)
        try:
            text = to_dot(obj)
        except TypeError as exc:
            raise click.UsageError(str(exc))
    _emit(Outcome(text, True), out)


@main.command()
@click.argument("path", type=click.Path())
def verify(path):
    """Replay the manifest inside PATH and compare the output byte for byte."""
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise click.UsageError(f"no such file: {path}")
    m = read_manifest(text)
    again = execute(m).text
    if again == text:
        click.echo(f"PASS replay of {m.verb} {m.target} is byte-identical")
        sys.exit(EXIT_PASS)
    click.echo(f"FAIL replay of {m.verb} {m.target} differs", err=True)
    sys.exit(EXIT_FAIL)


if __name__ == "__main__":
    main()
