"""Canonical text schema and DOT export.

Every value is written as JSON.  Ordinals use their normal-form rendering,
indices and sets carry small tags, and dataclasses are written field by
field under a ``$type`` tag, so ``loads(dumps(x)) == x`` for every type in
the registry.  Unordered collections are sorted by the text of their
encoded elements, which makes equal values print identically.
"""

from __future__ import annotations

import dataclasses
import json

from . import ccc, generators, pstar, quotient, side, trees, universe
from .ordinals import Ordinal, h_of, parse, render
from .universe import Countable, Station

SCHEMA_VERSION = 1


def _registry() -> dict:
    out = {}
    for mod in (trees, pstar, ccc, universe, side, quotient, generators):
        for name, obj in vars(mod).items():
            if isinstance(obj, type) and dataclasses.is_dataclass(obj) and obj.__module__ == mod.__name__:
                if name in out and out[name] is not obj:
                    raise RuntimeError(f"two schema types named {name}")
                out[name] = obj
    return out


@dataclasses.dataclass
class RunManifest:
    """Everything needed to replay one CLI run."""

    verb: str
    target: str
    config: dict = dataclasses.field(default_factory=dict)
    seed: int = 0
    schema: int = SCHEMA_VERSION


REGISTRY = _registry()
REGISTRY["RunManifest"] = RunManifest


def _key(enc) -> str:
    return json.dumps(enc, sort_keys=True, separators=(",", ":"))


def encode(x):
    if x is None or isinstance(x, (bool, str, float)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Ordinal):
        return {"$o": render(x)}
    if isinstance(x, Countable):
        return {"$c": render(x.alpha)}
    if isinstance(x, Station):
        return {"$s": x.index}
    if isinstance(x, (set, frozenset)):
        return {"$set": sorted((encode(v) for v in x), key=_key)}
    if isinstance(x, tuple):
        return {"$tuple": [encode(v) for v in x]}
    if isinstance(x, list):
        return [encode(v) for v in x]
    if isinstance(x, dict):
        items = [[encode(k), encode(v)] for k, v in x.items()]
        return {"$map": sorted(items, key=lambda kv: _key(kv[0]))}
    if dataclasses.is_dataclass(x) and type(x).__name__ in REGISTRY:
        out = {"$type": type(x).__name__}
        for f in dataclasses.fields(x):
            if f.init:
                out[f.name] = encode(getattr(x, f.name))
        return out
    raise TypeError(f"cannot serialize {type(x).__name__}")


def decode(j):
    if j is None or isinstance(j, (bool, str, int, float)):
        return j
    if isinstance(j, list):
        return [decode(v) for v in j]
    if not isinstance(j, dict):
        raise ValueError(f"bad schema value {j!r}")
    if "$o" in j:
        return parse(j["$o"])
    if "$c" in j:
        return Countable(parse(j["$c"]))
    if "$s" in j:
        return Station(j["$s"])
    if "$set" in j:
        return frozenset(decode(v) for v in j["$set"])
    if "$tuple" in j:
        return tuple(decode(v) for v in j["$tuple"])
    if "$map" in j:
        return {decode(k): decode(v) for k, v in j["$map"]}
    if "$type" in j:
        cls = REGISTRY.get(j["$type"])
        if cls is None:
            raise ValueError(f"unknown schema type {j['$type']!r}")
        return cls(**{k: decode(v) for k, v in j.items() if k != "$type"})
    raise ValueError(f"untagged object {sorted(j)}")


def dumps(x) -> str:
    return json.dumps(encode(x), sort_keys=True, indent=1) + "\n"


def loads(text: str):
    return decode(json.loads(text))


# DOT ---------------------------------------------------------------------------

PALETTE = ("#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999")


def _tree_and_subtrees(obj):
    if isinstance(obj, trees.Tree):
        return obj, {}
    if isinstance(obj, (pstar.PStar, side.PCond)):
        return obj.T, dict(obj.W)
    if isinstance(obj, ccc.GenericApprox):
        return obj.tree, dict(obj.subtrees)
    if isinstance(obj, quotient.FilterApprox):
        return obj.tree, dict(obj.generator.W)
    raise TypeError(f"no tree to draw in {type(obj).__name__}")


def _label(eta) -> str:
    return render(eta.alpha) if isinstance(eta, Countable) else repr(eta)


def to_dot(obj, name: str = "T") -> str:
    """Hasse diagram of the tree; nodes are filled by the subtrees holding them."""
    t, W = _tree_and_subtrees(obj)
    indices = sorted(W, key=lambda e: _key(encode(e)))
    colour = {eta: PALETTE[k % len(PALETTE)] for k, eta in enumerate(indices)}
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", '  node [shape=box, style="rounded,filled", fillcolor=white];']
    if not t.nodes:
        lines.append('  empty [label="(empty tree)", shape=plaintext];')
    ids = {x: f"n{k}" for k, x in enumerate(sorted(t.nodes))}
    for x in sorted(t.nodes):
        owners = [eta for eta in indices if x in W[eta]]
        label = f"{render(x)}\\nh={render(h_of(x))}"
        if owners:
            label += "\\n" + ",".join(_label(eta) for eta in owners)
            fill = ":".join(colour[eta] for eta in owners)
            style = ', style="rounded,striped"' if len(owners) > 1 else ""
            lines.append(f'  {ids[x]} [label="{label}", fillcolor="{fill}"{style}];')
        else:
            lines.append(f'  {ids[x]} [label="{label}"];')
    for x in sorted(t.nodes):
        par = t.parent(x)
        if par is not None:
            lines.append(f"  {ids[x]} -> {ids[par]};")
    if indices:
        lines.append("  subgraph cluster_legend {")
        lines.append('    label="subtrees";')
        for k, eta in enumerate(indices):
            lines.append(f'    key{k} [label="{_label(eta)}", fillcolor="{colour[eta]}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
