"""JSON serialization with a canonical byte encoding.

Canonical form: object keys sorted, two-space indent, a single trailing
newline, rationals rendered as "p" or "p/q" in lowest terms, and edge
lists sorted by (from, to, weight).  Loading a canonical file and saving
it again reproduces the bytes exactly; loading a hand-written file and
saving it canonicalizes it.  Rationals are decoded with `parse_rational`,
so "−3/4" with a typographic minus is accepted on input.

Instance files carry the per-edge drift decomposition in a "drift_split"
array aligned with the sorted edge order, so a verifier can re-check the
decomposition without rebuilding the instance.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exact import AffineForm, PwlFunction, format_rational, parse_rational
from .graph import Edge, Envelope, ParametricGraph
from .lowerbound import DriftCoeff, LowerBoundInstance
from .polytope import TriEdge, TriGraph

SCHEMA_FIELD = "schema"


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def save_json(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(obj))


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _rat(value) -> str:
    return format_rational(value)


def _unrat(text) -> Fraction:
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    return parse_rational(text)


def _edge_key(e: Edge) -> tuple:
    return (e.tail, e.head, e.weight.a, e.weight.b)


def graph_to_json(g: ParametricGraph) -> dict:
    """Encode a graph; edges are sorted into canonical order."""
    doc: dict[str, Any] = {
        "vertices": g.vertex_count,
        "source": g.source,
        "sink": g.sink,
        "edges": [
            {"from": e.tail, "to": e.head, "a": _rat(e.weight.a), "b": _rat(e.weight.b)}
            for e in sorted(g.edges, key=_edge_key)
        ],
    }
    if g.layers is not None:
        doc["layers"] = list(g.layers)
    if g.embedding is not None:
        doc["embedding"] = [[_rat(x), _rat(y)] for x, y in g.embedding]
    return doc


def graph_from_json(doc: dict) -> ParametricGraph:
    try:
        edges = [
            Edge(int(e["from"]), int(e["to"]), AffineForm(_unrat(e["a"]), _unrat(e["b"])))
            for e in doc["edges"]
        ]
        g = ParametricGraph(
            vertex_count=int(doc["vertices"]),
            source=int(doc["source"]),
            sink=int(doc["sink"]),
            edges=edges,
            layers=[int(x) for x in doc["layers"]] if "layers" in doc else None,
            embedding=(
                [(_unrat(x), _unrat(y)) for x, y in doc["embedding"]]
                if "embedding" in doc
                else None
            ),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    g.validate()
    return g


def envelope_to_json(env: Envelope) -> dict:
    f = env.function
    doc: dict[str, Any] = {
        "breakpoints": [_rat(x) for x in f.breakpoints],
        "segments": [
            {"a": _rat(seg.a), "b": _rat(seg.b), "path": list(path)}
            for seg, path in zip(f.segments, env.witnesses)
        ],
    }
    if f.domain is not None:
        doc["domain"] = [_rat(f.domain[0]), _rat(f.domain[1])]
    return doc


def envelope_from_json(doc: dict) -> Envelope:
    try:
        breakpoints = tuple(_unrat(x) for x in doc["breakpoints"])
        segments = tuple(
            AffineForm(_unrat(s["a"]), _unrat(s["b"])) for s in doc["segments"]
        )
        witnesses = tuple(tuple(int(v) for v in s["path"]) for s in doc["segments"])
        domain = None
        if "domain" in doc:
            lo, hi = doc["domain"]
            domain = (_unrat(lo), _unrat(hi))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed envelope JSON: {exc}") from exc
    return Envelope(PwlFunction(breakpoints, segments, domain), witnesses)


def words_to_json(n: int, words: list) -> dict:
    lengths = {len(w) for w in words}
    if len(lengths) > 1:
        raise ValueError("words must share one length")
    return {
        "n": n,
        "length": lengths.pop() if lengths else 0,
        "words": [list(w) for w in words],
    }


def words_from_json(doc: dict) -> tuple[int, int, list[tuple[int, ...]]]:
    try:
        n = int(doc["n"])
        length = int(doc["length"])
        words = [tuple(int(s) for s in w) for w in doc["words"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed words JSON: {exc}") from exc
    for w in words:
        if len(w) != length:
            raise ValueError("word length disagrees with declared length")
    return n, length, words


def trigraph_to_json(g: TriGraph) -> dict:
    return {
        "vertices": g.vertex_count,
        "source": g.source,
        "sink": g.sink,
        "edges": [
            {"from": e.tail, "to": e.head, "coeffs": [_rat(c) for c in e.coeffs]}
            for e in sorted(g.edges, key=lambda e: (e.tail, e.head, e.coeffs))
        ],
    }


def trigraph_from_json(doc: dict) -> TriGraph:
    try:
        edges = tuple(
            TriEdge(int(e["from"]), int(e["to"]), tuple(_unrat(c) for c in e["coeffs"]))
            for e in doc["edges"]
        )
        return TriGraph(int(doc["vertices"]), int(doc["source"]), int(doc["sink"]), edges)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc


def _coeff_to_json(c: DriftCoeff) -> list[str]:
    return [
        _rat(c.const_base),
        _rat(c.const_drift),
        _rat(c.slope_base),
        _rat(c.slope_drift),
    ]


def instance_to_json(inst: LowerBoundInstance) -> dict:
    """Encode a built instance: graph plus tables keyed to sorted edges."""
    paired = sorted(
        zip(inst.graph.edges, inst.coeffs), key=lambda ec: _edge_key(ec[0])
    )
    graph = ParametricGraph(
        inst.graph.vertex_count,
        inst.graph.source,
        inst.graph.sink,
        [e for e, _ in paired],
        layers=inst.graph.layers,
        embedding=inst.graph.embedding,
    )
    return {
        "params": {
            "n": inst.n,
            "B": inst.width,
            "D": _rat(inst.drift),
            "m": inst.depth,
        },
        "graph": graph_to_json(graph),
        "alpha_table": list(inst.anchors),
        "declared_paths": [
            {"b": b, "j": j, "path": list(path)}
            for (b, j), path in sorted(inst.declared_paths.items())
        ],
        "drift_split": [_coeff_to_json(c) for _, c in paired],
        "inputs": list(inst.inputs),
        "outputs": list(inst.outputs),
        "sink_attached": inst.sink_attached,
    }


def instance_from_json(doc: dict) -> LowerBoundInstance:
    try:
        params = doc["params"]
        graph = graph_from_json(doc["graph"])
        split = doc["drift_split"]
        if len(split) != len(graph.edges):
            raise ValueError("drift_split length disagrees with edge count")
        coeffs = tuple(
            DriftCoeff(_unrat(a), _unrat(b), _unrat(c), _unrat(d))
            for a, b, c, d in split
        )
        declared = {
            (int(row["b"]), int(row["j"])): tuple(int(v) for v in row["path"])
            for row in doc["declared_paths"]
        }
        return LowerBoundInstance(
            n=int(params["n"]),
            width=int(params["B"]),
            drift=_unrat(params["D"]),
            depth=int(params["m"]),
            graph=graph,
            coeffs=coeffs,
            inputs=tuple(int(v) for v in doc["inputs"]),
            outputs=tuple(int(v) for v in doc["outputs"]),
            declared_paths=declared,
            anchors=tuple(int(a) for a in doc["alpha_table"]),
            sink_attached=bool(doc["sink_attached"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed instance JSON: {exc}") from exc
