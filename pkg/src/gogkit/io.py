"""JSON file formats and DOT export.

Graph:        {"vertices": [...], "edges": [{"id", "from", "to"}, ...]}
Morphism:     {"domain", "codomain", "vertex_map", "edge_map"}; edge_map
              values are lists of dart tokens such as "e2-".
Presentation: {"generators": [...], "relators": ["b x b x^-2", ...]}
Complex:      graph keys plus "faces": [[dart tokens], ...]
Hom:          {"modulus": m, "values": {edge id: int}}
Graph of graphs: {"underlying", "vertex_graphs", "edge_graphs", "maps"};
              maps[e] = {"iota": morphism, "tau": morphism}, where domain and
              codomain may be omitted (they are implied).
"""

from __future__ import annotations

import json
from typing import Any

from ._util import ValidationError
from .complexes import FiniteQuotientHom, PresentationData, TwoComplex
from .gog import GraphOfGraphs
from .graphs import GraphMorphism, SerreGraph
from .stallings import StallingsGraph
from .words import Word


def dart_token(d) -> str:
    return f"{d[0]}{'+' if d[1] > 0 else '-'}"


def parse_dart(tok: str):
    if not isinstance(tok, str) or len(tok) < 2 or tok[-1] not in "+-":
        raise ValidationError(f"bad dart token {tok!r}")
    return (tok[:-1], 1 if tok[-1] == "+" else -1)


def _require(data: Any, *keys: str) -> None:
    if not isinstance(data, dict):
        raise ValidationError("expected a JSON object")
    for k in keys:
        if k not in data:
            raise ValidationError(f"missing key {k!r}")


# -- to plain data --

def graph_to_data(g: SerreGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e, "from": a, "to": b} for e, (a, b) in g.edges.items()],
    }


def morphism_to_data(f: GraphMorphism, with_graphs: bool = True) -> dict:
    out = {}
    if with_graphs:
        out["domain"] = graph_to_data(f.domain)
        out["codomain"] = graph_to_data(f.codomain)
    out["vertex_map"] = dict(f.vmap)
    out["edge_map"] = {e: [dart_token(d) for d in p] for e, p in f.emap.items()}
    return out


def presentation_to_data(p: PresentationData) -> dict:
    return {"generators": list(p.generators), "relators": [str(r) for r in p.relators]}


def complex_to_data(c: TwoComplex) -> dict:
    out = graph_to_data(c.skeleton)
    out["faces"] = [[dart_token(d) for d in f] for f in c.faces]
    if c.zones:
        out["zones"] = [
            {"cell": list(cell), "zone": list(tag)}
            for cell, tag in sorted(c.zones.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))
        ]
    return out


def hom_to_data(h: FiniteQuotientHom) -> dict:
    return {"modulus": h.modulus, "values": dict(h.values)}


def gog_to_data(g: GraphOfGraphs) -> dict:
    return {
        "underlying": graph_to_data(g.underlying),
        "vertex_graphs": {v: graph_to_data(x) for v, x in g.vertex_graphs.items()},
        "edge_graphs": {e: graph_to_data(x) for e, x in g.edge_graphs.items()},
        "maps": {
            e: {"iota": morphism_to_data(fi, False), "tau": morphism_to_data(ft, False)}
            for e, (fi, ft) in g.maps.items()
        },
    }


def stallings_to_data(sg: StallingsGraph) -> dict:
    out = graph_to_data(sg.graph)
    out["labels"] = dict(sg.labels)
    out["basepoint"] = sg.basepoint
    out["basis"] = list(sg.basis)
    return out


def to_data(obj) -> dict:
    for cls, fn in (
        (GraphOfGraphs, gog_to_data),
        (TwoComplex, complex_to_data),
        (PresentationData, presentation_to_data),
        (GraphMorphism, morphism_to_data),
        (StallingsGraph, stallings_to_data),
        (FiniteQuotientHom, hom_to_data),
        (SerreGraph, graph_to_data),
    ):
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"no native format for {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_data(obj), indent=2, ensure_ascii=False) + "\n"


# -- from plain data --

def graph_from_data(data) -> SerreGraph:
    _require(data, "vertices", "edges")
    edges = []
    for rec in data["edges"]:
        _require(rec, "id", "from", "to")
        edges.append((rec["id"], rec["from"], rec["to"]))
    return SerreGraph(data["vertices"], edges)


def morphism_from_data(data, domain=None, codomain=None) -> GraphMorphism:
    _require(data, "vertex_map", "edge_map")
    dom = graph_from_data(data["domain"]) if "domain" in data else domain
    cod = graph_from_data(data["codomain"]) if "codomain" in data else codomain
    if dom is None or cod is None:
        raise ValidationError("morphism needs a domain and a codomain")
    emap = {e: tuple(parse_dart(t) for t in toks) for e, toks in data["edge_map"].items()}
    return GraphMorphism(dom, cod, data["vertex_map"], emap)


def presentation_from_data(data) -> PresentationData:
    _require(data, "generators", "relators")
    return PresentationData(tuple(data["generators"]), tuple(Word.parse(r) for r in data["relators"]))


def complex_from_data(data) -> TwoComplex:
    _require(data, "faces")
    zones = {}
    for rec in data.get("zones", []):
        kind, cid = rec["cell"]
        zones[(kind, cid)] = tuple(rec["zone"])
    faces = tuple(tuple(parse_dart(t) for t in f) for f in data["faces"])
    return TwoComplex(graph_from_data(data), faces, zones)


def hom_from_data(data) -> FiniteQuotientHom:
    _require(data, "modulus", "values")
    return FiniteQuotientHom(data["modulus"], data["values"])


def gog_from_data(data) -> GraphOfGraphs:
    _require(data, "underlying", "vertex_graphs", "edge_graphs", "maps")
    under = graph_from_data(data["underlying"])
    vg = {v: graph_from_data(x) for v, x in data["vertex_graphs"].items()}
    eg = {e: graph_from_data(x) for e, x in data["edge_graphs"].items()}
    maps = {}
    for e, (a, b) in under.edges.items():
        if e not in data["maps"] or e not in eg or a not in vg or b not in vg:
            raise ValidationError(f"incomplete data for underlying edge {e!r}")
        rec = data["maps"][e]
        _require(rec, "iota", "tau")
        maps[e] = (
            morphism_from_data(rec["iota"], eg[e], vg[a]),
            morphism_from_data(rec["tau"], eg[e], vg[b]),
        )
    return GraphOfGraphs(under, vg, eg, maps)


def from_data(data):
    """Rebuild an object, recognizing its kind from the keys present."""
    if not isinstance(data, dict):
        raise ValidationError("expected a JSON object")
    if "underlying" in data:
        return gog_from_data(data)
    if "faces" in data:
        return complex_from_data(data)
    if "generators" in data:
        return presentation_from_data(data)
    if "vertex_map" in data:
        return morphism_from_data(data)
    if "modulus" in data:
        return hom_from_data(data)
    if "vertices" in data:
        return graph_from_data(data)
    raise ValidationError("unrecognized object")


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    try:
        return from_data(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed input: {exc}") from exc


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- DOT --

def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _graph_lines(g: SerreGraph, prefix: str = "", indent: str = "  ") -> list[str]:
    lines = [f"{indent}{_q(prefix + v)} [label={_q(v)}];" for v in g.vertices]
    lines += [f"{indent}{_q(prefix + a)} -> {_q(prefix + b)} [label={_q(e)}];" for e, (a, b) in g.edges.items()]
    return lines


def export_dot(obj, name: str = "G") -> str:
    """DOT digraph; graphs of graphs get one cluster per vertex/edge graph."""
    lines = [f"digraph {_q(name)} {{"]
    if isinstance(obj, GraphOfGraphs):
        lines.append("  compound=true;")
        for v, X in obj.vertex_graphs.items():
            lines.append(f"  subgraph {_q('cluster_vertex_' + v)} {{")
            lines.append(f"    label={_q('X_' + v)};")
            lines += _graph_lines(X, f"{v}/", "    ")
            lines.append("  }")
        for e, X in obj.edge_graphs.items():
            lines.append(f"  subgraph {_q('cluster_edge_' + e)} {{")
            lines.append(f"    label={_q('X_' + e)};")
            lines += _graph_lines(X, f"{e}|", "    ")
            lines.append("  }")
        for e, (a, b) in obj.underlying.edges.items():
            fi, ft = obj.maps[e]
            for u in obj.edge_graphs[e].vertices:
                lines.append(f"  {_q(e + '|' + u)} -> {_q(a + '/' + fi.vmap[u])} [style=dashed, label=\"iota\"];")
                lines.append(f"  {_q(e + '|' + u)} -> {_q(b + '/' + ft.vmap[u])} [style=dashed, label=\"tau\"];")
    else:
        if isinstance(obj, TwoComplex):
            g = obj.skeleton
        elif isinstance(obj, StallingsGraph):
            g = obj.graph
        elif isinstance(obj, SerreGraph):
            g = obj
        else:
            raise TypeError(f"cannot export {type(obj).__name__} as DOT")
        if isinstance(obj, StallingsGraph):
            lines += [f"  {_q(v)} [label={_q(v)}{', shape=doublecircle' if v == obj.basepoint else ''}];" for v in g.vertices]
            lines += [f"  {_q(a)} -> {_q(b)} [label={_q(obj.labels[e])}];" for e, (a, b) in g.edges.items()]
        else:
            lines += _graph_lines(g)
    lines.append("}")
    return "\n".join(lines) + "\n"
