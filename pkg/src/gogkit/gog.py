"""Graphs of graphs and their associated graphs of free groups.

The total space of a graph of graphs is built without subdividing anything:
for every edge ``e`` of the underlying graph and every edge ``eps`` of the
edge graph X_e there is one 2-cell with boundary

    f_iota(eps) . h(t(eps)) . f_tau(eps)^-1 . h(o(eps))^-1

where ``h(u)`` is the horizontal edge over the vertex ``u`` of X_e, running
from the iota side to the tau side.  When both images are single darts this
is the usual square.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional

from ._util import UnionFind, ValidationError, id_key, sorted_ids
from .complexes import Covering, FiniteQuotientHom, PresentationData, TwoComplex, cover_complex, iter_complex_isomorphisms
from .graphs import (
    GraphMorphism,
    SerreGraph,
    graph_euler_and_rank,
    is_combinatorial_embedding,
    is_topological_embedding,
    relabel_path,
    reverse_path,
    smooth_bivalent,
)
from .iso import inv
from .stallings import induced_words, is_pi1_injective, pi1_image, spanning_tree
from .whitehead import DEFAULT_BUDGET, Verdict, is_free_factor
from .words import Word, substitute

SIDES = ("iota", "tau")


@dataclass(frozen=True)
class GraphOfGraphs:
    underlying: SerreGraph
    vertex_graphs: Mapping[str, SerreGraph]
    edge_graphs: Mapping[str, SerreGraph]
    maps: Mapping[str, tuple]  # e -> (f_iota, f_tau)

    def __post_init__(self):
        u = self.underlying
        if set(self.vertex_graphs) != set(u.vertices):
            raise ValidationError("need exactly one vertex graph per underlying vertex")
        if set(self.edge_graphs) != set(u.edges) or set(self.maps) != set(u.edges):
            raise ValidationError("need exactly one edge graph and one pair of maps per underlying edge")
        for name, g in list(self.vertex_graphs.items()) + list(self.edge_graphs.items()):
            if not g.is_connected():
                raise ValidationError(f"cell graph {name!r} is not connected")
        for e, (a, b) in u.edges.items():
            fi, ft = self.maps[e]
            for f, target, side in ((fi, a, "iota"), (ft, b, "tau")):
                if f.domain != self.edge_graphs[e]:
                    raise ValidationError(f"{side} map of {e!r} has the wrong domain")
                if f.codomain != self.vertex_graphs[target]:
                    raise ValidationError(f"{side} map of {e!r} has the wrong codomain")
                if not is_pi1_injective(f):
                    raise ValidationError(f"{side} map of {e!r} is not injective on pi_1")
        object.__setattr__(self, "vertex_graphs", {v: self.vertex_graphs[v] for v in u.vertices})
        object.__setattr__(self, "edge_graphs", {e: self.edge_graphs[e] for e in u.edges})
        object.__setattr__(self, "maps", {e: tuple(self.maps[e]) for e in u.edges})

    def end_maps(self):
        """(edge, side, vertex, map) for every edge end."""
        for e, (a, b) in self.underlying.edges.items():
            fi, ft = self.maps[e]
            yield e, "iota", a, fi
            yield e, "tau", b, ft

    def ranks(self) -> dict:
        return {
            "vertex": {v: graph_euler_and_rank(g)[1] for v, g in self.vertex_graphs.items()},
            "edge": {e: graph_euler_and_rank(g)[1] for e, g in self.edge_graphs.items()},
        }


# -- cleanliness --

@dataclass(frozen=True)
class EndReport:
    combinatorial_embedding: bool
    topological_embedding: bool
    pi1_injective: bool
    free_factor: Verdict


@dataclass(frozen=True)
class CleanlinessReport:
    ends: dict  # (edge, side) -> EndReport
    vh: bool
    geometric: bool
    algebraic: Verdict

    def to_dict(self) -> dict:
        return {
            "vh": self.vh,
            "geometric": self.geometric,
            "algebraic": self.algebraic.value,
            "ends": [
                {
                    "edge": e,
                    "side": s,
                    "combinatorial_embedding": r.combinatorial_embedding,
                    "topological_embedding": r.topological_embedding,
                    "pi1_injective": r.pi1_injective,
                    "free_factor": r.free_factor.value,
                }
                for (e, s), r in self.ends.items()
            ],
        }


def classify_cleanliness(g: GraphOfGraphs, conservative: bool = False, budget: int = DEFAULT_BUDGET) -> CleanlinessReport:
    ends = {}
    for e, side, _, f in g.end_maps():
        comb = is_combinatorial_embedding(f)
        topo = is_topological_embedding(f)
        inj = is_pi1_injective(f)
        if topo:
            # an embedded subgraph carries a free factor: extend a spanning tree
            ff = Verdict.YES
        elif not inj:
            ff = Verdict.UNKNOWN if conservative else Verdict.NO
        else:
            ff = is_free_factor(pi1_image(f), budget=budget, conservative=conservative)
        ends[(e, side)] = EndReport(comb, topo, inj, ff)
    verdicts = [r.free_factor for r in ends.values()]
    if all(v is Verdict.YES for v in verdicts):
        alg = Verdict.YES
    elif any(v is Verdict.NO for v in verdicts):
        alg = Verdict.NO
    else:
        alg = Verdict.UNKNOWN
    return CleanlinessReport(
        ends,
        vh=all(r.combinatorial_embedding for r in ends.values()),
        geometric=all(r.topological_embedding for r in ends.values()),
        algebraic=alg,
    )


# -- total space --

@dataclass(frozen=True)
class TotalSpace:
    complex: TwoComplex
    vertex_cell: dict  # total vertex -> (v, x)
    vertical: dict  # total edge -> (v, y)
    horizontal: dict  # total edge -> (e, u)
    face_cell: list  # face index -> (e, eps, len iota part, len tau part)


def _vertex_id(v, x):
    return f"{v}/{x}"


def _horizontal_id(e, u):
    return f"{e}|{u}"


def build_total_space(g: GraphOfGraphs) -> TotalSpace:
    vertices, edges = [], {}
    vertex_cell, vertical, horizontal = {}, {}, {}
    zones: dict = {}
    for v, X in g.vertex_graphs.items():
        for x in X.vertices:
            vid = _vertex_id(v, x)
            vertices.append(vid)
            vertex_cell[vid] = (v, x)
            zones[("vertex", vid)] = ("vertex", v)
        for y, (a, b) in X.edges.items():
            eid = _vertex_id(v, y)
            edges[eid] = (_vertex_id(v, a), _vertex_id(v, b))
            vertical[eid] = (v, y)
            zones[("edge", eid)] = ("vertex", v)
    faces, face_cell = [], []
    for e, (a, b) in g.underlying.edges.items():
        fi, ft = g.maps[e]
        Xe = g.edge_graphs[e]
        for u in Xe.vertices:
            hid = _horizontal_id(e, u)
            if hid in edges:
                raise ValidationError(f"id clash building the total space at {hid!r}")
            edges[hid] = (_vertex_id(a, fi.vmap[u]), _vertex_id(b, ft.vmap[u]))
            horizontal[hid] = (e, u)
            zones[("edge", hid)] = ("edge", e)
        for eps, (o, t) in Xe.edges.items():
            low = tuple((_vertex_id(a, d[0]), d[1]) for d in fi.emap[eps])
            high = tuple((_vertex_id(b, d[0]), d[1]) for d in ft.emap[eps])
            boundary = low + ((_horizontal_id(e, t), 1),) + reverse_path(high) + ((_horizontal_id(e, o), -1),)
            zones[("face", len(faces))] = ("edge", e)
            faces.append(boundary)
            face_cell.append((e, eps, len(low), len(high)))
    cx = TwoComplex(SerreGraph(vertices, edges), tuple(faces), zones)
    return TotalSpace(cx, vertex_cell, vertical, horizontal, face_cell)


def total_space(g: GraphOfGraphs) -> TwoComplex:
    return build_total_space(g).complex


# -- pi_1 presentation --

def _name(*parts) -> str:
    return re.sub(r"\W", "_", "_".join(parts))


def pi1_presentation(g: GraphOfGraphs) -> PresentationData:
    """Presentation of the fundamental group of the graph of groups.

    Generators: each vertex group's spanning-tree basis, named ``<v>_<edge>``,
    then a stable letter ``t_<e>`` per edge outside the underlying spanning
    tree.  Relators: phi_iota(b) = phi_tau(b) over tree edges and
    t_e phi_iota(b) t_e^-1 = phi_tau(b) over the others, for each basis
    element b of the edge group.
    """
    if not g.underlying.is_connected():
        raise ValidationError("underlying graph must be connected")
    gens: list = []
    rename: dict = {}
    for v, X in g.vertex_graphs.items():
        tree = spanning_tree(X)
        rename[v] = {}
        for y in X.edges:
            if y not in tree:
                rename[v][y] = Word.gen(_name(v, y))
                gens.append(_name(v, y))
    gtree = spanning_tree(g.underlying)
    stable = {e: _name("t", e) for e in g.underlying.edges if e not in gtree}
    gens.extend(stable.values())
    if len(set(gens)) != len(gens):
        raise ValidationError("generator names collide; rename cells")
    relators = []
    for e, (a, b) in g.underlying.edges.items():
        fi, ft = g.maps[e]
        base = g.edge_graphs[e].vertices[0]
        for wi, wt in zip(induced_words(fi, base), induced_words(ft, base)):
            wi, wt = substitute(wi, rename[a]), substitute(wt, rename[b])
            if e in stable:
                t = Word.gen(stable[e])
                relators.append(t * wi * t.inverse() * wt.inverse())
            else:
                relators.append(wi * wt.inverse())
    return PresentationData(tuple(gens), tuple(relators))


# -- covers --

@dataclass(frozen=True)
class GogProjection:
    vertex_proj: dict  # new underlying vertex -> old
    edge_proj: dict  # new underlying edge -> old
    covering: Covering


def cover_gog(g: GraphOfGraphs, h: FiniteQuotientHom) -> tuple[GraphOfGraphs, GogProjection]:
    """Finite cyclic cover with its induced graph-of-graphs decomposition."""
    ts = build_total_space(g)
    cov = cover_complex(ts.complex, h)
    cx = cov.complex
    skel = cx.skeleton

    vuf = UnionFind(skel.vertices)
    for eid, (a, b) in skel.edges.items():
        if cov.edge_proj[eid] in ts.vertical:
            vuf.union(a, b)
    vert_components: dict = {}
    for comp in vuf.groups().values():
        comp = sorted_ids(comp)
        v = ts.vertex_cell[cov.vertex_proj[comp[0]]][0]
        vert_components.setdefault(v, []).append(comp)
    new_vertices, vertex_graphs, vproj, owner = [], {}, {}, {}
    for v in g.underlying.vertices:
        for j, comp in enumerate(sorted(vert_components.get(v, []), key=lambda c: id_key(c[0]))):
            name = f"{v}.{j}"
            cset = set(comp)
            es = {eid: ends for eid, ends in skel.edges.items() if ends[0] in cset and cov.edge_proj[eid] in ts.vertical}
            vertex_graphs[name] = SerreGraph(comp, es)
            new_vertices.append(name)
            vproj[name] = v
            for x in comp:
                owner[x] = name

    horiz = [eid for eid in skel.edges if cov.edge_proj[eid] in ts.horizontal]
    huf = UnionFind(horiz)
    for k, f in enumerate(cx.faces):
        _, _, p, q = ts.face_cell[cov.face_proj[k]]
        huf.union(f[p][0], f[p + 1 + q][0])
    faces_of: dict = {}
    for k, f in enumerate(cx.faces):
        _, _, p, _ = ts.face_cell[cov.face_proj[k]]
        faces_of.setdefault(huf.find(f[p][0]), []).append(k)
    edge_components: dict = {}
    for root, comp in huf.groups().items():
        comp = sorted_ids(comp)
        e = ts.horizontal[cov.edge_proj[comp[0]]][0]
        edge_components.setdefault(e, []).append((comp, faces_of.get(root, [])))

    new_edges, edge_graphs, maps, eproj = {}, {}, {}, {}
    for e in g.underlying.edges:
        comps = sorted(edge_components.get(e, []), key=lambda c: id_key(c[0][0]))
        for j, (comp, faces) in enumerate(comps):
            name = f"{e}.{j}"
            es, iota_e, tau_e = {}, {}, {}
            for k in faces:
                f = cx.faces[k]
                _, eps, p, q = ts.face_cell[cov.face_proj[k]]
                sheet = cov.sheet[skel.origin(f[0])]
                ename = f"{eps}.{sheet}"
                es[ename] = (f[p + 1 + q][0], f[p][0])
                iota_e[ename] = f[:p]
                tau_e[ename] = reverse_path(f[p + 1:p + 1 + q])
            Xe = SerreGraph(comp, es)
            src = owner[skel.edges[comp[0]][0]]
            dst = owner[skel.edges[comp[0]][1]]
            fi = GraphMorphism(Xe, vertex_graphs[src], {u: skel.edges[u][0] for u in comp}, iota_e)
            ft = GraphMorphism(Xe, vertex_graphs[dst], {u: skel.edges[u][1] for u in comp}, tau_e)
            new_edges[name] = (src, dst)
            edge_graphs[name] = Xe
            maps[name] = (fi, ft)
            eproj[name] = e
    out = GraphOfGraphs(SerreGraph(new_vertices, new_edges), vertex_graphs, edge_graphs, maps)
    return out, GogProjection(vproj, eproj, cov)


# -- normalization --

def _rebuild_edge_graph(X: SerreGraph, keep: set, fi: GraphMorphism, ft: GraphMorphism):
    smoothed, corr = smooth_bivalent(X, keep)
    maps = []
    for f in (fi, ft):
        maps.append((
            {u: f.vmap[u] for u in smoothed.vertices},
            {eps: f.path_image(corr[eps]) for eps in smoothed.edges},
        ))
    return smoothed, maps


def _edge_candidates(g: GraphOfGraphs, vgraphs, egraphs, mapdata) -> set:
    """Edge-graph vertices that may be smoothed together with their images."""
    ends = g.underlying.edges
    hits: dict = {}
    for e, (a, b) in ends.items():
        for (vm, _), v in zip(mapdata[e], (a, b)):
            for u, w in vm.items():
                hits.setdefault((v, w), set()).add((e, u))
    cand = set()
    for e, (a, b) in ends.items():
        X = egraphs[e]
        for u in X.vertices:
            star = X.star(u)
            if len(star) != 2 or star[0][0] == star[1][0]:
                continue
            ok = True
            for (vm, em), v in zip(mapdata[e], (a, b)):
                ystar = vgraphs[v].star(vm[u])
                firsts = [em[d[0]][0] if d[1] > 0 else inv(em[d[0]][-1]) for d in star]
                if len(ystar) != 2 or ystar[0][0] == ystar[1][0] or firsts[0] == firsts[1]:
                    ok = False
                    break
            if ok:
                cand.add((e, u))
    # an image vertex can only disappear if everything landing on it does
    changed = True
    while changed:
        changed = False
        for e, u in sorted(cand):
            a, b = ends[e]
            if any(not hits[(v, vm[u])] <= cand for (vm, _), v in zip(mapdata[e], (a, b))):
                cand.discard((e, u))
                changed = True
    return cand


def _normalize_once(g: GraphOfGraphs) -> GraphOfGraphs:
    vgraphs = dict(g.vertex_graphs)
    egraphs = dict(g.edge_graphs)
    mapdata = {e: [(dict(f.vmap), dict(f.emap)) for f in g.maps[e]] for e in g.underlying.edges}
    ends = g.underlying.edges

    cand = _edge_candidates(g, vgraphs, egraphs, mapdata)
    for e, (a, b) in ends.items():
        X = egraphs[e]
        removable = {u for e2, u in cand if e2 == e}
        if removable:
            fi = GraphMorphism(X, vgraphs[a], *mapdata[e][0])
            ft = GraphMorphism(X, vgraphs[b], *mapdata[e][1])
            egraphs[e], mapdata[e] = _rebuild_edge_graph(X, set(X.vertices) - removable, fi, ft)

    for v in g.underlying.vertices:
        protected = set()
        incoming = []
        Y = vgraphs[v]
        for e, (a, b) in ends.items():
            for k, endpoint in enumerate((a, b)):
                if endpoint != v:
                    continue
                vm, em = mapdata[e][k]
                protected.update(vm.values())
                incoming.append((e, k))
                for p in em.values():
                    for d1, d2 in zip(p, p[1:]):
                        if d2 == inv(d1):
                            protected.add(Y.terminus(d1))
        smoothed, corr = smooth_bivalent(Y, protected)
        if smoothed == Y:
            continue
        vgraphs[v] = smoothed
        for e, k in incoming:
            vm, em = mapdata[e][k]
            mapdata[e][k] = (vm, {eps: relabel_path(p, corr) for eps, p in em.items()})

    maps = {}
    for e, (a, b) in ends.items():
        maps[e] = (
            GraphMorphism(egraphs[e], vgraphs[a], *mapdata[e][0]),
            GraphMorphism(egraphs[e], vgraphs[b], *mapdata[e][1]),
        )
    return GraphOfGraphs(g.underlying, vgraphs, egraphs, maps)


def normalize_gog(g: GraphOfGraphs) -> GraphOfGraphs:
    """Smooth away bivalent vertices that carry no structure.

    Edge-graph vertices go first, and only together with their images: a
    bivalent edge-graph vertex is removable when on both sides it lands on a
    bivalent vertex, its two darts leave along different darts there, and
    every edge-graph vertex landing on the same image is removable too.
    Vertex-graph vertices are then smoothed unless some edge-graph vertex
    lands on them or some map path turns around at them.  Repeated until
    nothing changes, so the result is idempotent.
    """
    while True:
        out = _normalize_once(g)
        if out == g:
            return out
        g = out


# -- isomorphism --

@dataclass(frozen=True)
class GogIsomorphism:
    vertex_map: dict  # underlying vertex -> vertex
    edge_map: dict  # underlying edge -> edge (orientation preserved)
    vertex_graph_maps: dict = field(default_factory=dict)  # v -> (vertex map, dart map)
    edge_graph_maps: dict = field(default_factory=dict)  # e -> (vertex map, dart map)


def _colors(ts: TotalSpace):
    def dart_color(d):
        if d[0] in ts.horizontal:
            return "h+" if d[1] > 0 else "h-"
        return "v"

    return dart_color


def _extract(g1, g2, ts1: TotalSpace, ts2: TotalSpace, iso) -> Optional[GogIsomorphism]:
    vmap, vgraph = {}, {}
    for tv, tw in iso.vertex_map.items():
        (v, x), (w, y) = ts1.vertex_cell[tv], ts2.vertex_cell[tw]
        if vmap.setdefault(v, w) != w:
            return None
        vgraph.setdefault(v, ({}, {}))[0][x] = y
    for d, d2 in iso.dart_map.items():
        if d[0] in ts1.vertical:
            v, y = ts1.vertical[d[0]]
            _, y2 = ts2.vertical[d2[0]]
            vgraph[v][1][(y, d[1])] = (y2, d2[1])
    emap, egraph = {}, {}
    for d, d2 in iso.dart_map.items():
        if d[0] in ts1.horizontal and d[1] > 0:
            e, u = ts1.horizontal[d[0]]
            e2, u2 = ts2.horizontal[d2[0]]
            if emap.setdefault(e, e2) != e2:
                return None
            egraph.setdefault(e, ({}, {}))[0][u] = u2
    for i, (j, _, rev) in iso.face_map.items():
        e, eps = ts1.face_cell[i][:2]
        _, eps2 = ts2.face_cell[j][:2]
        s = -1 if rev else 1
        egraph[e][1][(eps, 1)] = (eps2, s)
        egraph[e][1][(eps, -1)] = (eps2, -s)
    # check that the cell isomorphisms intertwine the edge maps
    for e in g1.underlying.edges:
        e2 = emap[e]
        for k, v in enumerate(g1.underlying.edges[e]):
            f1, f2 = g1.maps[e][k], g2.maps[e2][k]
            vm, dm = vgraph[v]
            evm, edm = egraph[e]
            for u, w in f1.vmap.items():
                if vm[w] != f2.vmap[evm[u]]:
                    return None
            for eps in f1.domain.edges:
                img = tuple(dm[d] for d in f1.emap[eps])
                if img != f2.dart_image(edm[(eps, 1)]):
                    return None
    return GogIsomorphism(vmap, emap, vgraph, egraph)


def gog_isomorphic(g1: GraphOfGraphs, g2: GraphOfGraphs) -> Optional[GogIsomorphism]:
    """Isomorphism of graphs of graphs, found as a zone-respecting
    isomorphism of total spaces that preserves horizontal orientation."""
    ts1, ts2 = build_total_space(g1), build_total_space(g2)
    colors = (_colors(ts1), _colors(ts2))
    for iso in iter_complex_isomorphisms(ts1.complex, ts2.complex, dart_color=colors):
        found = _extract(g1, g2, ts1, ts2, iso)
        if found is not None:
            return found
    return None
