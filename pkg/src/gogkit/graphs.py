"""Finite Serre graphs, edge-path morphisms, and embedding predicates.

A graph is stored by its geometric edges, each with a chosen positive
orientation; the darts of edge ``e`` are ``(e, +1)`` and ``(e, -1)`` and the
involution flips the sign.  Loops and parallel edges are allowed.  All ids
are strings, ordered naturally (``e2`` < ``e10``).

A morphism sends vertices to vertices and each positive dart to a nonempty
edge path in the codomain; negative darts go to the reversed path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from ._util import UnionFind, ValidationError, id_key, sorted_ids
from .iso import Dart, Isomorphism, dart_key, find_isomorphism, inv

EdgePath = tuple  # tuple of darts


class SerreGraph:
    """Immutable finite graph given by vertices and oriented geometric edges."""

    __slots__ = ("vertices", "edges", "_star")

    def __init__(self, vertices: Iterable[str], edges: Mapping[str, tuple[str, str]] | Iterable = ()):
        vs = sorted_ids(set(vertices))
        if isinstance(edges, Mapping):
            items = list(edges.items())
        else:
            items = [(e, (a, b)) for e, a, b in edges]
        vset = set(vs)
        emap = {}
        for e, (a, b) in items:
            if not isinstance(e, str) or not isinstance(a, str) or not isinstance(b, str):
                raise ValidationError(f"ids must be strings, got edge {e!r}: {a!r} -> {b!r}")
            if e in emap:
                raise ValidationError(f"duplicate edge id {e!r}")
            if a not in vset or b not in vset:
                raise ValidationError(f"edge {e!r} has an endpoint outside the vertex set")
            emap[e] = (a, b)
        for v in vs:
            if not isinstance(v, str):
                raise ValidationError(f"vertex ids must be strings, got {v!r}")
        object.__setattr__(self, "vertices", tuple(vs))
        object.__setattr__(self, "edges", {e: emap[e] for e in sorted_ids(emap)})
        star: dict = {v: [] for v in vs}
        for e, (a, b) in self.edges.items():
            star[a].append((e, 1))
            star[b].append((e, -1))
        object.__setattr__(self, "_star", {v: tuple(sorted(ds, key=dart_key)) for v, ds in star.items()})

    def __setattr__(self, name, value):
        raise AttributeError("SerreGraph is immutable")

    def __eq__(self, other):
        return isinstance(other, SerreGraph) and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.items())))

    def __repr__(self):
        return f"SerreGraph(V={len(self.vertices)}, E={len(self.edges)})"

    def origin(self, d: Dart) -> str:
        a, b = self.edges[d[0]]
        return a if d[1] > 0 else b

    def terminus(self, d: Dart) -> str:
        a, b = self.edges[d[0]]
        return b if d[1] > 0 else a

    def darts(self) -> list[Dart]:
        return [(e, s) for e in self.edges for s in (1, -1)]

    def star(self, v: str) -> tuple[Dart, ...]:
        """Darts with origin ``v``, in ascending order."""
        return self._star[v]

    def valence(self, v: str) -> int:
        return len(self._star[v])

    def has_dart(self, d: Dart) -> bool:
        return d[0] in self.edges and d[1] in (1, -1)

    def components(self) -> list[list[str]]:
        uf = UnionFind(self.vertices)
        for a, b in self.edges.values():
            uf.union(a, b)
        comps = [sorted_ids(c) for c in uf.groups().values()]
        return sorted(comps, key=lambda c: id_key(c[0]))

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and len(self.components()) == 1

    def induced(self, vertices: Iterable[str], edges: Iterable[str]) -> "SerreGraph":
        return SerreGraph(vertices, {e: self.edges[e] for e in edges})


def theta_graph(n: int, v: str = "v", w: str = "w") -> SerreGraph:
    """Two vertices joined by ``n`` parallel edges, all oriented v -> w."""
    return SerreGraph([v, w], {f"e{i}": (v, w) for i in range(1, n + 1)})


def rose(names: Sequence[str], vertex: str = "o") -> SerreGraph:
    return SerreGraph([vertex], {x: (vertex, vertex) for x in names})


# -- edge paths --

def reverse_path(p: Sequence[Dart]) -> EdgePath:
    return tuple(inv(d) for d in reversed(p))


def is_reduced(p: Sequence[Dart]) -> bool:
    return all(p[i + 1] != inv(p[i]) for i in range(len(p) - 1))


def check_path(g: SerreGraph, p: Sequence[Dart]) -> None:
    if not p:
        raise ValidationError("edge paths must be nonempty")
    for d in p:
        if not g.has_dart(d):
            raise ValidationError(f"unknown dart {d!r}")
    for d1, d2 in zip(p, p[1:]):
        if g.terminus(d1) != g.origin(d2):
            raise ValidationError(f"path not composable at {d1!r} -> {d2!r}")


# -- morphisms --

@dataclass(frozen=True, eq=True)
class GraphMorphism:
    domain: SerreGraph
    codomain: SerreGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, EdgePath]  # image of each positive dart

    def __post_init__(self):
        vmap = {v: self.vmap[v] for v in self.domain.vertices if v in self.vmap}
        if set(vmap) != set(self.domain.vertices) or len(vmap) != len(self.vmap):
            raise ValidationError("vertex map must be total on the domain vertices")
        for v, w in vmap.items():
            if w not in self.codomain._star:
                raise ValidationError(f"vertex {v!r} maps outside the codomain")
        if set(self.emap) != set(self.domain.edges):
            raise ValidationError("edge map must be total on the domain edges")
        emap = {}
        for e in self.domain.edges:
            p = tuple(tuple(d) for d in self.emap[e])
            check_path(self.codomain, p)
            a, b = self.domain.edges[e]
            if self.codomain.origin(p[0]) != vmap[a] or self.codomain.terminus(p[-1]) != vmap[b]:
                raise ValidationError(f"image of edge {e!r} does not match its endpoint images")
            emap[e] = p
        object.__setattr__(self, "vmap", vmap)
        object.__setattr__(self, "emap", emap)

    def dart_image(self, d: Dart) -> EdgePath:
        p = self.emap[d[0]]
        return p if d[1] > 0 else reverse_path(p)

    def path_image(self, p: Sequence[Dart]) -> EdgePath:
        out: list = []
        for d in p:
            out.extend(self.dart_image(d))
        return tuple(out)

    @property
    def combinatorial(self) -> bool:
        return all(len(p) == 1 for p in self.emap.values())

    def compose(self, outer: "GraphMorphism") -> "GraphMorphism":
        """``outer`` after ``self``."""
        return GraphMorphism(
            self.domain,
            outer.codomain,
            {v: outer.vmap[w] for v, w in self.vmap.items()},
            {e: outer.path_image(p) for e, p in self.emap.items()},
        )


def identity_morphism(g: SerreGraph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.vertices}, {e: ((e, 1),) for e in g.edges})


def inclusion(sub: SerreGraph, g: SerreGraph) -> GraphMorphism:
    return GraphMorphism(sub, g, {v: v for v in sub.vertices}, {e: ((e, 1),) for e in sub.edges})


@dataclass(frozen=True)
class Subdivision:
    """Where each cell of a subdivided domain came from.

    ``vertex_origin[v]`` is ``("vertex", v0)`` for an old vertex or
    ``("edge", e, i)`` for the i-th interior point of old edge ``e``;
    ``edge_origin[e']`` is ``(e, i)``: the i-th piece of old edge ``e``.
    """

    vertex_origin: dict
    edge_origin: dict


def subdivide_domain(f: GraphMorphism) -> tuple[GraphMorphism, Subdivision]:
    """Split each domain edge into as many pieces as its image has darts."""
    dom = f.domain
    vertices = list(dom.vertices)
    vorigin = {v: ("vertex", v) for v in dom.vertices}
    edges: dict = {}
    eorigin: dict = {}
    vmap = dict(f.vmap)
    emap: dict = {}
    for e, (a, b) in dom.edges.items():
        path = f.emap[e]
        if len(path) == 1:
            edges[e] = (a, b)
            eorigin[e] = (e, 0)
            emap[e] = path
            continue
        L = len(path)
        points = [a] + [f"{e}#{i}" for i in range(1, L)] + [b]
        for i in range(1, L):
            vertices.append(points[i])
            vorigin[points[i]] = ("edge", e, i)
            vmap[points[i]] = f.codomain.terminus(path[i - 1])
        for i in range(L):
            piece = f"{e}#{i}"
            edges[piece] = (points[i], points[i + 1])
            eorigin[piece] = (e, i)
            emap[piece] = (path[i],)
    new_dom = SerreGraph(vertices, edges)
    return GraphMorphism(new_dom, f.codomain, vmap, emap), Subdivision(vorigin, eorigin)


def _injective_cells(f: GraphMorphism) -> bool:
    images = list(f.vmap.values())
    if len(set(images)) != len(images):
        return False
    hit = [p[0][0] for p in f.emap.values()]
    return len(set(hit)) == len(hit)


def is_combinatorial_embedding(f: GraphMorphism) -> bool:
    return f.combinatorial and _injective_cells(f)


def is_topological_embedding(f: GraphMorphism) -> bool:
    fine, _ = subdivide_domain(f)
    return _injective_cells(fine)


def graph_euler_and_rank(g: SerreGraph) -> tuple[int, int]:
    """Euler characteristic and first Betti number (rank of pi_1 when connected)."""
    chi = len(g.vertices) - len(g.edges)
    return chi, len(g.components()) - chi


def graph_isomorphic(g: SerreGraph, h: SerreGraph, **kwargs) -> Optional[Isomorphism]:
    return find_isomorphism(g, h, **kwargs)


def smooth_bivalent(g: SerreGraph, protected: Iterable[str] = ()) -> tuple[SerreGraph, dict]:
    """Remove unprotected valence-2 vertices, merging their two edges.

    Returns the smoothed graph and a map from each of its edges to the path
    of original darts that its positive dart traverses.  A vertex carrying
    just one loop is kept.
    """
    keep = set(protected)
    vertices = set(g.vertices)
    edges = dict(g.edges)
    paths = {e: ((e, 1),) for e in edges}

    def star(v):
        out = []
        for e in sorted_ids(edges):
            a, b = edges[e]
            if a == v:
                out.append((e, 1))
            if b == v:
                out.append((e, -1))
        return out

    changed = True
    while changed:
        changed = False
        for v in sorted_ids(vertices):
            if v in keep:
                continue
            ds = star(v)
            if len(ds) != 2 or ds[0][0] == ds[1][0]:
                continue
            d1, d2 = ds

            def far(d):
                a, b = edges[d[0]]
                return b if d[1] > 0 else a

            def dpath(d):
                p = paths[d[0]]
                return p if d[1] > 0 else reverse_path(p)

            new_path = reverse_path(dpath(d1)) + dpath(d2)
            start, end = far(d1), far(d2)
            name = min(d1[0], d2[0], key=id_key)
            for d in (d1, d2):
                del edges[d[0]]
                del paths[d[0]]
            edges[name] = (start, end)
            paths[name] = new_path
            vertices.discard(v)
            changed = True
            break
    return SerreGraph(vertices, edges), paths


def relabel_path(p: Sequence[Dart], corr: Mapping[str, EdgePath]) -> EdgePath:
    """Rewrite a path of old darts as a path in a smoothed graph.

    ``corr`` is the edge correspondence returned by :func:`smooth_bivalent`.
    Raises ValidationError when the path turns around or stops inside a
    merged edge.
    """
    where: dict = {}
    for e, path in corr.items():
        L = len(path)
        for i, d in enumerate(path):
            where[d] = ((e, 1), i, L)
            where[inv(d)] = ((e, -1), L - 1 - i, L)
    out = []
    i = 0
    while i < len(p):
        new, offset, L = where[p[i]]
        if offset != 0:
            raise ValidationError("path enters a merged edge from its middle")
        expected = corr[new[0]] if new[1] > 0 else reverse_path(corr[new[0]])
        if tuple(p[i:i + L]) != tuple(expected):
            raise ValidationError("path leaves a merged edge before its end")
        out.append(new)
        i += L
    return tuple(out)
