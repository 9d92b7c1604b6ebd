"""Stallings subgroup graphs of free groups.

A subgroup H = <w_1, ..., w_k> of the free group on ``basis`` is represented
by the folded core graph obtained from a bouquet of petals spelling the
w_i.  Edges carry a generator name; the positive dart reads the generator,
the negative dart its inverse.

Basis convention for H: the spanning tree is the lexicographically least one
by edge id (Kruskal in id order); basis element ``b<i>`` is the loop through
the i-th non-tree edge, in id order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from ._util import UnionFind, ValidationError, id_key, sorted_ids
from .graphs import GraphMorphism, SerreGraph, graph_euler_and_rank, reverse_path
from .iso import Dart
from .words import Word

INFINITE = math.inf


class NotAFreeBasis(ValueError):
    """The given words are not a free basis of the subgroup they generate."""


@dataclass(frozen=True)
class StallingsGraph:
    graph: SerreGraph
    labels: Mapping[str, str]  # edge id -> generator read by its positive dart
    basepoint: str
    basis: tuple  # ambient free basis, ordered

    @property
    def ambient_rank(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return graph_euler_and_rank(self.graph)[1]

    def dart_label(self, d: Dart) -> tuple:
        return (self.labels[d[0]], d[1])

    def step(self, v: str, letter: tuple) -> Optional[Dart]:
        for d in self.graph.star(v):
            if self.dart_label(d) == letter:
                return d
        return None

    def read(self, w: Word, start: Optional[str] = None) -> Optional[list]:
        """Darts traversed reading ``w`` from ``start``; None if it falls off."""
        v = self.basepoint if start is None else start
        path = []
        for letter in w.letters:
            d = self.step(v, letter)
            if d is None:
                return None
            path.append(d)
            v = self.graph.terminus(d)
        return path

    def is_folded(self) -> bool:
        for v in self.graph.vertices:
            seen = set()
            for d in self.graph.star(v):
                lab = self.dart_label(d)
                if lab in seen:
                    return False
                seen.add(lab)
        return True

    def same_as(self, other: "StallingsGraph") -> bool:
        """Equality of the represented subgroups (folded graphs are canonical)."""
        return canonical_form(self) == canonical_form(other)


# -- spanning trees and graph bases --

def spanning_tree(g: SerreGraph) -> set:
    """Lexicographically least spanning forest by edge id."""
    uf = UnionFind(g.vertices)
    tree = set()
    for e, (a, b) in g.edges.items():
        if uf.union(a, b):
            tree.add(e)
    return tree


def tree_paths(g: SerreGraph, tree: set, base: str) -> dict:
    """Tree path (tuple of darts) from ``base`` to each vertex of its component."""
    paths = {base: ()}
    frontier = [base]
    while frontier:
        nxt = []
        for v in frontier:
            for d in g.star(v):
                if d[0] in tree:
                    w = g.terminus(d)
                    if w not in paths:
                        paths[w] = paths[v] + (d,)
                        nxt.append(w)
        frontier = nxt
    return paths


def basis_loops(g: SerreGraph, base: Optional[str] = None) -> list[tuple[str, tuple]]:
    """Free basis of pi_1(g, base): (non-tree edge id, closed dart path)."""
    base = g.vertices[0] if base is None else base
    tree = spanning_tree(g)
    paths = tree_paths(g, tree, base)
    loops = []
    for e, (a, b) in g.edges.items():
        if e in tree or a not in paths:
            continue
        loops.append((e, paths[a] + ((e, 1),) + reverse_path(paths[b])))
    return loops


def read_nontree(path: Sequence[Dart], tree: set) -> Word:
    """Word in the non-tree edge ids recorded along ``path``."""
    return Word((d[0], d[1]) for d in path if d[0] not in tree)


# -- folding --

class _Folder:
    """Mutable labeled graph for folding, optionally tracking coordinates.

    With tracking on, every edge carries a word ``gamma`` in the abstract
    generators of the petals; folding re-gauges a vertex so that merged
    darts agree, and reading a word from the basepoint multiplies gammas.
    """

    def __init__(self, words: Sequence[Word], track: bool = False):
        self.track = track
        self.base = 0
        self.vertices = {0}
        self.edges: dict = {}  # id -> [origin, terminus, generator, gamma]
        nv = 1
        for i, w in enumerate(words):
            if not w:
                if track:
                    raise NotAFreeBasis(f"generator {i + 1} is trivial")
                continue
            pts = [0] + list(range(nv, nv + len(w) - 1)) + [0]
            self.vertices.update(pts[1:-1])
            nv += len(w) - 1
            for j, (g, s) in enumerate(w.letters):
                gamma = Word()
                if track and j == len(w) - 1:
                    gamma = Word.gen(f"b{i + 1}", s)
                a, b = (pts[j], pts[j + 1]) if s > 0 else (pts[j + 1], pts[j])
                self.edges[len(self.edges)] = [a, b, g, gamma]

    def _gamma(self, d):
        e = self.edges[d[0]]
        return e[3] if d[1] > 0 else e[3].inverse()

    def _end(self, d):
        e = self.edges[d[0]]
        return e[1] if d[1] > 0 else e[0]

    def _groups(self):
        star: dict = {v: {} for v in self.vertices}
        for eid in sorted(self.edges):
            a, b, g, _ = self.edges[eid]
            star[a].setdefault((g, 1), []).append((eid, 1))
            star[b].setdefault((g, -1), []).append((eid, -1))
        return star

    def foldable(self):
        out = []
        star = self._groups()
        for v in sorted(self.vertices):
            for lab in sorted(star[v], key=lambda x: (x[0], -x[1])):
                ds = star[v][lab]
                if len(ds) >= 2:
                    out.append((ds[0], ds[1]))
        return out

    def fold_once(self, d1, d2) -> None:
        u1, u2 = self._end(d1), self._end(d2)
        if u1 == u2:
            if self.track and self._gamma(d1) != self._gamma(d2):
                raise NotAFreeBasis("two distinct coordinate words name the same element")
            del self.edges[d2[0]]
            return
        if u2 != self.base:
            gone, keep = u2, u1
            c = self._gamma(d2).inverse() * self._gamma(d1)
        else:
            gone, keep = u1, u2
            c = self._gamma(d1).inverse() * self._gamma(d2)
        for e in self.edges.values():
            if self.track:
                left = c.inverse() if e[0] == gone else Word()
                right = c if e[1] == gone else Word()
                e[3] = left * e[3] * right
            if e[0] == gone:
                e[0] = keep
            if e[1] == gone:
                e[1] = keep
        self.vertices.discard(gone)
        del self.edges[d2[0]]

    def fold(self, rng: Optional[random.Random] = None) -> None:
        while True:
            pairs = self.foldable()
            if not pairs:
                return
            d1, d2 = rng.choice(pairs) if rng is not None else pairs[0]
            if rng is not None and rng.random() < 0.5:
                d1, d2 = d2, d1
            self.fold_once(d1, d2)

    def prune(self) -> None:
        while True:
            val = {v: 0 for v in self.vertices}
            for a, b, _, _ in self.edges.values():
                val[a] += 1
                val[b] += 1
            leaves = [v for v, k in val.items() if k <= 1 and v != self.base]
            if not leaves:
                return
            for v in leaves:
                self.vertices.discard(v)
            self.edges = {i: e for i, e in self.edges.items() if e[0] in self.vertices and e[1] in self.vertices}

    def read_gamma(self, w: Word) -> Optional[Word]:
        v = self.base
        acc: list = []
        for g, s in w.letters:
            for eid in sorted(self.edges):
                a, b, h, gamma = self.edges[eid]
                if h != g:
                    continue
                if s > 0 and a == v:
                    acc.extend(gamma.letters)
                    v = b
                    break
                if s < 0 and b == v:
                    acc.extend(gamma.inverse().letters)
                    v = a
                    break
            else:
                return None
        return Word(acc) if v == self.base else None


def _resolve_basis(words: Sequence[Word], basis) -> tuple:
    used = set()
    for w in words:
        used |= w.generators()
    if isinstance(basis, int):
        names = sorted_ids(used)
        if len(names) > basis:
            raise ValidationError(f"{len(names)} generators used but rank is {basis}")
        i = 1
        while len(names) < basis:
            cand = f"g{i}"
            if cand not in used:
                names.append(cand)
            i += 1
        return tuple(names)
    names = tuple(basis)
    if len(set(names)) != len(names):
        raise ValidationError("repeated generator in basis")
    missing = used - set(names)
    if missing:
        raise ValidationError(f"unknown generators {sorted(missing)}")
    return names


def _canonical(folder: _Folder, basis: tuple) -> StallingsGraph:
    order = [(g, s) for g in basis for s in (1, -1)]
    vid = {folder.base: "0"}
    eid: dict = {}
    new_edges: dict = {}
    labels: dict = {}
    queue = [folder.base]
    by_vertex: dict = {v: [] for v in folder.vertices}
    for i, (a, b, g, _) in folder.edges.items():
        by_vertex[a].append(((g, 1), i, b))
        by_vertex[b].append(((g, -1), i, a))
    while queue:
        v = queue.pop(0)
        for lab in order:
            for l2, i, w in by_vertex[v]:
                if l2 != lab:
                    continue
                if w not in vid:
                    vid[w] = str(len(vid))
                    queue.append(w)
                if i not in eid:
                    eid[i] = str(len(eid))
    for i, (a, b, g, _) in folder.edges.items():
        new_edges[eid[i]] = (vid[a], vid[b])
        labels[eid[i]] = g
    graph = SerreGraph(vid.values(), new_edges)
    return StallingsGraph(graph, labels, "0", basis)


def subgroup_graph(gens: Sequence[Word], basis, rng: Optional[random.Random] = None) -> StallingsGraph:
    """Folded core graph of the subgroup generated by ``gens``.

    ``basis`` is the ambient free basis, or an int rank (names are then taken
    from the words and padded with ``g1``, ``g2``, ...).  ``rng`` folds in a
    random order; the canonical output does not depend on it.
    """
    words = [w if isinstance(w, Word) else Word.parse(w) for w in gens]
    names = _resolve_basis(words, basis)
    folder = _Folder(words)
    folder.fold(rng)
    folder.prune()
    return _canonical(folder, names)


def canonical_form(sg: StallingsGraph) -> tuple:
    g = sg.graph
    return (sg.basis, sg.basepoint, g.vertices, tuple(g.edges.items()), tuple(sorted(sg.labels.items())))


def relabel_canonical(sg: StallingsGraph) -> StallingsGraph:
    """Renumber a folded graph into the canonical BFS numbering."""
    folder = _Folder([])
    vmap = {v: i for i, v in enumerate(sg.graph.vertices)}
    folder.base = vmap[sg.basepoint]
    folder.vertices = set(vmap.values())
    folder.edges = {i: [vmap[a], vmap[b], sg.labels[e], Word()] for i, (e, (a, b)) in enumerate(sg.graph.edges.items())}
    return _canonical(folder, sg.basis)


def subgroup_basis(sg: StallingsGraph) -> list[Word]:
    """Ambient words of the spanning-tree basis b1, b2, ... of the subgroup."""
    return [Word(sg.dart_label(d) for d in loop) for _, loop in basis_loops(sg.graph, sg.basepoint)]


def membership(sg: StallingsGraph, w: Word) -> bool:
    path = sg.read(w)
    if path is None:
        return False
    end = sg.graph.terminus(path[-1]) if path else sg.basepoint
    return end == sg.basepoint


def subgroup_coordinates(sg: StallingsGraph, w: Word, basis_words: Optional[Sequence[Word]] = None) -> Optional[Word]:
    """Express a member ``w`` in a basis of the subgroup; None if not a member.

    Default basis: the spanning-tree basis (generators named ``b1``, ...).
    With ``basis_words`` given, coordinates are in those words instead
    (again named ``b1``, ...); they must form a free basis of the subgroup
    represented by ``sg``, otherwise :class:`NotAFreeBasis` is raised.
    """
    if not membership(sg, w):
        return None
    if basis_words is None:
        tree = spanning_tree(sg.graph)
        index = {e: f"b{i + 1}" for i, (e, _) in enumerate(basis_loops(sg.graph, sg.basepoint))}
        return Word((index[d[0]], d[1]) for d in sg.read(w) if d[0] not in tree)
    words = list(basis_words)
    check = subgroup_graph(words, sg.basis)
    if not check.same_as(sg) or check.rank != len(words):
        raise NotAFreeBasis("words do not form a free basis of this subgroup")
    folder = _Folder(words, track=True)
    folder.fold()
    folder.prune()
    return folder.read_gamma(w)


def subgroup_index(sg: StallingsGraph) -> float | int:
    """Index in the ambient free group: the number of vertices if the graph is
    a cover of the rose, otherwise infinite."""
    for v in sg.graph.vertices:
        labels = [sg.dart_label(d) for d in sg.graph.star(v)]
        if sorted(labels) != sorted((g, s) for g in sg.basis for s in (1, -1)):
            return INFINITE
    return len(sg.graph.vertices)


def labeled_graph(g: SerreGraph, labels: Mapping[str, str], base: str, basis: Sequence[str]) -> StallingsGraph:
    """Wrap an already labeled graph; folds it to the core if needed."""
    folder = _Folder([])
    vmap = {v: i for i, v in enumerate(g.vertices)}
    folder.base = vmap[base]
    folder.vertices = set(vmap.values())
    folder.edges = {i: [vmap[a], vmap[b], labels[e], Word()] for i, (e, (a, b)) in enumerate(g.edges.items())}
    folder.fold()
    folder.prune()
    return _canonical(folder, tuple(basis))


# -- maps of graphs --

def codomain_basis(g: SerreGraph) -> tuple:
    """Free basis names of pi_1(g): its non-tree edge ids, in order."""
    tree = spanning_tree(g)
    return tuple(e for e in g.edges if e not in tree)


def induced_words(f: GraphMorphism, base: Optional[str] = None) -> list[Word]:
    """Images of the domain's basis loops, as words in the codomain basis."""
    base = f.domain.vertices[0] if base is None else base
    tree = spanning_tree(f.codomain)
    return [read_nontree(f.path_image(loop), tree) for _, loop in basis_loops(f.domain, base)]


def pi1_image(f: GraphMorphism, base: Optional[str] = None) -> StallingsGraph:
    if not f.domain.is_connected():
        raise ValidationError("pi1_image needs a connected domain")
    return subgroup_graph(induced_words(f, base), codomain_basis(f.codomain))


def is_pi1_injective(f: GraphMorphism) -> bool:
    # Hopfian: a surjection between free groups of equal finite rank is injective.
    return pi1_image(f).rank == graph_euler_and_rank(f.domain)[1]
