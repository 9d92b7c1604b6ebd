"""Backtracking isomorphism search over dart structures.

One engine serves plain Serre graphs and 2-complexes.  Faces, when given,
are matched first (up to rotation and reversal); placing a face fixes all
darts on its boundary, so propagation through shared darts keeps the search
small on the complexes we meet.  Remaining darts are matched VF2-style:
extend from an already mapped vertex, otherwise seed a new component.

Everything iterates in ascending id order, so the first isomorphism found
is deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence

from ._util import id_key

Dart = tuple  # (edge id, +1 | -1)


def inv(d: Dart) -> Dart:
    return (d[0], -d[1])


def dart_key(d: Dart) -> tuple:
    return (id_key(d[0]), 0 if d[1] > 0 else 1)


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: dict
    dart_map: dict
    # face index -> (image face index, rotation, reversed)
    face_map: dict = field(default_factory=dict)

    def edge_map(self) -> dict:
        """Edge id -> (image edge id, sign) read off the positive darts."""
        return {d[0]: self.dart_map[d] for d in self.dart_map if d[1] > 0}


class _Search:
    def __init__(self, g1, g2, faces1, faces2, vcol1, vcol2, dcol1, dcol2):
        self.g1, self.g2 = g1, g2
        self.faces1, self.faces2 = list(faces1), list(faces2)
        self.dcol1, self.dcol2 = dcol1, dcol2
        self.vsig1 = {v: self._vsig(g1, v, vcol1, dcol1) for v in g1.vertices}
        self.vsig2 = {v: self._vsig(g2, v, vcol2, dcol2) for v in g2.vertices}
        self.darts1 = sorted(g1.darts(), key=dart_key)
        self.vmap: dict = {}
        self.vused: set = set()
        self.dmap: dict = {}
        self.dused: set = set()
        self.fmap: dict = {}
        self.fused: set = set()
        self.trail: list = []
        self.occ2: dict = {}
        for j, f in enumerate(self.faces2):
            for pos, d in enumerate(f):
                self.occ2.setdefault(d, []).append((j, pos))

    @staticmethod
    def _vsig(g, v, vcol, dcol):
        star = g.star(v)
        loops = sum(1 for d in star if g.terminus(d) == v)
        cols = tuple(sorted(repr(dcol(d)) for d in star)) if dcol else ()
        return (repr(vcol(v)) if vcol else None, len(star), loops, cols)

    def quick_reject(self) -> bool:
        g1, g2 = self.g1, self.g2
        if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
            return True
        if len(self.faces1) != len(self.faces2):
            return True
        if Counter(map(len, self.faces1)) != Counter(map(len, self.faces2)):
            return True
        return Counter(self.vsig1.values()) != Counter(self.vsig2.values())

    # -- assignment with undo trail --
    def _assign_vertex(self, v, w) -> bool:
        if v in self.vmap:
            return self.vmap[v] == w
        if w in self.vused or self.vsig1[v] != self.vsig2[w]:
            return False
        self.vmap[v] = w
        self.vused.add(w)
        self.trail.append(("v", v, w))
        return True

    def _assign_dart(self, d, e) -> bool:
        if d in self.dmap:
            return self.dmap[d] == e
        if e in self.dused:
            return False
        if self.dcol1 and self.dcol1(d) != self.dcol2(e):
            return False
        g1, g2 = self.g1, self.g2
        if not self._assign_vertex(g1.origin(d), g2.origin(e)):
            return False
        if not self._assign_vertex(g1.terminus(d), g2.terminus(e)):
            return False
        for x, y in ((d, e), (inv(d), inv(e))):
            self.dmap[x] = y
            self.dused.add(y)
            self.trail.append(("d", x, y))
        return True

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            kind, x, y = self.trail.pop()
            if kind == "v":
                del self.vmap[x]
                self.vused.discard(y)
            elif kind == "d":
                del self.dmap[x]
                self.dused.discard(y)
            else:
                del self.fmap[x]
                self.fused.discard(y)

    # -- face phase --
    def _face_candidates(self, i):
        f = self.faces1[i]
        L = len(f)
        seen = set()
        anchored = [(pos, self.dmap[d]) for pos, d in enumerate(f) if d in self.dmap]
        if anchored:
            pos, image = anchored[0]
            for j, p in self.occ2.get(image, ()):
                if j not in self.fused and len(self.faces2[j]) == L:
                    seen.add((j, (p - pos) % L, False))
            for j, p in self.occ2.get(inv(image), ()):
                if j not in self.fused and len(self.faces2[j]) == L:
                    seen.add((j, (L - 1 - p - pos) % L, True))
        else:
            for j, f2 in enumerate(self.faces2):
                if j in self.fused or len(f2) != L:
                    continue
                for r in range(L):
                    seen.add((j, r, False))
                    seen.add((j, r, True))
        return sorted(seen)

    def _face_images(self, j, r, rev):
        f2 = self.faces2[j]
        L = len(f2)
        seq = [inv(f2[L - 1 - t]) for t in range(L)] if rev else list(f2)
        return [seq[(t + r) % L] for t in range(L)]

    def _faces(self) -> Iterator[Isomorphism]:
        pending = [i for i in range(len(self.faces1)) if i not in self.fmap]
        if not pending:
            yield from self._graph()
            return
        i = max(pending, key=lambda k: (sum(d in self.dmap for d in self.faces1[k]), -k))
        for j, r, rev in self._face_candidates(i):
            mark = len(self.trail)
            images = self._face_images(j, r, rev)
            if all(self._assign_dart(d, e) for d, e in zip(self.faces1[i], images)):
                self.fmap[i] = (j, r, rev)
                self.fused.add(j)
                self.trail.append(("f", i, j))
                yield from self._faces()
            self._undo(mark)

    # -- graph phase --
    def _graph(self) -> Iterator[Isomorphism]:
        g1, g2 = self.g1, self.g2
        nxt = None
        for d in self.darts1:
            if d not in self.dmap and g1.origin(d) in self.vmap:
                nxt = d
                break
        if nxt is not None:
            w = self.vmap[g1.origin(nxt)]
            for e in g2.star(w):
                if e in self.dused:
                    continue
                mark = len(self.trail)
                if self._assign_dart(nxt, e):
                    yield from self._graph()
                self._undo(mark)
            return
        free = [v for v in g1.vertices if v not in self.vmap]
        if not free:
            yield Isomorphism(dict(self.vmap), dict(self.dmap), dict(self.fmap))
            return
        v = free[0]
        for w in g2.vertices:
            if w in self.vused:
                continue
            mark = len(self.trail)
            if self._assign_vertex(v, w):
                yield from self._graph()
            self._undo(mark)


def iter_isomorphisms(
    g1,
    g2,
    faces1: Sequence[Sequence[Dart]] = (),
    faces2: Sequence[Sequence[Dart]] = (),
    vertex_color: Optional[tuple[Callable, Callable]] = None,
    dart_color: Optional[tuple[Callable, Callable]] = None,
    seed: Optional[Mapping] = None,
) -> Iterator[Isomorphism]:
    """Yield all isomorphisms g1 -> g2 (matching faces when given).

    ``vertex_color``/``dart_color`` are pairs of callables (one per side);
    ``seed`` optionally pre-assigns darts of g1 to darts of g2.
    """
    vc1, vc2 = vertex_color if vertex_color else (None, None)
    dc1, dc2 = dart_color if dart_color else (None, None)
    search = _Search(g1, g2, faces1, faces2, vc1, vc2, dc1, dc2)
    if search.quick_reject():
        return
    for d, e in (seed or {}).items():
        if not search._assign_dart(d, e):
            return
    yield from search._faces()


def find_isomorphism(g1, g2, **kwargs) -> Optional[Isomorphism]:
    return next(iter_isomorphisms(g1, g2, **kwargs), None)
