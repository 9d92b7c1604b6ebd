"""Independent oracles and random generators shared by the tests.

Nothing here calls the folding or covering code under test: the oracles are
deliberately naive reimplementations.
"""

import itertools
import json
import random
from pathlib import Path

from gogkit.complexes import FiniteQuotientHom, TwoComplex
from gogkit.graphs import GraphMorphism, SerreGraph

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())


# -- words as plain tuples --

def free_reduce(letters):
    out = []
    for g, s in letters:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def inverse(letters):
    return tuple((g, -s) for g, s in reversed(letters))


def random_letters(rng, basis, max_len, min_len=0):
    n = rng.randint(min_len, max_len)
    return free_reduce((rng.choice(basis), rng.choice((1, -1))) for _ in range(n))


def brute_products(gens, depth):
    """All reduced products of at most ``depth`` generators and inverses."""
    pool = [g for g in gens] + [inverse(g) for g in gens]
    found = {()}
    layer = {()}
    for _ in range(depth):
        layer = {free_reduce(w + p) for w in layer for p in pool}
        found |= layer
    return found


# -- a naive folding oracle --

class NaiveFold:
    """Stallings graph by brute-force identification, for cross-checking."""

    def __init__(self, gens):
        self.edges = set()  # (origin, label, terminus) for positive letters
        nxt = 1
        for w in gens:
            if not w:
                continue
            pts = [0] + list(range(nxt, nxt + len(w) - 1)) + [0]
            nxt += len(w) - 1
            for i, (g, s) in enumerate(w):
                a, b = pts[i], pts[i + 1]
                self.edges.add((a, g, b) if s > 0 else (b, g, a))
        changed = True
        while changed:
            changed = False
            for (a, g, b), (c, h, d) in itertools.combinations(sorted(self.edges), 2):
                if g != h:
                    continue
                if a == c and b != d:
                    self._merge(b, d)
                elif b == d and a != c:
                    self._merge(a, c)
                else:
                    continue
                changed = True
                break

    def _merge(self, x, y):
        keep, gone = min(x, y), max(x, y)
        self.edges = {(keep if a == gone else a, g, keep if b == gone else b) for a, g, b in self.edges}

    def core(self):
        """(vertex count, edge count) after trimming hanging trees."""
        edges = set(self.edges)
        while True:
            deg = {0: 2}
            for a, _, b in edges:
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
            leaves = {v for v, k in deg.items() if k <= 1 and v != 0}
            if not leaves:
                verts = {0} | {a for a, _, _ in edges} | {b for _, _, b in edges}
                return len(verts), len(edges)
            edges = {(a, g, b) for a, g, b in edges if a not in leaves and b not in leaves}

    def accepts(self, letters):
        v = 0
        for g, s in letters:
            nxt = [b for a, h, b in self.edges if s > 0 and a == v and h == g]
            nxt += [a for a, h, b in self.edges if s < 0 and b == v and h == g]
            if not nxt:
                return False
            v = nxt[0]
        return v == 0


# -- random graphs, morphisms, complexes --

def random_connected_graph(rng, nv, extra, prefix="e"):
    vs = [f"v{i}" for i in range(nv)]
    edges = {}
    for i in range(1, nv):
        a, b = vs[rng.randrange(i)], vs[i]
        if rng.random() < 0.5:
            a, b = b, a
        edges[f"{prefix}{len(edges)}"] = (a, b)
    for _ in range(extra):
        edges[f"{prefix}{len(edges)}"] = (rng.choice(vs), rng.choice(vs))
    return SerreGraph(vs, edges)


def random_walk(rng, g, start, length):
    path = []
    v = start
    for _ in range(length):
        d = rng.choice(g.star(v))
        path.append(d)
        v = g.terminus(d)
    return path, v


def shortest_path(g, a, b):
    prev = {a: None}
    queue = [a]
    while queue:
        v = queue.pop(0)
        for d in g.star(v):
            w = g.terminus(d)
            if w not in prev:
                prev[w] = (v, d)
                queue.append(w)
    path = []
    v = b
    while prev[v] is not None:
        v, d = prev[v]
        path.append(d)
    return path[::-1]


def random_morphism(rng, dom, cod, max_len=3):
    vmap = {v: rng.choice(cod.vertices) for v in dom.vertices}
    emap = {}
    for e, (a, b) in dom.edges.items():
        walk, end = random_walk(rng, cod, vmap[a], rng.randint(0, max_len))
        path = walk + shortest_path(cod, end, vmap[b])
        if not path:
            path = [cod.star(vmap[a])[0]]
            path += shortest_path(cod, cod.terminus(path[0]), vmap[b])
        emap[e] = tuple(path)
    return GraphMorphism(dom, cod, vmap, emap)


def relabel_graph(rng, g):
    vs = {v: f"r{i}" for i, v in enumerate(rng.sample(list(g.vertices), len(g.vertices)))}
    es = {e: f"s{i}" for i, e in enumerate(rng.sample(list(g.edges), len(g.edges)))}
    flips = {e: rng.random() < 0.5 for e in g.edges}
    edges = {}
    for e, (a, b) in g.edges.items():
        edges[es[e]] = (vs[b], vs[a]) if flips[e] else (vs[a], vs[b])
    return SerreGraph(vs.values(), edges), vs, es, flips


def random_complex_and_hom(rng):
    """A random connected 2-complex with a valid hom to Z/m, m <= 5.

    The hom is chosen first on the edges; faces are random closed walks,
    kept only when their value sum vanishes.
    """
    m = rng.randint(1, 5)
    g = random_connected_graph(rng, rng.randint(1, 4), rng.randint(1, 4))
    h = FiniteQuotientHom(m, {e: rng.randrange(m) for e in g.edges})
    faces = []
    for _ in range(rng.randint(0, 3)):
        v = rng.choice(g.vertices)
        for _ in range(20):
            walk, end = random_walk(rng, g, v, rng.randint(1, 6))
            walk += shortest_path(g, end, v)
            if walk and h.of_path(walk) == 0:
                faces.append(tuple(walk))
                break
    return TwoComplex(g, tuple(faces)), h


def subgroup_corpus(seed, count):
    """(basis, generator letter tuples) with rank <= 3, up to 5 words of length <= 8."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.randint(1, 3)
        basis = ("a", "b", "c")[:r]
        gens = [random_letters(rng, basis, 8, 1) for _ in range(rng.randint(1, 5))]
        gens = [g for g in gens if g]
        if gens:
            out.append((basis, gens))
    return out
