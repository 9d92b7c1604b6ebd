"""Presentations, combinatorial 2-complexes and their finite cyclic covers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from ._util import ValidationError, sorted_ids
from .graphs import EdgePath, SerreGraph, check_path
from .iso import Isomorphism, find_isomorphism, iter_isomorphisms
from .words import Word


@dataclass(frozen=True)
class PresentationData:
    generators: tuple
    relators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValidationError("repeated generator")
        rels = []
        for r in self.relators:
            r = r if isinstance(r, Word) else Word.parse(r)
            if not r:
                raise ValidationError("relators must be nonempty reduced words")
            unknown = r.generators() - set(gens)
            if unknown:
                raise ValidationError(f"relator {r} uses unknown generators {sorted(unknown)}")
            rels.append(r)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    def __str__(self):
        return "< " + ", ".join(self.generators) + " | " + ", ".join(map(str, self.relators)) + " >"


@dataclass(frozen=True)
class TwoComplex:
    """A graph with 2-cells attached along closed edge paths.

    ``zones`` optionally tags cells: keys ``("vertex", id)``, ``("edge", id)``
    or ``("face", index)``; values are tags such as ``("vertex", v)``.
    """

    skeleton: SerreGraph
    faces: tuple
    zones: Mapping = field(default_factory=dict)

    def __post_init__(self):
        faces = []
        for f in self.faces:
            f = tuple(tuple(d) for d in f)
            check_path(self.skeleton, f)
            if self.skeleton.terminus(f[-1]) != self.skeleton.origin(f[0]):
                raise ValidationError("face boundary is not closed")
            faces.append(f)
        object.__setattr__(self, "faces", tuple(faces))

    @property
    def euler_characteristic(self) -> int:
        return len(self.skeleton.vertices) - len(self.skeleton.edges) + len(self.faces)

    def cell_counts(self) -> tuple[int, int, int]:
        return len(self.skeleton.vertices), len(self.skeleton.edges), len(self.faces)


@dataclass(frozen=True)
class FiniteQuotientHom:
    """Edge-valued cochain to Z/m; a homomorphism of pi_1 when it vanishes on faces."""

    modulus: int
    values: Mapping[str, int]

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 1:
            raise ValidationError("modulus must be a positive integer")
        object.__setattr__(self, "values", {e: int(v) % self.modulus for e, v in self.values.items()})

    def of_dart(self, d) -> int:
        return (d[1] * self.values.get(d[0], 0)) % self.modulus

    def of_path(self, p: Sequence) -> int:
        return sum(self.of_dart(d) for d in p) % self.modulus


def presentation_complex(p: PresentationData, vertex: str = "o") -> TwoComplex:
    skel = SerreGraph([vertex], {g: (vertex, vertex) for g in p.generators})
    return TwoComplex(skel, tuple(tuple(r.letters) for r in p.relators))


def validate_hom(c: TwoComplex, h: FiniteQuotientHom) -> bool:
    return all(h.of_path(f) == 0 for f in c.faces)


@dataclass(frozen=True)
class Covering:
    complex: TwoComplex
    vertex_proj: dict
    edge_proj: dict
    face_proj: dict
    sheet: dict  # cover vertex -> residue


def cover_complex(c: TwoComplex, h: FiniteQuotientHom) -> Covering:
    """Regular m-fold cover: vertices V x Z/m, darts shift the residue by h."""
    if not validate_hom(c, h):
        raise ValidationError("homomorphism does not vanish on every face")
    m = h.modulus
    g = c.skeleton

    def vname(v, q):
        return f"{v}.{q}"

    def ename(e, q):
        return f"{e}.{q}"

    vertices, vproj, sheet = [], {}, {}
    for v in g.vertices:
        for q in range(m):
            vertices.append(vname(v, q))
            vproj[vname(v, q)] = v
            sheet[vname(v, q)] = q
    edges, eproj = {}, {}
    for e, (a, b) in g.edges.items():
        for q in range(m):
            edges[ename(e, q)] = (vname(a, q), vname(b, (q + h.values.get(e, 0)) % m))
            eproj[ename(e, q)] = e

    def lift(d, q):
        # dart d of the base starting on sheet q
        if d[1] > 0:
            return (ename(d[0], q), 1)
        return (ename(d[0], (q - h.values.get(d[0], 0)) % m), -1)

    faces, fproj = [], {}
    zones = {}
    for i, f in enumerate(c.faces):
        for q in range(m):
            path, r = [], q
            for d in f:
                path.append(lift(d, r))
                r = (r + h.of_dart(d)) % m
            fproj[len(faces)] = i
            if ("face", i) in c.zones:
                zones[("face", len(faces))] = c.zones[("face", i)]
            faces.append(tuple(path))
    for v, base in vproj.items():
        if ("vertex", base) in c.zones:
            zones[("vertex", v)] = c.zones[("vertex", base)]
    for e, base in eproj.items():
        if ("edge", base) in c.zones:
            zones[("edge", e)] = c.zones[("edge", base)]
    cover = TwoComplex(SerreGraph(vertices, edges), tuple(faces), zones)
    return Covering(cover, vproj, eproj, fproj, sheet)


def iter_complex_isomorphisms(c1: TwoComplex, c2: TwoComplex, **kwargs):
    return iter_isomorphisms(c1.skeleton, c2.skeleton, faces1=c1.faces, faces2=c2.faces, **kwargs)


def complex_isomorphic(c1: TwoComplex, c2: TwoComplex, **kwargs) -> Optional[Isomorphism]:
    """Cellular isomorphism matching faces up to rotation and reversal."""
    return next(iter_complex_isomorphisms(c1, c2, **kwargs), None)


# -- abelianization --

def relation_matrix(p: PresentationData) -> list[list[int]]:
    return [[r.exponent_sum(g) for g in p.generators] for r in p.relators]


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d1 | d2 | ... (nonzero ones) by repeated gcd pivoting."""
    A = [list(row) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    dirty = True
            if not dirty:
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p]
                if not bad:
                    break
                i, _ = bad[0]
                A[t] = [x + y for x, y in zip(A[t], A[i])]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, pi, pj = min(cand)
            A[t], A[pi] = A[pi], A[t]
            for row in A:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def abelianization(p: PresentationData) -> tuple[int, list[int]]:
    """(free rank, torsion coefficients > 1) of the abelianized presentation."""
    diag = smith_diagonal(relation_matrix(p)) if p.relators else []
    betti = len(p.generators) - len(diag)
    return betti, [d for d in diag if d > 1]
