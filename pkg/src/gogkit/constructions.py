"""The A_{2,n,infty} pipeline.

For odd n = 2k + 1 the Artin group <a, b, c | ab = ba, (bc)^k b = (cb)^k c>
is rewritten with x = cb as <a, b, x | ab = ba, b x^k b = x^(k+1)>.  The
homomorphism b -> 1, a, x -> 0 onto Z/2 gives a double cover that splits as
a graph of graphs over a single edge: two roses <a, x>, <abar, xbar> and a
bigon with a loop at each vertex.  A further homomorphism onto Z/n (x-type
edges -> 1) yields a graph of graphs over the theta graph with n edges,
vertex graphs an n-cycle with a loop at each vertex, edge graphs bigons with
loops, and every edge map an embedding that is not combinatorial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from ._util import ValidationError, VerificationError
from .complexes import (
    FiniteQuotientHom,
    PresentationData,
    abelianization,
    complex_isomorphic,
    cover_complex,
    presentation_complex,
    validate_hom,
)
from .gog import (
    GraphOfGraphs,
    build_total_space,
    classify_cleanliness,
    cover_gog,
    normalize_gog,
    pi1_presentation,
    total_space,
)
from .graphs import GraphMorphism, SerreGraph, graph_euler_and_rank, graph_isomorphic, rose, theta_graph
from .stallings import (
    INFINITE,
    basis_loops,
    induced_words,
    is_pi1_injective,
    labeled_graph,
    membership,
    pi1_image,
    subgroup_coordinates,
    subgroup_graph,
    subgroup_index,
)
from .words import Word, alternating, commutator, substitute

DEFAULT_MAX_N = 15

A, B, C, X = (Word.gen(s) for s in "abcx")
ABAR, XBAR = Word.gen("abar"), Word.gen("xbar")


def check_n(n: Any, max_n: int = DEFAULT_MAX_N) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise ValidationError(f"n must be an odd integer >= 3, got {n!r}")
    if n > max_n:
        raise ValidationError(f"n = {n} exceeds the configured limit {max_n}")
    return n


def braid_relator(n: int) -> Word:
    return alternating("b", "c", n) * alternating("c", "b", n).inverse()


def artin_presentation(n: int, max_n: int = DEFAULT_MAX_N) -> PresentationData:
    check_n(n, max_n)
    return PresentationData(("a", "b", "c"), (commutator(A, B), braid_relator(n)))


def rewritten_presentation(n: int, max_n: int = DEFAULT_MAX_N) -> PresentationData:
    check_n(n, max_n)
    k = (n - 1) // 2
    rel = B * X ** k * B * X ** -(k + 1)
    braid = braid_relator(n)
    if substitute(rel, {"x": C * B}) != braid:
        raise VerificationError("x -> cb does not recover the braid relator")
    back = substitute(braid, {"c": X * B.inverse()})
    if not (back.is_conjugate_to(rel) or back.is_conjugate_to(rel.inverse())):
        raise VerificationError("c -> x b^-1 does not recover the rewritten relator")
    return PresentationData(("a", "b", "x"), (commutator(A, B), rel))


def cycle_with_loops(n: int) -> SerreGraph:
    edges = {f"c{i}": (f"u{i}", f"u{(i + 1) % n}") for i in range(n)}
    edges.update({f"l{i}": (f"u{i}", f"u{i}") for i in range(n)})
    return SerreGraph([f"u{i}" for i in range(n)], edges)


def bigon_with_loops() -> SerreGraph:
    return SerreGraph(["p", "q"], {"alpha": ("p", "q"), "beta": ("q", "p"), "lp": ("p", "p"), "lq": ("q", "q")})


def _power_path(edge: str, k: int) -> tuple:
    return ((edge, 1),) * k


def double_cover_hom(n: int) -> FiniteQuotientHom:
    return FiniteQuotientHom(2, {"a": 0, "b": 1, "x": 0})


def double_cover_gog(n: int, max_n: int = DEFAULT_MAX_N, verify: bool = True) -> GraphOfGraphs:
    """The double cover of the rewritten presentation complex as a graph of graphs."""
    check_n(n, max_n)
    k = (n - 1) // 2
    under = SerreGraph(["v1", "v2"], {"e": ("v1", "v2")})
    Y1, Y2, Ye = rose(["a", "x"]), rose(["abar", "xbar"]), bigon_with_loops()
    f1 = GraphMorphism(Ye, Y1, {"p": "o", "q": "o"}, {
        "alpha": _power_path("x", k + 1), "beta": _power_path("x", k),
        "lp": (("a", 1),), "lq": (("a", 1),),
    })
    f2 = GraphMorphism(Ye, Y2, {"p": "o", "q": "o"}, {
        "alpha": _power_path("xbar", k), "beta": _power_path("xbar", k + 1),
        "lp": (("abar", 1),), "lq": (("abar", 1),),
    })
    g = GraphOfGraphs(under, {"v1": Y1, "v2": Y2}, {"e": Ye}, {"e": (f1, f2)})
    if verify:
        base = cover_complex(presentation_complex(rewritten_presentation(n, max_n)), double_cover_hom(n))
        if complex_isomorphic(total_space(g), base.complex) is None:
            raise VerificationError("total space is not the double cover of the presentation complex")
    return g


def zn_hom(g: GraphOfGraphs, n: int) -> FiniteQuotientHom:
    """x, xbar -> 1, a, abar -> 0 on the total space of ``double_cover_gog(n)``.

    The horizontal edge over p is the tree edge and gets 0; the band faces
    then force -1 on the horizontal edge over q.
    """
    ts = build_total_space(g)
    values = {}
    for eid, (_, y) in ts.vertical.items():
        values[eid] = 1 if y in ("x", "xbar") else 0
    for eid, (_, u) in ts.horizontal.items():
        values[eid] = 0 if u == "p" else -1
    h = FiniteQuotientHom(n, values)
    if not validate_hom(ts.complex, h):
        raise VerificationError("Z/n homomorphism does not vanish on the faces")
    if any(edge_group_values(g, h, "e", side) != [0, 0, 0] for side in (0, 1)):
        raise VerificationError("Z/n homomorphism is not trivial on the edge group")
    return h


def edge_group_values(g: GraphOfGraphs, h: FiniteQuotientHom, e: str, side: int) -> list[int]:
    """Value of ``h`` on each basis loop of X_e pushed into one side."""
    f = g.maps[e][side]
    v = g.underlying.edges[e][side]
    out = []
    for _, loop in basis_loops(f.domain):
        path = [(f"{v}/{d[0]}", d[1]) for d in f.path_image(loop)]
        out.append(h.of_path(path))
    return out


def theta_family(n: int, max_n: int = DEFAULT_MAX_N) -> GraphOfGraphs:
    g = double_cover_gog(n, max_n)
    out, _ = cover_gog(g, zn_hom(g, n))
    out = normalize_gog(out)
    _check_theta(out, n)
    return out


def _check_theta(g: GraphOfGraphs, n: int) -> None:
    if graph_isomorphic(g.underlying, theta_graph(n)) is None:
        raise VerificationError("underlying graph is not the theta graph")
    cyc = cycle_with_loops(n)
    for v, Xv in g.vertex_graphs.items():
        if graph_isomorphic(Xv, cyc) is None:
            raise VerificationError(f"vertex graph {v} is not an {n}-cycle with loops")
    big = bigon_with_loops()
    for e, Xe in g.edge_graphs.items():
        if graph_isomorphic(Xe, big) is None:
            raise VerificationError(f"edge graph {e} is not a bigon with loops")
    rep = classify_cleanliness(g)
    if not rep.geometric or rep.vh:
        raise VerificationError("expected geometrically clean and not VH-clean")


# -- edge subgroups --

def side_subgroups(n: int) -> tuple[list[Word], list[Word]]:
    """Bases of the two images of the edge group, in a fixed normal form.

    For n = 3 these are (x^3, a, x^-1 a x) and (xbar^3, abar, xbar^-2 abar xbar^2),
    matched in order by the amalgamating isomorphism.
    """
    k = (n - 1) // 2
    one = [X ** n, A, X ** -k * A * X ** k]
    two = [XBAR ** n, ABAR, XBAR ** -(k + 1) * ABAR * XBAR ** (k + 1)]
    return one, two


# -- report --

@dataclass
class VerificationReport:
    n: int
    stages: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)

    def record(self, stage: str, key: str, value) -> None:
        self.stages.setdefault(stage, {})[key] = value

    def check(self, name: str, observed, expected) -> bool:
        ok = observed == expected
        self.assertions.append({"name": name, "observed": observed, "expected": expected, "pass": ok})
        return ok

    @property
    def passed(self) -> bool:
        return all(a["pass"] for a in self.assertions)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "verdict": "pass" if self.passed else "fail",
            "stages": self.stages,
            "assertions": self.assertions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_table(self) -> str:
        rows = [(("PASS" if a["pass"] else "FAIL"), a["name"], _fmt(a["observed"])) for a in self.assertions]
        w = max(len(r[1]) for r in rows) if rows else 0
        lines = [f"A(2,{self.n},inf) pipeline report", ""]
        lines += [f"{s}  {name.ljust(w)}  {obs}" for s, name, obs in rows]
        lines.append("")
        lines.append("stage data:")
        for stage, data in self.stages.items():
            for key, value in data.items():
                lines.append(f"  {stage}.{key} = {_fmt(value)}")
        lines.append("")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _index_value(i):
    return "infinite" if i == INFINITE else i


def _kernel_index(final_cover, ts_base, iso_to_yhat, yhat_cover) -> float | int:
    """Index in F(a, b, x) of the subgroup carried by the final 1-skeleton,
    reading each edge through the projections down to the presentation complex."""
    skel = final_cover.complex.skeleton
    edges, labels = {}, {}
    for eid, (a, b) in skel.edges.items():
        t_edge = final_cover.edge_proj[eid]
        y_edge, sign = iso_to_yhat.dart_map[(t_edge, 1)]
        gen = yhat_cover.edge_proj[y_edge]
        edges[eid] = (a, b) if sign > 0 else (b, a)
        labels[eid] = gen
    sg = labeled_graph(SerreGraph(skel.vertices, edges), labels, skel.vertices[0], ("a", "b", "x"))
    return subgroup_index(sg)


def verify_paper_report(n: int, max_n: int = DEFAULT_MAX_N, conservative: bool = False) -> VerificationReport:
    check_n(n, max_n)
    k = (n - 1) // 2
    rep = VerificationReport(n)

    # rewriting
    artin = artin_presentation(n, max_n)
    pres = rewritten_presentation(n, max_n)
    rep.record("presentation", "artin", [str(r) for r in artin.relators])
    rep.record("presentation", "rewritten", [str(r) for r in pres.relators])
    rep.check("rewritten relators", [str(r) for r in pres.relators], [str(commutator(A, B)), str(B * X ** k * B * X ** -(k + 1))])
    rep.check("x -> c b recovers braid relator", substitute(pres.relators[1], {"x": C * B}) == braid_relator(n), True)

    # double cover
    Y = presentation_complex(pres)
    h = double_cover_hom(n)
    rep.check("h valid on Y", validate_hom(Y, h), True)
    yhat = cover_complex(Y, h)
    rep.record("double_cover", "cells", list(yhat.complex.cell_counts()))
    rep.record("double_cover", "euler", yhat.complex.euler_characteristic)
    rep.check("double cover cells (V,E,F)", list(yhat.complex.cell_counts()), [2, 6, 4])
    rep.check("double cover euler characteristic", yhat.complex.euler_characteristic, 0)
    G1 = double_cover_gog(n, max_n, verify=False)
    ts1 = build_total_space(G1)
    iso = complex_isomorphic(ts1.complex, yhat.complex)
    rep.check("total space of amalgam = double cover", iso is not None, True)
    ranks = [graph_euler_and_rank(G1.vertex_graphs["v1"])[1], graph_euler_and_rank(G1.edge_graphs["e"])[1],
             graph_euler_and_rank(G1.vertex_graphs["v2"])[1]]
    rep.record("double_cover", "amalgam_ranks", ranks)
    rep.check("amalgam ranks F2 *_F3 F2", ranks, [2, 3, 2])
    rep.check("edge maps injective on pi_1", [is_pi1_injective(f) for f in G1.maps["e"]], [True, True])

    # edge subgroups
    fi, ft = G1.maps["e"]
    one, two = side_subgroups(n)
    H1, H2 = pi1_image(fi), pi1_image(ft)
    rep.record("edge_subgroups", "side1_generators", [str(w) for w in one])
    rep.record("edge_subgroups", "side2_generators", [str(w) for w in two])
    rep.check("side-1 image = <x^n, a, x^-k a x^k>", H1.same_as(subgroup_graph(one, ("a", "x"))), True)
    rep.check("side-2 image = <xbar^n, abar, xbar^k abar xbar^-k>",
              H2.same_as(subgroup_graph([XBAR ** n, ABAR, XBAR ** k * ABAR * XBAR ** -k], ("abar", "xbar"))), True)
    coords = []
    for w1, w2 in zip(induced_words(fi, "p"), induced_words(ft, "p")):
        c1 = subgroup_coordinates(H1, w1, one)
        c2 = subgroup_coordinates(H2, w2, two)
        coords.append(c1 is not None and c1 == c2)
    rep.check("amalgamating map sends basis to basis in order", coords, [True, True, True])
    rep.check("x^n, a, x^(k+1) a x^-(k+1) in side-1 image; x not",
              [membership(H1, w) for w in (X ** n, A, X ** (k + 1) * A * X ** -(k + 1), X)], [True, True, True, False])
    rep.record("edge_subgroups", "side1_index", _index_value(subgroup_index(H1)))

    # Z/n stage
    kn = zn_hom(G1, n)
    rep.check("k valid on total space", validate_hom(ts1.complex, kn), True)
    kvals = [edge_group_values(G1, kn, "e", s) for s in (0, 1)]
    rep.check("k vanishes on the edge group (both sides)", kvals, [[0, 0, 0], [0, 0, 0]])
    rep.check("k(x) = 1", kn.values["v1/x"], 1)
    raw, proj = cover_gog(G1, kn)
    Xt = normalize_gog(raw)
    rep.check("normalization leaves the cover unchanged", Xt == raw, True)
    under = Xt.underlying
    rep.record("theta", "underlying", {"vertices": len(under.vertices), "edges": len(under.edges)})
    rep.check("underlying graph is theta_n", graph_isomorphic(under, theta_graph(n)) is not None, True)
    vranks = [graph_euler_and_rank(g)[1] for g in Xt.vertex_graphs.values()]
    eranks = [graph_euler_and_rank(g)[1] for g in Xt.edge_graphs.values()]
    rep.record("theta", "vertex_ranks", vranks)
    rep.record("theta", "edge_ranks", eranks)
    rep.check("vertex ranks n+1", vranks, [n + 1, n + 1])
    rep.check("edge ranks 3", eranks, [3] * n)
    rep.check("vertex graphs are n-cycles with loops",
              all(graph_isomorphic(g, cycle_with_loops(n)) is not None for g in Xt.vertex_graphs.values()), True)
    coherent = complex_isomorphic(total_space(Xt), proj.covering.complex) is not None
    rep.check("total space of cover = cover of total space", coherent, True)
    index = _kernel_index(proj.covering, ts1, iso, yhat) if iso is not None else None
    index = _index_value(index)
    rep.record("theta", "index", index)
    rep.record("theta", "degrees", [h.modulus, kn.modulus])
    rep.check("index in A(2,n,inf) = 2n", index, 2 * n)
    rep.check("degree bookkeeping 2 * n", h.modulus * kn.modulus, 2 * n)

    # cleanliness
    clean = classify_cleanliness(Xt, conservative=conservative)
    rep.record("cleanliness", "report", {"vh": clean.vh, "geometric": clean.geometric, "algebraic": clean.algebraic.value})
    rep.check("geometrically clean", clean.geometric, True)
    rep.check("not VH-clean", clean.vh, False)
    rep.check("algebraically clean", clean.algebraic.value, "yes")
    amalgam = classify_cleanliness(G1, conservative=conservative)
    rep.record("cleanliness", "amalgam", {"vh": amalgam.vh, "geometric": amalgam.geometric, "algebraic": amalgam.algebraic.value})

    # presentation of G
    P = pi1_presentation(Xt)
    chi = 1 - len(P.generators) + len(P.relators)
    rep.record("fundamental_group", "generators", len(P.generators))
    rep.record("fundamental_group", "relators", len(P.relators))
    rep.check("presentation euler characteristic 0", chi, 0)
    betti, torsion = abelianization(P)
    rep.record("fundamental_group", "abelianization", {"free_rank": betti, "torsion": torsion})
    return rep
