import random

import pytest
from hypothesis import given, settings, strategies as st

from gogkit import (
    GraphMorphism,
    SerreGraph,
    ValidationError,
    graph_euler_and_rank,
    graph_isomorphic,
    is_combinatorial_embedding,
    is_topological_embedding,
    rose,
    smooth_bivalent,
    subdivide_domain,
    theta_family,
    theta_graph,
)
from gogkit.constructions import bigon_with_loops, cycle_with_loops
from gogkit.graphs import identity_morphism, inclusion, is_reduced, relabel_path, reverse_path

from helpers import random_connected_graph, random_morphism, relabel_graph


def path_graph(n):
    return SerreGraph([f"p{i}" for i in range(n + 1)], {f"s{i}": (f"p{i}", f"p{i + 1}") for i in range(n)})


def test_serre_graph_basics():
    g = SerreGraph(["v"], {"l": ("v", "v")})
    assert g.darts() == [("l", 1), ("l", -1)]
    assert g.valence("v") == 2
    assert g.origin(("l", -1)) == g.terminus(("l", 1)) == "v"
    with pytest.raises(ValidationError):
        SerreGraph(["v"], {"e": ("v", "w")})
    with pytest.raises(ValidationError):
        SerreGraph(["v"], [("e", "v", "v"), ("e", "v", "v")])


def test_ids_sort_naturally():
    g = SerreGraph(["v"], {f"e{i}": ("v", "v") for i in (10, 2, 1)})
    assert list(g.edges) == ["e1", "e2", "e10"]


def test_path_helpers():
    p = (("a", 1), ("b", -1))
    assert reverse_path(p) == (("b", 1), ("a", -1))
    assert is_reduced(p)
    assert not is_reduced((("a", 1), ("a", -1)))


def test_morphism_validation():
    r2, r1 = rose(["a", "b"]), rose(["a"])
    with pytest.raises(ValidationError):
        GraphMorphism(r2, r1, {"o": "o"}, {"a": (("a", 1),)})
    with pytest.raises(ValidationError):
        GraphMorphism(r2, r1, {"o": "o"}, {"a": (("a", 1),), "b": ()})
    tri = cycle_with_loops(3)
    with pytest.raises(ValidationError):
        # c0 runs u0 -> u1, so c0 c0 is not composable
        GraphMorphism(r1, tri, {"o": "u0"}, {"a": (("c0", 1), ("c0", 1))})


def test_dart_images_reverse():
    f = GraphMorphism(rose(["a"]), rose(["x", "y"]), {"o": "o"}, {"a": (("x", 1), ("y", -1))})
    assert f.dart_image(("a", -1)) == (("y", 1), ("x", -1))


# -- subdivide_domain --

def test_subdivide_identity_unchanged():
    f = identity_morphism(rose(["a", "b"]))
    g, corr = subdivide_domain(f)
    assert g == f
    assert set(corr.vertex_origin) == {"o"}


def test_subdivide_length_two_image():
    f = GraphMorphism(rose(["a"]), rose(["x"]), {"o": "o"}, {"a": (("x", 1), ("x", 1))})
    g, corr = subdivide_domain(f)
    assert len(g.domain.vertices) == 2 and len(g.domain.edges) == 2
    assert g.combinatorial
    assert corr.vertex_origin["a#1"] == ("edge", "a", 1)
    assert {corr.edge_origin[e] for e in g.domain.edges} == {("a", 0), ("a", 1)}


def test_subdivide_pipeline_arc():
    x = theta_family(3)
    fi, _ = x.maps["e.0"]
    long_arcs = [eps for eps, p in fi.emap.items() if len(p) == 2]
    assert long_arcs
    g, corr = subdivide_domain(fi)
    eps = long_arcs[0]
    assert sum(1 for e in g.domain.edges if corr.edge_origin[e][0] == eps) == 2
    assert len(g.domain.vertices) == len(fi.domain.vertices) + len(long_arcs)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_subdivision_then_smoothing_recovers_map(seed):
    rng = random.Random(seed)
    dom = random_connected_graph(rng, rng.randint(1, 4), rng.randint(0, 3), "d")
    cod = random_connected_graph(rng, rng.randint(1, 4), rng.randint(1, 3), "c")
    f = random_morphism(rng, dom, cod)
    g, corr = subdivide_domain(f)
    assert g.combinatorial
    assert graph_euler_and_rank(g.domain) == graph_euler_and_rank(f.domain)
    smoothed, paths = smooth_bivalent(g.domain, protected=f.domain.vertices)
    assert set(smoothed.vertices) == set(f.domain.vertices)
    for e, p in paths.items():
        origins = {corr.edge_origin[d[0]][0] for d in p}
        assert len(origins) == 1
        old = origins.pop()
        image = g.path_image(p)
        assert image == f.dart_image((old, 1)) or image == f.dart_image((old, -1))


# -- embeddings --

def test_subgraph_inclusion_is_combinatorial_embedding():
    tri = SerreGraph(["u0", "u1", "u2"], {f"c{i}": (f"u{i}", f"u{(i + 1) % 3}") for i in range(3)})
    f = inclusion(tri, cycle_with_loops(3))
    assert is_combinatorial_embedding(f)
    assert is_topological_embedding(f)


def test_double_loop_is_not_an_embedding():
    f = GraphMorphism(rose(["a", "b"]), rose(["a"]), {"o": "o"}, {"a": (("a", 1),), "b": (("a", 1),)})
    assert not is_combinatorial_embedding(f)
    assert not is_topological_embedding(f)


def test_identity_is_topological_embedding():
    assert is_topological_embedding(identity_morphism(theta_graph(3)))


def test_wrapping_loop_is_not_embedding():
    f = GraphMorphism(rose(["a"]), rose(["x"]), {"o": "o"}, {"a": (("x", 1), ("x", 1))})
    assert not is_topological_embedding(f)


def test_pipeline_edge_maps():
    x = theta_family(3)
    ends = [f for pair in x.maps.values() for f in pair]
    assert len(ends) == 6
    assert all(is_topological_embedding(f) for f in ends)
    assert not all(is_combinatorial_embedding(f) for f in ends)


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_combinatorial_embedding_implies_topological(seed):
    rng = random.Random(seed)
    dom = random_connected_graph(rng, rng.randint(1, 4), rng.randint(0, 2), "d")
    cod = random_connected_graph(rng, rng.randint(1, 5), rng.randint(1, 4), "c")
    f = random_morphism(rng, dom, cod, max_len=rng.choice((0, 2)))
    if is_combinatorial_embedding(f):
        assert is_topological_embedding(f)


# -- euler characteristic and rank --

@pytest.mark.parametrize("g, expected", [
    (cycle_with_loops(3), (-3, 4)),
    (bigon_with_loops(), (-2, 3)),
    (SerreGraph(["v"], {}), (1, 0)),
])
def test_euler_and_rank(g, expected):
    assert graph_euler_and_rank(g) == expected


# -- isomorphism --

def test_theta_relabeled():
    g = theta_graph(3)
    h = SerreGraph(["A", "B"], {"z": ("B", "A"), "y": ("A", "B"), "q": ("A", "B")})
    iso = graph_isomorphic(g, h)
    assert iso is not None
    assert set(iso.vertex_map.values()) == {"A", "B"}


def test_theta_vs_single_edge():
    assert graph_isomorphic(theta_graph(3), SerreGraph(["a", "b"], {"e": ("a", "b")})) is None


def test_cover_underlying_is_theta():
    assert graph_isomorphic(theta_family(3).underlying, theta_graph(3)) is not None


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_isomorphism_reflexive_and_symmetric(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, rng.randint(1, 6), rng.randint(0, 12 - 5), "e")
    h, vs, es, flips = relabel_graph(rng, g)
    assert graph_isomorphic(g, g) is not None
    iso = graph_isomorphic(g, h)
    back = graph_isomorphic(h, g)
    assert iso is not None and back is not None
    for d, d2 in iso.dart_map.items():
        assert h.origin(d2) == iso.vertex_map[g.origin(d)]
        assert iso.dart_map[(d[0], -d[1])] == (d2[0], -d2[1])


def test_isomorphism_deterministic():
    g = cycle_with_loops(4)
    assert graph_isomorphic(g, g) == graph_isomorphic(g, g)


# -- smoothing --

def test_smooth_path_with_protected_ends():
    g, corr = smooth_bivalent(path_graph(3), protected={"p0", "p3"})
    assert len(g.edges) == 1 and set(g.vertices) == {"p0", "p3"}
    (e, p), = corr.items()
    assert p == (("s0", 1), ("s1", 1), ("s2", 1))


def test_smooth_triangle_keeps_a_loop():
    tri = SerreGraph(["a", "b", "c"], {"x": ("a", "b"), "y": ("b", "c"), "z": ("c", "a")})
    g, _ = smooth_bivalent(tri)
    assert len(g.vertices) >= 1
    assert graph_euler_and_rank(g)[0] == graph_euler_and_rank(tri)[0]
    assert len(g.vertices) == 1 and len(g.edges) == 1


def test_smooth_restores_triangle_with_loops():
    base = cycle_with_loops(3)
    # subdivide every cycle edge once
    edges, protected = {}, set(base.vertices)
    verts = list(base.vertices)
    for e, (a, b) in base.edges.items():
        if a == b:
            edges[e] = (a, b)
            continue
        mid = f"{e}_mid"
        verts.append(mid)
        edges[f"{e}_0"] = (a, mid)
        edges[f"{e}_1"] = (mid, b)
    fine = SerreGraph(verts, edges)
    smoothed, _ = smooth_bivalent(fine, protected)
    assert graph_isomorphic(smoothed, base) is not None


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_smoothing_preserves_euler_and_relabels_paths(seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, rng.randint(2, 7), rng.randint(0, 3))
    protected = {v for v in g.vertices if rng.random() < 0.3}
    s, corr = smooth_bivalent(g, protected)
    assert graph_euler_and_rank(s) == graph_euler_and_rank(g)
    assert protected <= set(s.vertices)
    for e, p in corr.items():
        assert relabel_path(p, corr) == ((e, 1),)
        assert relabel_path(reverse_path(p), corr) == ((e, -1),)
    again, _ = smooth_bivalent(s, protected)
    assert again == s
