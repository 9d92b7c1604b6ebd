import random

import pytest
from hypothesis import given, settings, strategies as st

from gogkit import (
    INFINITE,
    GraphMorphism,
    NotAFreeBasis,
    Word,
    double_cover_gog,
    is_pi1_injective,
    membership,
    pi1_image,
    rose,
    subgroup_coordinates,
    subgroup_graph,
    subgroup_index,
    substitute,
)
from gogkit.graphs import identity_morphism, inclusion
from gogkit.stallings import (
    basis_loops,
    canonical_form,
    codomain_basis,
    read_nontree,
    relabel_canonical,
    spanning_tree,
    subgroup_basis,
    tree_paths,
)

from helpers import NaiveFold, brute_products, random_connected_graph, random_letters, random_morphism
from helpers import subgroup_corpus as corpus

W = Word.parse


def words(*texts):
    return [W(t) for t in texts]


def test_whole_group_is_rose():
    sg = subgroup_graph(words("a", "b"), ("a", "b"))
    assert len(sg.graph.vertices) == 1 and len(sg.graph.edges) == 2
    assert subgroup_index(sg) == 1


def test_edge_subgroup_shape():
    sg = subgroup_graph(words("x^3", "a", "x^-1 a x"), ("a", "x"))
    g = sg.graph
    assert (len(g.vertices), len(g.edges), sg.rank) == (3, 5, 3)
    a_loops = [e for e, (u, v) in g.edges.items() if sg.labels[e] == "a"]
    assert len(a_loops) == 2 and all(g.edges[e][0] == g.edges[e][1] for e in a_loops)
    x_edges = [e for e in g.edges if sg.labels[e] == "x"]
    assert len(x_edges) == 3
    # the x-edges form a 3-cycle through the basepoint
    v, seen = sg.basepoint, []
    for _ in range(3):
        d = sg.step(v, ("x", 1))
        seen.append(v)
        v = g.terminus(d)
    assert v == sg.basepoint and len(set(seen)) == 3
    # one vertex lacks an a-edge, so the index is infinite
    assert subgroup_index(sg) == INFINITE


def test_even_kernel_rank():
    sg = subgroup_graph(words("b^2", "a", "b a b^-1"), ("a", "b"))
    assert sg.rank == 3
    assert subgroup_index(sg) == 2


def test_mod3_kernel_index():
    sg = subgroup_graph(words("x^3", "a", "x a x^-1", "x^2 a x^-2"), ("a", "x"))
    assert subgroup_index(sg) == 3
    assert sg.rank == 1 + 3 * (2 - 1)


def test_membership_examples():
    sg = subgroup_graph(words("a"), ("a", "x"))
    assert membership(sg, W("a"))
    assert subgroup_coordinates(sg, W("a")) == W("b1")
    edge = subgroup_graph(words("x^3", "a", "x^-1 a x"), ("a", "x"))
    assert not membership(edge, W("x"))
    assert subgroup_coordinates(edge, W("x")) is None
    # brute force agrees: x is not a product of at most 3 generators
    gens = [w.letters for w in words("x^3", "a", "x^-1 a x")]
    assert W("x").letters not in brute_products(gens, 3)


def test_coordinates_in_given_basis():
    basis = words("abar", "xbar^-2 abar xbar^2", "xbar^-3")
    sg = subgroup_graph(basis, ("abar", "xbar"))
    target = W("xbar abar xbar^-1")
    # xbar abar xbar^-1 = xbar^3 (xbar^-2 abar xbar^2) xbar^-3
    assert basis[2].inverse() * basis[1] * basis[2] == target
    assert subgroup_coordinates(sg, target, basis) == W("b3^-1 b2 b3")


def test_coordinates_reject_non_basis():
    sg = subgroup_graph(words("a", "x"), ("a", "x"))
    with pytest.raises(NotAFreeBasis):
        subgroup_coordinates(sg, W("a"), words("a", "x", "a x"))
    with pytest.raises(NotAFreeBasis):
        subgroup_coordinates(sg, W("a"), words("a"))


def test_default_coordinates_use_tree_basis():
    sg = subgroup_graph(words("x^3", "a", "x^-1 a x"), ("a", "x"))
    basis = subgroup_basis(sg)
    assert len(basis) == 3
    for i, b in enumerate(basis):
        assert subgroup_coordinates(sg, b) == Word.gen(f"b{i + 1}")


def test_relabel_canonical_is_stable():
    sg = subgroup_graph(words("x^3", "a"), ("a", "x"))
    assert canonical_form(relabel_canonical(sg)) == canonical_form(sg)


def test_pi1_image_of_inclusion():
    f = inclusion(rose(["a"]), rose(["a", "b"]))
    assert pi1_image(f).same_as(subgroup_graph(words("a"), ("a", "b")))
    assert is_pi1_injective(f)
    assert is_pi1_injective(identity_morphism(rose(["a", "b"])))


def test_collapse_not_injective():
    f = GraphMorphism(rose(["a", "b"]), rose(["a"]), {"o": "o"}, {"a": (("a", 1),), "b": (("a", 1),)})
    assert not is_pi1_injective(f)


@pytest.mark.parametrize("n", [3, 5])
def test_double_cover_edge_images(n):
    k = (n - 1) // 2
    g = double_cover_gog(n)
    fi, ft = g.maps["e"]
    side1 = subgroup_graph([W(f"x^{n}"), W("a"), W(f"x^-{k} a x^{k}")], ("a", "x"))
    side2 = subgroup_graph([W(f"xbar^{n}"), W("abar"), W(f"xbar^{k} abar xbar^-{k}")], ("abar", "xbar"))
    assert pi1_image(fi).same_as(side1)
    assert pi1_image(ft).same_as(side2)
    assert is_pi1_injective(fi) and is_pi1_injective(ft)


# -- properties over a seeded corpus --

@pytest.mark.parametrize("basis, gens", corpus(11, 60))
def test_fold_confluence_and_naive_oracle(basis, gens):
    ws = [Word(g) for g in gens]
    ref = subgroup_graph(ws, basis)
    naive = NaiveFold(gens)
    assert naive.core() == (len(ref.graph.vertices), len(ref.graph.edges))
    for s in range(3):
        assert subgroup_graph(ws, basis, rng=random.Random(s)).same_as(ref)
    assert ref.is_folded()


@pytest.mark.parametrize("basis, gens", corpus(12, 40))
def test_membership_vs_brute_force(basis, gens):
    sg = subgroup_graph([Word(g) for g in gens], basis)
    products = brute_products(gens, 4 if len(gens) <= 3 else 3)
    for p in list(products)[:200]:
        assert membership(sg, Word(p))
    rng = random.Random(len(gens))
    naive = NaiveFold(gens)
    for _ in range(30):
        w = random_letters(rng, basis, 8)
        assert membership(sg, Word(w)) == naive.accepts(w)
        if w in products:
            assert membership(sg, Word(w))


@pytest.mark.parametrize("basis, gens", corpus(13, 40))
def test_coordinates_reexpand(basis, gens):
    sg = subgroup_graph([Word(g) for g in gens], basis)
    basis_words = subgroup_basis(sg)
    sub = {f"b{i + 1}": w for i, w in enumerate(basis_words)}
    for p in sorted(brute_products(gens, 3))[:40]:
        c = subgroup_coordinates(sg, Word(p))
        assert c is not None
        assert substitute(c, sub) == Word(p)


def test_index_rank_formula_on_finite_index():
    found = 0
    for basis, gens in corpus(14, 300):
        sg = subgroup_graph([Word(g) for g in gens], basis)
        d = subgroup_index(sg)
        if d != INFINITE:
            found += 1
            assert sg.rank == 1 + d * (len(basis) - 1)
    assert found > 0


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_pi1_image_of_composition(seed):
    rng = random.Random(seed)
    a = random_connected_graph(rng, rng.randint(1, 3), rng.randint(1, 2), "a")
    b = random_connected_graph(rng, rng.randint(1, 3), rng.randint(1, 3), "b")
    c = random_connected_graph(rng, rng.randint(1, 3), rng.randint(1, 3), "c")
    f = random_morphism(rng, a, b)
    g = random_morphism(rng, b, c)
    inner = pi1_image(f)
    # the outer map on pi_1(b), read through the trees of b and c
    tree_b, tree_c = spanning_tree(b), spanning_tree(c)
    phi = {e: read_nontree(g.path_image(loop), tree_c) for e, loop in basis_loops(b)}
    # the inner image sits at f(base); move it to the root of b's tree
    to_start = tree_paths(b, tree_b, b.vertices[0])[f.vmap[a.vertices[0]]]
    conj = read_nontree(g.path_image(to_start), tree_c) if to_start else Word()
    pushed = [conj.inverse() * substitute(w, phi) * conj for w in subgroup_basis(inner)]
    expected = subgroup_graph(pushed, codomain_basis(c))
    assert pi1_image(f.compose(g)).same_as(expected)
