import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opetopic.foundations import Identity, Permutation
from opetopic.genmult import check_gen_axioms, check_gen_morphism
from opetopic.samples import free_gen_multicat, terminal_gen
from opetopic.slice import (
    CombedTree,
    GenSlice,
    Leaf,
    Node,
    SymSlice,
    TreeError,
    comb_substitute,
    format_tree,
    leaf_count,
    leaf_labels,
    node_count,
    nodes,
    parse_tree,
    phi_plus,
    slice_gen,
    slice_sym,
)
from opetopic.symmult import SymMorphism, check_sym_axioms, check_sym_equivalence, check_sym_morphism, terminal_sym
from opetopic.xi import XiArrow, XiMulticat, is_freely_symmetric, is_tidy, xi

from strategies import seeds, small_gen_multicat

SLICE_KW = dict(max_objects=3, max_arrows=4, max_arity=2, max_generators=2)


def identity_phi(m):
    q = xi(m)
    return SymMorphism.identity(q)


# trees ----------------------------------------------------------------------


def sample_tree():
    return Node("f", "x", (Node("g", "y", (Leaf("a"), Leaf("b"))), Leaf("c"), Node("h", "z", ())))


def test_counts_and_orders():
    t = sample_tree()
    assert node_count(t) == 3 and leaf_count(t) == 3
    assert [n.label for _, n in nodes(t)] == ["f", "g", "h"]
    assert leaf_labels(t) == ["a", "b", "c"]


def test_text_grammar_round_trip():
    t = sample_tree()
    text = format_tree(t)
    assert text == "node(f, [node(g, [a, b]) @y, c, node(h, []) @z]) @x"
    assert parse_tree(text) == t
    odd = Node("node", "with space", (Leaf("1_*"),))
    assert parse_tree(format_tree(odd)) == odd


@pytest.mark.parametrize("text", ["node(f, [a) @x", "node(f [a]) @x", "a b", ""])
def test_malformed_text_is_rejected(text):
    with pytest.raises(TreeError):
        parse_tree(text)


@st.composite
def trees(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return Leaf(draw(st.sampled_from("abc")))
    kids = draw(st.lists(trees(depth=depth - 1), max_size=3))
    return Node(draw(st.sampled_from("fgh")), draw(st.sampled_from("xyz")), tuple(kids))


@given(trees())
def test_text_grammar_round_trips_random_trees(t):
    assert parse_tree(format_tree(t)) == t


def test_comb_substitution_keeps_leaf_tracking():
    outer = CombedTree(Node("f", "x", (Leaf("a"), Leaf("b"))), Permutation([2, 1]))
    inner = CombedTree(Node("g", "x", (Leaf("p"), Node("h", "q", (Leaf("r"),)))), Permutation([2, 1]))
    out = comb_substitute(outer, (), inner)
    # input 1 of f goes to inner leaf 2, input 2 to inner leaf 1
    assert out.tree == Node("g", "x", (Leaf("b"), Node("h", "q", (Leaf("a"),))))
    assert out.twist == Permutation([1, 2])


def test_comb_into_a_bare_edge_glues():
    inner = CombedTree(Node("g", "x", (Leaf("p"),)), Permutation.identity(1))
    out = comb_substitute(CombedTree(Leaf("e"), Permutation.identity(1)), (), inner)
    assert out == inner


def test_comb_needs_matching_leaf_count():
    outer = CombedTree(Node("f", "x", (Leaf("a"),)), Permutation.identity(1))
    inner = CombedTree(Node("g", "x", (Leaf("p"), Leaf("q"))), Permutation.identity(2))
    with pytest.raises(TreeError):
        comb_substitute(outer, (), inner)
    with pytest.raises(TreeError):
        comb_substitute(outer, (5,), CombedTree(Node("g", "x", (Leaf("p"),)), Permutation.identity(1)))


# slices -----------------------------------------------------------------------


def test_slice_of_terminal_sym_has_one_arrow_per_shape():
    q = slice_sym(terminal_sym())
    counts = [len(q.arrows(b)) for b in range(4)]
    # bare edge, then chains with every node ordering
    assert counts == [1, 2, 4, 10]
    assert check_sym_axioms(q, 3).ok
    assert is_freely_symmetric(q, 3)


def test_slice_of_terminal_gen():
    m = slice_gen(terminal_gen())
    assert [len(m.arrows(b)) for b in range(4)] == [1, 2, 3, 4]
    assert check_gen_axioms(m, 3).ok


def test_slices_need_a_bound():
    with pytest.raises(ValueError):
        SymSlice(terminal_sym()).arrows()
    with pytest.raises(ValueError):
        GenSlice(terminal_gen()).arrows()


def test_gen_slice_leaf_order_comes_from_composition():
    m = free_gen_multicat(["a", "b"], {"f": (("a", "a"), "b"), "u": ((), "a")})
    plus = GenSlice(m)
    t = Node("f(_,_)", "b", (Leaf("a"), Leaf("a")))
    assert plus.source(t) == ("f(_,_)",) and plus.target(t) == "f(_,_)"
    assert plus.rho(t).is_identity()


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_slices_of_random_multicategories(seed):
    m = small_gen_multicat(seed, **SLICE_KW)
    q = xi(m)
    assert check_sym_axioms(SymSlice(q), 3).ok
    assert check_gen_axioms(GenSlice(m), 3).ok
    assert is_tidy(SymSlice(q), 3)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_phi_plus_of_identity_is_an_equivalence(seed):
    m = small_gen_multicat(seed, **SLICE_KW)
    F = phi_plus(identity_phi(m))
    assert check_sym_morphism(F, 3).ok
    assert check_sym_equivalence(F, 3).ok


def test_phi_plus_requires_a_symmetrised_codomain():
    with pytest.raises(TypeError):
        phi_plus(SymMorphism.identity(terminal_sym()))


def test_phi_plus_on_a_bare_edge():
    m = small_gen_multicat(3, **SLICE_KW)
    F = phi_plus(identity_phi(m))
    edge = next(c for c in F.domain.arrows(0) if isinstance(c.tree, Leaf))
    image = F.on_arrow(edge)
    assert isinstance(image.base, Leaf) and image.sigma.size == 0
