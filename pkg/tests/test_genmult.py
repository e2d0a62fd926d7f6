import random

import pytest
from hypothesis import given, settings

from opetopic.foundations import Permutation
from opetopic.genmult import (
    CompositionError,
    FiniteGenMulticat,
    GenArrow,
    GenMorphism,
    check_gen_axioms,
    check_gen_morphism,
    compose_gen_morphisms,
    enumerate_gen_morphisms,
    gen_compose,
    splice,
    track,
)
from opetopic.samples import free_gen_multicat, random_reordering, reorder_sources, terminal_gen

from strategies import seeds, small_gen_multicat


def binary_tree_multicat():
    """A binary generator ``m`` and a constant ``u`` it can absorb."""
    return free_gen_multicat(["a", "b"], {"m": (("a", "a"), "b"), "u": ((), "a")})


def test_splice_and_track():
    assert splice("abc", 2, "xy") == ("a", "x", "y", "c")
    j = terminal_gen()
    c = gen_compose(j, "1", 1, "1")
    assert c.result == "1" and c.chi.is_identity()
    assert track(["f1"], c, ["g1"]) == ("g1",)


def test_terminal_gen_is_a_generalised_multicategory():
    assert check_gen_axioms(terminal_gen()).ok


def test_position_and_typing_errors():
    m = binary_tree_multicat()
    with pytest.raises(CompositionError):
        gen_compose(m, "m(_,_)", 3, "u")
    with pytest.raises(CompositionError):
        gen_compose(m, "m(_,_)", 1, "m(_,_)")
    assert gen_compose(m, "m(_,_)", 2, "u").result == "m(_,u)"


def test_free_multicategory_sources_follow_orderings():
    m = free_gen_multicat(["a", "b", "c"], {"f": (("a", "b"), "c")}, orderings={"f(_,_)": Permutation([2, 1])})
    assert m.source("f(_,_)") == ("b", "a")
    assert check_gen_axioms(m).ok


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_random_multicategories_satisfy_the_axioms(seed):
    m = small_gen_multicat(seed)
    report = check_gen_axioms(m)
    assert report.ok, report.encode()


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_corrupted_amalgamation_is_detected(seed):
    m = small_gen_multicat(seed, max_arity=3)
    candidates = [k for k, (r, chi) in m.compositions.items() if chi.size >= 2]
    if not candidates:
        return
    key = random.Random(seed).choice(candidates)
    comps = dict(m.compositions)
    r, chi = comps[key]
    swap = Permutation.transposition(chi.size, 1)
    comps[key] = (r, chi * swap)
    broken = FiniteGenMulticat(m.objects(), [m.arrow(f) for f in m.arrows()], m.identities, comps)
    if broken.source(r) == (chi * swap).apply(splice(m.source(key[0]), key[1], m.source(key[2]))):
        # the swap exchanged equal objects; typing cannot see it, coherence must
        assert not check_gen_axioms(broken).ok
    else:
        assert "composition-source" in check_gen_axioms(broken).laws()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_encoding_round_trip(seed):
    m = small_gen_multicat(seed)
    again = FiniteGenMulticat.decode(m.encode())
    assert again.encode() == m.encode()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_reordering_gives_a_morphism(seed):
    rng = random.Random(seed)
    m = small_gen_multicat(seed)
    n, F = reorder_sources(m, random_reordering(m, rng))
    assert check_gen_axioms(n).ok
    assert check_gen_morphism(F, m, n).ok


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_morphism_composition_and_identity(seed):
    rng = random.Random(seed)
    m = small_gen_multicat(seed)
    n, F = reorder_sources(m, random_reordering(m, rng))
    p, G = reorder_sources(n, random_reordering(n, rng))
    H = compose_gen_morphisms(F, G)
    assert check_gen_morphism(H, m, p).ok
    I = GenMorphism.identity(m)
    assert compose_gen_morphisms(I, F).same_data(F)
    assert compose_gen_morphisms(F, GenMorphism.identity(n)).same_data(F)


def test_bad_transition_map_is_detected():
    m = free_gen_multicat(["a", "b", "c"], {"f": (("a", "b"), "c")})
    theta = {f: Permutation.identity(m.arity(f)) for f in m.arrows()}
    theta["f(_,_)"] = Permutation([2, 1])
    F = GenMorphism(m, m, {x: x for x in m.objects()}, {f: f for f in m.arrows()}, theta)
    assert "arrow-typing" in check_gen_morphism(F, m, m).laws()


def test_enumerate_morphisms():
    j = terminal_gen()
    assert len(enumerate_gen_morphisms(j, j)) == 1
    m = free_gen_multicat(["a", "b"], {"f": (("a", "a"), "b")})
    found = enumerate_gen_morphisms(m, m)
    # identity, and the swap of the two inputs of f
    assert len(found) == 2
    assert all(check_gen_morphism(F, m, m).ok for F in found)
