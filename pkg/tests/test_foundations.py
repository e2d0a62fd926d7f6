import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opetopic.foundations import (
    DiscreteCategory,
    FiniteCategory,
    Identity,
    Permutation,
    Profile,
    ValidationReport,
    all_perms,
    block_perm,
    canonical,
    check_category,
    compose_perm,
    equivalent_to_discrete,
    insert_perm,
    juxtapose_perms,
)

from strategies import perm_pairs, perm_triples, permutations


# permutations -------------------------------------------------------------


def test_permutation_rejects_non_bijections():
    with pytest.raises(ValueError):
        Permutation([1, 1])
    with pytest.raises(ValueError):
        Permutation([0, 2], zero_based=True)


def test_one_based_call_and_zero_based_serialization():
    s = Permutation([2, 3, 1])
    assert [s(1), s(2), s(3)] == [2, 3, 1]
    assert s.encode() == [1, 2, 0]
    assert Permutation(s.encode(), zero_based=True) == s


def test_apply_reads_positions():
    s = Permutation([3, 1, 2])
    assert s.apply("abc") == ("c", "a", "b")


def test_all_perms_sizes():
    assert [len(all_perms(k)) for k in range(6)] == [1, 1, 2, 6, 24, 120]
    assert all_perms(3)[0].is_identity()


@given(perm_triples())
def test_composition_is_associative(triple):
    a, b, c = triple
    assert compose_perm(compose_perm(a, b), c) == compose_perm(a, compose_perm(b, c))


@given(st.integers(0, 6).flatmap(permutations))
def test_identity_and_inverse(s):
    e = Permutation.identity(s.size)
    assert compose_perm(s, e) == s == compose_perm(e, s)
    assert compose_perm(s, s.inverse()) == e == compose_perm(s.inverse(), s)


@given(perm_pairs())
def test_apply_is_a_right_action(pair):
    s, t = pair
    xs = list(range(100, 100 + s.size))
    assert compose_perm(s, t).apply(xs) == t.apply(s.apply(xs))


@given(perm_pairs(max_size=4), st.data())
def test_block_perm_twisted_homomorphism(pair, data):
    s, t = pair
    sizes = data.draw(st.lists(st.integers(0, 3), min_size=s.size, max_size=s.size))
    lhs = block_perm(compose_perm(s, t), sizes)
    rhs = compose_perm(block_perm(s, sizes), block_perm(t, s.apply(sizes)))
    assert lhs == rhs


@given(st.integers(0, 4).flatmap(permutations), st.data())
def test_block_perm_moves_blocks(s, data):
    sizes = data.draw(st.lists(st.integers(0, 3), min_size=s.size, max_size=s.size))
    blocks, start = [], 0
    for n in sizes:
        blocks.append(list(range(start, start + n)))
        start += n
    flat = [x for b in blocks for x in b]
    assert list(block_perm(s, sizes).apply(flat)) == [x for b in s.apply(blocks) for x in b]


@given(st.lists(st.integers(0, 3).flatmap(permutations), max_size=4), st.data())
def test_juxtaposition_is_a_homomorphism(ps, data):
    qs = [data.draw(permutations(p.size)) for p in ps]
    lhs = juxtapose_perms([compose_perm(p, q) for p, q in zip(ps, qs)])
    assert lhs == compose_perm(juxtapose_perms(ps), juxtapose_perms(qs))


def test_insert_perm():
    outer = Permutation.identity(3)
    inner = Permutation([2, 1])
    assert insert_perm(outer, 2, inner).images == (1, 3, 2, 4)


# encodings and reports ------------------------------------------------------


def test_canonical_is_compact_sorted_json():
    assert canonical({"b": 1, "a": [Permutation([2, 1])]}) == '{"a":[[1,0]],"b":1}'
    assert canonical(Profile(("x", "y"), "z")) == json.dumps(
        Profile(("x", "y"), "z").encode(), separators=(",", ":"), sort_keys=True
    )


def test_validation_report_truthiness():
    r = ValidationReport()
    assert r.ok and not r
    r.add("law", ["instance"], "detail")
    assert not r.ok and r and r.laws() == ["law"]
    assert r.encode()["violations"][0]["law"] == "law"


# categories ------------------------------------------------------------------


def _iso_pair():
    morphisms = {"f": ("a", "b"), "g": ("b", "a")}
    table = {("g", "f"): "1_a", ("f", "g"): "1_b"}
    return FiniteCategory.decode(
        {"objects": ["a", "b"], "morphisms": [{"id": m, "dom": d, "cod": c} for m, (d, c) in morphisms.items()],
         "compose": [[f, g, r] for (f, g), r in table.items()]}
    )


def test_finite_category_laws_and_round_trip():
    c = _iso_pair()
    assert check_category(c).ok
    again = FiniteCategory.decode(c.encode())
    assert again.encode() == c.encode()
    assert c.inverse("f") == "g"
    ok, skeleton = equivalent_to_discrete(c)
    assert ok and skeleton == ["a"]


def test_check_category_detects_missing_composite():
    doc = _iso_pair().encode()
    doc["compose"] = [e for e in doc["compose"] if e[:2] != ["g", "f"]]
    report = check_category(FiniteCategory.decode(doc))
    assert "compose-missing" in report.laws()


def test_non_invertible_morphism_is_not_discrete_up_to_equivalence():
    c = FiniteCategory.decode({"objects": ["a", "b"], "morphisms": [{"id": "f", "dom": "a", "cod": "b"}]})
    assert check_category(c).ok
    assert equivalent_to_discrete(c) == (False, None)


def test_discrete_category():
    c = DiscreteCategory(lambda bound: ["x", "y"])
    assert check_category(c).ok
    assert c.hom_out("x") == [Identity("x")]
    assert equivalent_to_discrete(c)[0]
