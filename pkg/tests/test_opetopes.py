import json
import math
import random

import pytest

from opetopic.foundations import canonical
from opetopic.opetopes import (
    FIGURE_576,
    chain_term,
    class_size_formula,
    comparison,
    enumerate_multitopes,
    enumerate_opetopes,
    iso_classes,
    iterated_slice_gen,
    iterated_slice_sym,
    lift_multitope,
    manifestation_count,
    multitope_term,
    opetope_category,
    opetope_document,
    orbit,
    parse_multitope,
    parse_opetope_document,
    verify_correspondence,
)
from opetopic.symmult import check_sym_morphism
from opetopic.xi import is_tidy


def test_low_dimensions_are_trivial():
    for k in (0, 1):
        assert len(enumerate_opetopes(k, 4)) == 1
        assert len(enumerate_multitopes(k, 4)) == 1
        assert [c.size for c in iso_classes(enumerate_opetopes(k, 4), k)] == [1]
        assert manifestation_count(enumerate_opetopes(k, 4)[0], k) == 1
    assert multitope_term(0, "*") == "*" and multitope_term(1, "1") == "1"


def test_two_multitopes_are_chains():
    terms = [multitope_term(2, x) for x in enumerate_multitopes(2, 3)]
    assert terms == [chain_term(n) for n in range(4)]


def test_two_opetope_classes_have_factorial_sizes():
    classes = iso_classes(enumerate_opetopes(2, 4), 2)
    sizes = sorted(c.size for c in classes)
    assert sizes == [1, 1, 2, 6, 24]
    q = iterated_slice_sym(1)
    for c in classes:
        n = q.arity(c.representative)
        assert c.size == math.factorial(n)


def test_classes_are_stable_under_input_order():
    items = enumerate_opetopes(3, 3)
    shuffled = list(items)
    random.Random(1).shuffle(shuffled)
    a = [(canonical(c.representative), c.size) for c in iso_classes(items, 3)]
    b = [(canonical(c.representative), c.size) for c in iso_classes(shuffled, 3)]
    assert a == b


@pytest.mark.parametrize("k,bound", [(2, 3), (3, 3)])
def test_class_size_formula_matches_orbits(k, bound):
    for c in iso_classes(enumerate_opetopes(k, bound), k):
        assert c.size == class_size_formula(c.representative, k)
        for member in c.members[:3]:
            assert manifestation_count(member, k) == c.size


def test_multitope_terms_round_trip():
    for k in range(4):
        for x in enumerate_multitopes(k, 3):
            term = multitope_term(k, x)
            assert parse_multitope(k, json.dumps(term)) == x


@pytest.mark.parametrize(
    "k,term",
    [(0, "1"), (1, "*"), (2, ["1", []]), (2, ["1", [["*"], ["*"]]]), (3, [chain_term(2), [["1"]]]), (2, "oops")],
)
def test_malformed_multitope_terms(k, term):
    with pytest.raises(ValueError):
        parse_multitope(k, term)


def test_opetope_documents_round_trip():
    for k in range(4):
        for x in enumerate_opetopes(k, 3):
            doc = opetope_document(k, x)
            assert set(doc) >= {"dim", "tree"}
            assert parse_opetope_document(json.loads(json.dumps(doc))) == (k, x)


def test_opetope_document_profile_is_checked():
    x = enumerate_opetopes(2, 2)[0]
    doc = opetope_document(2, x)
    doc["profile"]["inputs"] = []
    with pytest.raises(ValueError):
        parse_opetope_document(doc)


def test_lifted_opetopes_map_to_their_multitopes():
    for k in range(4):
        phi = comparison(k)
        for x in enumerate_multitopes(k, 3):
            assert phi.on_object(lift_multitope(k, x)) == x


def test_first_figure():
    x = lift_multitope(3, FIGURE_576)
    assert iterated_slice_sym(2).size(x) == 7
    assert class_size_formula(x, 3) == 576
    assert manifestation_count(x, 3) == 576


def test_orbit_limit():
    x = lift_multitope(2, chain_term(4))
    with pytest.raises(RuntimeError):
        orbit(2, x, limit=5)


@pytest.mark.parametrize("k", range(4))
def test_iterated_slices_are_tidy(k):
    assert is_tidy(iterated_slice_sym(k), 3)


@pytest.mark.parametrize("k", range(4))
def test_comparison_is_a_morphism(k):
    assert check_sym_morphism(comparison(k), 3).ok


@pytest.mark.parametrize("k,bound,classes", [(0, 3, 1), (1, 3, 1), (2, 3, 4), (2, 4, 5), (3, 3, 5)])
def test_correspondence(k, bound, classes):
    report = verify_correspondence(k, bound)
    assert report.ok, report.encode()
    assert report.extra["isoClasses"] == report.extra["multitopes"] == classes


def test_shared_instances():
    assert iterated_slice_sym(2) is iterated_slice_sym(2)
    assert iterated_slice_gen(2) is iterated_slice_gen(2)
    assert opetope_category(2) is iterated_slice_sym(2).category
    with pytest.raises(ValueError):
        iterated_slice_sym(-1)
