"""Acceptance suite: one test per criterion, each timed against its limit.

Every test prints a single ``criterion N: PASS/FAIL`` line (visible in the
normal pytest output) before asserting.
"""

import math
import random
import time

import pytest

from opetopic.foundations import Identity, Permutation
from opetopic.genmult import check_gen_axioms, enumerate_gen_morphisms
from opetopic.opetopes import (
    FIGURE_311040,
    FIGURE_576,
    class_size_formula,
    enumerate_multitopes,
    enumerate_opetopes,
    iso_classes,
    iterated_slice_sym,
    lift_multitope,
    manifestation_count,
    multitope_term,
    chain_term,
    comparison,
    verify_correspondence,
)
from opetopic.samples import (
    codiscrete_sym,
    commutative_sym,
    random_discrete_free_sym,
    random_gen_multicat,
    random_reordering,
    reorder_sources,
    terminal_gen,
)
from opetopic.slice import phi_plus, slice_sym
from opetopic.symmult import (
    SymMorphism,
    check_sym_axioms,
    check_sym_equivalence,
    check_sym_morphism,
    materialize_sym,
    terminal_sym,
)
from opetopic.xi import (
    PreconditionError,
    XiArrow,
    comparison_from_xi_inverse,
    enumerate_sym_morphisms,
    is_freely_symmetric,
    is_tidy,
    sym_morphism_tables,
    xi,
    xi_inverse,
    xi_on_morphism,
)


@pytest.fixture
def report(capsys):
    def emit(number, ok, elapsed, limit, detail=""):
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} ({elapsed:.2f}s, limit {limit}s) {detail}".rstrip())
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit}s"

    return emit


def test_criterion_1_xi_of_terminal(report):
    start = time.perf_counter()
    lazy = xi(terminal_gen())
    table = materialize_sym(lazy)
    i = terminal_sym()
    one_object = list(table.category.objects()) == ["*"]
    one_arrow = len(table.arrows()) == 1 and list(lazy.arrows()) == [XiArrow("1", Permutation.identity(1))]
    F = SymMorphism(i, lazy, {"*": "*"}.__getitem__, lambda m: Identity("*"), {"1": XiArrow("1", Permutation.identity(1))}.__getitem__)
    objects, arrows = sym_morphism_tables(F)
    iso = (
        check_sym_morphism(F).ok
        and check_sym_equivalence(F).ok
        and len(set(objects.values())) == len(objects) == 1
        and list(arrows.values()) == list(lazy.arrows())
    )
    ok = one_object and one_arrow and iso
    report(1, ok, time.perf_counter() - start, 1, f"objects=1 arrows={len(table.arrows())}")


def test_criterion_2_axiom_transport(report):
    start = time.perf_counter()
    rng = random.Random(2)
    tested, failures = 0, []
    while tested < 120:
        m = random_gen_multicat(rng, max_objects=4, max_arrows=6, max_arity=3)
        if not check_gen_axioms(m).ok:
            continue
        tested += 1
        result = check_sym_axioms(xi(m))
        if not result.ok:
            failures.append(result.encode())
    report(2, not failures, time.perf_counter() - start, 60, f"multicategories={tested} violating={len(failures)}")


def _tables(morphisms):
    return {tuple(sorted(sym_morphism_tables(G)[1].items(), key=repr)) for G in morphisms}


def test_criterion_3_full_faithfulness(report):
    start = time.perf_counter()
    rng = random.Random(3)
    kw = dict(max_objects=3, max_arrows=3, max_arity=2, max_generators=2)
    pairs, mismatches, total = 0, 0, 0
    while pairs < 24:
        m = random_gen_multicat(rng, **kw)
        if pairs % 2:
            n = reorder_sources(m, random_reordering(m, rng))[0]
        else:
            n = random_gen_multicat(rng, **kw)
        xm, xn = xi(m), xi(n)
        gen = list(enumerate_gen_morphisms(m, n))
        images = _tables(xi_on_morphism(F, xm, xn) for F in gen)
        sym = _tables(enumerate_sym_morphisms(xm, xn))
        # a bijection: distinct generalised morphisms have distinct images, and
        # every symmetric morphism is hit
        if len(images) != len(gen) or images != sym:
            mismatches += 1
        total += len(gen)
        pairs += 1
    report(3, mismatches == 0, time.perf_counter() - start, 300, f"pairs={pairs} morphisms={total} mismatches={mismatches}")


def test_criterion_4_image_characterisation(report):
    start = time.perf_counter()
    rng = random.Random(4)
    round_trips = 0
    for _ in range(30):
        q = random_discrete_free_sym(rng)
        m = xi_inverse(q)
        G = comparison_from_xi_inverse(q, m)
        objects, arrows = sym_morphism_tables(G)
        iso = (
            check_gen_axioms(m).ok
            and check_sym_morphism(G).ok
            and check_sym_equivalence(G).ok
            and len(set(objects.values())) == len(objects) == len(list(q.category.objects()))
            and len(set(arrows.values())) == len(arrows) == len(q.arrows())
        )
        round_trips += iso
    rejected = 0
    violators = [commutative_sym([2]), commutative_sym([0, 3]), codiscrete_sym(2), codiscrete_sym(3, extra=1)]
    for q in violators:
        try:
            xi_inverse(q)
        except PreconditionError as exc:
            rejected += exc.witness is not None
    ok = round_trips == 30 and rejected == len(violators)
    report(4, ok, time.perf_counter() - start, 60, f"round-trips={round_trips}/30 rejected={rejected}/{len(violators)}")


def test_criterion_5_slice_comparison(report):
    start = time.perf_counter()
    rng = random.Random(5)
    passed = 0
    for _ in range(12):
        m = random_gen_multicat(rng, max_objects=3, max_arrows=4, max_arity=2, max_generators=2)
        F = phi_plus(SymMorphism.identity(xi(m)))
        passed += check_sym_morphism(F, 3).ok and check_sym_equivalence(F, 3).ok
    report(5, passed == 12, time.perf_counter() - start, 600, f"equivalences={passed}/12 at bound 3")


def test_criterion_6_slices_are_freely_symmetric(report):
    start = time.perf_counter()
    rng = random.Random(6)
    samples = [terminal_sym(), commutative_sym([2]), commutative_sym([0, 3]), codiscrete_sym(2)]
    samples += [xi(random_gen_multicat(rng, max_objects=3, max_arrows=4, max_arity=2)) for _ in range(6)]
    results = [is_freely_symmetric(slice_sym(q), 3) for q in samples]
    report(6, all(results), time.perf_counter() - start, 60, f"freely symmetric={sum(results)}/{len(results)}")


def test_criterion_7_tidiness_propagates(report):
    start = time.perf_counter()
    results = [is_tidy(iterated_slice_sym(k), 3) for k in range(4)]
    report(7, all(results), time.perf_counter() - start, 300, f"tidy for k=0..3: {results}")


def test_criterion_8_two_opetopes(report):
    start = time.perf_counter()
    classes = iso_classes(enumerate_opetopes(2, 4), 2)
    base = iterated_slice_sym(1)
    arities = sorted(base.arity(c.representative) for c in classes)
    sizes_ok = all(c.size == math.factorial(base.arity(c.representative)) for c in classes)
    multitopes = [multitope_term(2, x) for x in enumerate_multitopes(2, 4)]
    phi = comparison(2)
    images = sorted(multitope_term(2, phi.on_object(c.representative)) for c in classes)
    bijective = images == sorted(chain_term(n) for n in range(5)) and sorted(multitopes) == images
    ok = arities == [0, 1, 2, 3, 4] and sizes_ok and bijective
    sizes = sorted(c.size for c in classes)
    report(8, ok, time.perf_counter() - start, 60, f"class sizes={sizes} multitopes={len(multitopes)}")


def test_criterion_9_manifestation_counts(report):
    start = time.perf_counter()
    small = lift_multitope(3, FIGURE_576)
    large = lift_multitope(3, FIGURE_311040)
    sizes = (iterated_slice_sym(2).size(small), iterated_slice_sym(2).size(large))
    formulas = (class_size_formula(small, 3), class_size_formula(large, 3))
    first = manifestation_count(small, 3)
    orbit_start = time.perf_counter()
    second = manifestation_count(large, 3)
    orbit_time = time.perf_counter() - orbit_start
    ok = (first, second) == (576, 311040) and formulas == (576, 311040) and orbit_time < 600
    report(
        9,
        ok,
        time.perf_counter() - start,
        900,
        f"counts=({first}, {second}) sizes={sizes} larger orbit {orbit_time:.1f}s (limit 600s)",
    )


def test_criterion_10_correspondence(report):
    start = time.perf_counter()
    results = [verify_correspondence(k, 3) for k in range(4)]
    detail = " ".join(f"k={k}:{r.extra['isoClasses']}/{r.extra['multitopes']}" for k, r in enumerate(results))
    report(10, all(r.ok for r in results), time.perf_counter() - start, 900, detail)
