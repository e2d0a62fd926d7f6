"""Seeded sample multicategories for tests, the acceptance suite and the CLI.

Random generalised multicategories are free on an acyclic signature: every
arrow is a planar tree of generators, which keeps the closure finite.  Each
tree gets its own random ordering of its leaves; since composition grafts
trees and tracks leaves, any such choice satisfies all the coherence laws
while producing non-trivial amalgamation permutations.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

from .foundations import FiniteCategory, Permutation, Profile, all_perms
from .genmult import FiniteGenMulticat, GenArrow, GenMorphism, splice
from .symmult import FiniteSymMulticat, materialize_sym
from .xi import XiMulticat

OBJECT_NAMES = "abcdefgh"


def terminal_gen() -> FiniteGenMulticat:
    """One object and one (identity) arrow."""
    one = Permutation.identity(1)
    return FiniteGenMulticat(["*"], [GenArrow("1", ("*",), "*")], {"*": "1"}, {("1", 1, "1"): ("1", one)})


# trees: ("id", x) for identities, (generator, children) otherwise, a child
# being None for a leaf


def _leaves(tree, sig) -> List[str]:
    if tree[0] == "id":
        return [tree[1]]
    gen, children = tree
    out: List[str] = []
    for x, c in zip(sig[gen][0], children):
        out.extend([x] if c is None else _leaves(c, sig))
    return out


def _name(tree) -> str:
    if tree[0] == "id":
        return f"1_{tree[1]}"
    gen, children = tree
    if not children:
        return gen
    return gen + "(" + ",".join("_" if c is None else _name(c) for c in children) + ")"


def _graft(tree, leaf: int, sub):
    """Replace planar leaf ``leaf`` (1-based) of ``tree`` by ``sub``."""
    if tree[0] == "id":
        return sub
    if sub[0] == "id":
        return tree
    gen, children = tree
    new = []
    remaining = leaf
    done = False
    for c in children:
        n = 1 if c is None else _count_leaves(c)
        if not done and remaining <= n:
            new.append(sub if c is None else _graft(c, remaining, sub))
            done = True
        else:
            new.append(c)
        if not done:
            remaining -= n
    return (gen, tuple(new))


def _count_leaves(tree) -> int:
    if tree[0] == "id":
        return 1
    return sum(1 if c is None else _count_leaves(c) for c in tree[1])


def _trees_into(x, sig, by_target, memo):
    """All non-identity trees with root target ``x`` (finite: acyclic)."""
    if x in memo:
        return memo[x]
    out = []
    for gen in by_target.get(x, []):
        options = []
        for y in sig[gen][0]:
            options.append([None] + _trees_into(y, sig, by_target, memo))
        for combo in _product(options):
            out.append((gen, tuple(combo)))
    memo[x] = out
    return out


def _product(options):
    if not options:
        yield ()
        return
    for head in options[0]:
        for tail in _product(options[1:]):
            yield (head,) + tail


def free_gen_multicat(
    objects: Sequence[str],
    signature: Dict[str, Tuple[Tuple[str, ...], str]],
    orderings: Optional[Dict[str, Permutation]] = None,
    rng: Optional[random.Random] = None,
) -> FiniteGenMulticat:
    """Free generalised multicategory on an acyclic ``signature``.

    ``orderings`` (by arrow name) or ``rng`` choose, for each composite
    tree, which planar leaf sits at each source position; by default
    sources are in planar order.
    """
    by_target: Dict[str, List[str]] = {}
    for gen in sorted(signature):
        by_target.setdefault(signature[gen][1], []).append(gen)
    memo: Dict[str, list] = {}
    trees = []
    for x in objects:
        trees.extend(_trees_into(x, signature, by_target, memo))
    order: Dict[object, Permutation] = {}
    for t in trees:
        n = _count_leaves(t)
        nm = _name(t)
        if orderings and nm in orderings:
            order[t] = orderings[nm]
        elif rng is not None:
            order[t] = rng.choice(all_perms(n))
        else:
            order[t] = Permutation.identity(n)
    for x in objects:
        order[("id", x)] = Permutation.identity(1)
    all_trees = [("id", x) for x in objects] + trees

    def target(t):
        return t[1] if t[0] == "id" else signature[t[0]][1]

    def source(t):
        return order[t].apply(_leaves(t, signature))

    arrows = [GenArrow(_name(t), tuple(source(t)), target(t)) for t in all_trees]
    present = {_name(t): t for t in all_trees}
    comps = {}
    for t1 in all_trees:
        s1 = source(t1)
        pi1 = order[t1]
        for p in range(1, len(s1) + 1):
            for t2 in all_trees:
                if target(t2) != s1[p - 1]:
                    continue
                leaf = pi1(p)
                t = _graft(t1, leaf, t2)
                n2 = _count_leaves(t2)
                pi2 = order[t2]

                def new_index(i):
                    return i if i < leaf else i + n2 - 1

                z = splice(
                    [new_index(pi1(j)) for j in range(1, len(s1) + 1)],
                    p,
                    [leaf - 1 + pi2(b) for b in range(1, n2 + 1)],
                )
                where = {v: i for i, v in enumerate(z)}
                pi = order[t]
                chi = Permutation._raw(tuple(where[pi(i)] for i in range(1, pi.size + 1)))
                comps[(_name(t1), p, _name(t2))] = (_name(t), chi)
    assert all(r in present for r, _ in comps.values())
    return FiniteGenMulticat(
        list(objects), arrows, {x: f"1_{x}" for x in objects}, comps
    )


def random_gen_multicat(
    rng: random.Random, max_objects: int = 4, max_arrows: int = 6, max_arity: int = 3, max_generators: int = 3
) -> FiniteGenMulticat:
    """A random free generalised multicategory with at most ``max_arrows``
    non-identity arrows, all of arity at most ``max_arity``."""
    while True:
        n = rng.randint(1, max_objects)
        objects = list(OBJECT_NAMES[:n])
        sig = {}
        for i in range(rng.randint(1, max_generators)):
            t = rng.randrange(n)
            arity = 0 if t == 0 else rng.randint(0, max_arity)
            src = tuple(objects[rng.randrange(t)] for _ in range(arity))
            sig[f"g{i}"] = (src, objects[t])
        by_target: Dict[str, List[str]] = {}
        for gen in sorted(sig):
            by_target.setdefault(sig[gen][1], []).append(gen)
        memo: Dict[str, list] = {}
        trees = [t for x in objects for t in _trees_into(x, sig, by_target, memo)]
        if len(trees) > max_arrows or any(_count_leaves(t) > max_arity for t in trees):
            continue
        return free_gen_multicat(objects, sig, rng=rng)


def reorder_sources(m: FiniteGenMulticat, perms: Dict[str, Permutation]) -> Tuple[FiniteGenMulticat, GenMorphism]:
    """A copy ``n`` of ``m`` whose arrow ``f`` has source
    ``perms[f].apply(source_m(f))``, with the identity-on-data morphism
    ``m -> n`` (its transition maps are ``perms[f]^-1``)."""

    def pi(f):
        return perms.get(f, Permutation.identity(m.arity(f)))

    arrows = [GenArrow(f, pi(f).apply(m.source(f)), m.target(f)) for f in m.arrows()]
    comps = {}
    for (f, p_m, g), (h, chi) in m.compositions.items():
        # p_m is an m-position; the matching n-position is pi(f)^-1(p_m)
        p = pi(f).inverse()(p_m)
        ft = [("f", a) for a in range(1, m.arity(f) + 1)]
        gt = [("g", b) for b in range(1, m.arity(g) + 1)]
        res_m = chi.apply(splice(ft, p_m, gt))
        res_n = pi(h).apply(res_m)
        z = splice(pi(f).apply(ft), p, pi(g).apply(gt))
        where = {v: i for i, v in enumerate(z)}
        comps[(f, p, g)] = (h, Permutation._raw(tuple(where[v] for v in res_n)))
    n = FiniteGenMulticat(m.objects(), arrows, m.identities, comps)
    F = GenMorphism(
        m,
        n,
        {x: x for x in m.objects()},
        {f: f for f in m.arrows()},
        {f: pi(f).inverse() for f in m.arrows()},
    )
    return n, F


def random_reordering(m: FiniteGenMulticat, rng: random.Random) -> Dict[str, Permutation]:
    ids = set(m.identities.values())
    return {f: rng.choice(all_perms(m.arity(f))) for f in m.arrows() if f not in ids}


# --------------------------------------------------------------------------
# symmetric samples


def rename_arrows(q: FiniteSymMulticat, rng: random.Random) -> FiniteSymMulticat:
    """Same multicategory with arrows renamed to shuffled opaque ids."""
    old = q.arrows()
    new_ids = [f"q{i}" for i in range(len(old))]
    rng.shuffle(new_ids)
    ren = dict(zip(old, new_ids))
    return FiniteSymMulticat(
        q.category,
        {ren[f]: p for f, p in q.profiles.items()},
        {m: ren[a] for m, a in q.iota_table.items()},
        {(ren[f], tuple(ren[g] for g in gs)): ren[r] for (f, gs), r in q.compositions.items()},
        {(ren[f], s): ren[r] for (f, s), r in q.actions.items()},
    )


def random_discrete_free_sym(rng: random.Random, **kwargs) -> FiniteSymMulticat:
    """An object-discrete freely symmetric table: a renamed ``xi(M)``."""
    return rename_arrows(materialize_sym(XiMulticat(random_gen_multicat(rng, **kwargs))), rng)


def commutative_sym(arities: Sequence[int]) -> FiniteSymMulticat:
    """Objects ``x``, ``y``; one arrow ``c_k: (x^k) -> y`` for each ``k``,
    fixed by every permutation.  Object-discrete, not freely symmetric
    whenever some ``k >= 2``."""
    cat = FiniteCategory.discrete(["x", "y"])
    profiles = {"1x": Profile(("x",), "x"), "1y": Profile(("y",), "y")}
    comps = {("1x", ("1x",)): "1x", ("1y", ("1y",)): "1y"}
    acts = {("1x", Permutation.identity(1)): "1x", ("1y", Permutation.identity(1)): "1y"}
    for k in arities:
        c = f"c{k}"
        profiles[c] = Profile(("x",) * k, "y")
        comps[(c, ("1x",) * k)] = c
        comps[("1y", (c,))] = c
        for s in all_perms(k):
            acts[(c, s)] = c
    return FiniteSymMulticat(cat, profiles, {"1_x": "1x", "1_y": "1y"}, comps, acts)


def codiscrete_sym(n: int, extra: int = 0) -> FiniteSymMulticat:
    """``n`` mutually isomorphic objects (one morphism between each pair),
    plus ``extra`` isolated objects; arrows are the ``iota`` images.
    Freely symmetric, not object-discrete when ``n >= 2``."""
    objs = [f"x{i}" for i in range(n)] + [f"z{i}" for i in range(extra)]
    morphisms, ids, table = {}, {}, {}
    for a in objs:
        ids[a] = f"u_{a}_{a}"
    groups = [objs[:n]] + [[z] for z in objs[n:]]
    for grp in groups:
        for a in grp:
            for b in grp:
                morphisms[f"u_{a}_{b}"] = (a, b)
        for a in grp:
            for b in grp:
                for c in grp:
                    table[(f"u_{b}_{c}", f"u_{a}_{b}")] = f"u_{a}_{c}"
    cat = FiniteCategory(objs, morphisms, ids, table)
    profiles = {f"i{m}": Profile((d,), c) for m, (d, c) in morphisms.items()}
    iota = {m: f"i{m}" for m in morphisms}
    comps = {(f"i{g}", (f"i{f}",)): f"i{gf}" for (g, f), gf in table.items()}
    acts = {(f"i{m}", Permutation.identity(1)): f"i{m}" for m in morphisms}
    return FiniteSymMulticat(cat, profiles, iota, comps, acts)
