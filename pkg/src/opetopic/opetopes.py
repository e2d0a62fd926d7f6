"""Opetopes and multitopes by iterated slicing.

``I`` is the symmetric multicategory with one object, one object-morphism
and one arrow; ``J`` is the generalised multicategory with one object and
one arrow.  k-opetopes are the objects of the k-th iterated slice of ``I``
and k-multitopes those of the k-th iterated slice of ``J``.  For k >= 1 both
are arrows of the previous slice.

Sizes: arrows of ``I`` and ``J`` have size 0; a slice arrow has its node
count plus the sizes of its node labels (so the size counts nodes at every
level), and a bare edge has the size of its object.

Multitope terms: ``"*"`` in dimension 0, ``"1"`` in dimension 1, and in
higher dimensions a node is ``[label, [child, ...]]`` and a leaf is
``[edge]`` (a one-element list holding the term of its edge object).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .foundations import Identity, Permutation, canonical, encode
from .samples import terminal_gen
from .slice import GenSlice, Leaf, Node, SymConfiguration, SymSlice, leaf_count, node_count, nodes, phi_plus
from .symmult import EquivalenceReport, SymMorphism, SymMulticat, check_sym_equivalence, terminal_sym
from .xi import XiArrow, XiMulticat

_sym_chain: List[SymMulticat] = []
_gen_chain: list = []
_xi_chain: List[XiMulticat] = []
_phi_chain: List[SymMorphism] = []


def iterated_slice_sym(k: int) -> SymMulticat:
    """``I`` sliced ``k`` times (shared, so enumeration caches persist)."""
    if k < 0:
        raise ValueError("dimension must be non-negative")
    if not _sym_chain:
        _sym_chain.append(terminal_sym())
    while len(_sym_chain) <= k:
        _sym_chain.append(SymSlice(_sym_chain[-1]))
    return _sym_chain[k]


def iterated_slice_gen(k: int):
    """``J`` sliced ``k`` times."""
    if k < 0:
        raise ValueError("dimension must be non-negative")
    if not _gen_chain:
        _gen_chain.append(terminal_gen())
    while len(_gen_chain) <= k:
        _gen_chain.append(GenSlice(_gen_chain[-1]))
    return _gen_chain[k]


def _xi_gen(k: int) -> XiMulticat:
    while len(_xi_chain) <= k:
        _xi_chain.append(XiMulticat(iterated_slice_gen(len(_xi_chain))))
    return _xi_chain[k]


def comparison(k: int) -> SymMorphism:
    """``I^{k+} -> xi(J_{k+})``, obtained by slicing the isomorphism
    ``I -> xi(J)`` ``k`` times."""
    if not _phi_chain:
        i, xj = iterated_slice_sym(0), _xi_gen(0)
        one = Permutation.identity(1)
        _phi_chain.append(
            SymMorphism(
                i,
                xj,
                {"*": "*"}.__getitem__,
                lambda m: Identity("*"),
                {"1": XiArrow("1", one)}.__getitem__,
            )
        )
    while len(_phi_chain) <= k:
        n = len(_phi_chain)
        _phi_chain.append(phi_plus(_phi_chain[-1], iterated_slice_sym(n), _xi_gen(n)))
    return _phi_chain[k]


# --------------------------------------------------------------------------
# enumeration


def opetope_category(k: int):
    return iterated_slice_sym(k).category


def enumerate_opetopes(k: int, bound: int) -> List[Any]:
    """Objects of the category of k-opetopes of size at most ``bound``,
    in canonical order."""
    if k == 0:
        return list(iterated_slice_sym(0).category.objects())
    return sorted(iterated_slice_sym(k - 1).arrows(bound), key=canonical)


def enumerate_multitopes(k: int, bound: int) -> List[Any]:
    """k-multitopes of size at most ``bound`` in canonical term order."""
    if k == 0:
        return list(iterated_slice_gen(0).objects())
    items = list(iterated_slice_gen(k - 1).arrows(bound))
    return sorted(items, key=lambda x: multitope_key(k, x))


def multitope_term(k: int, x) -> Any:
    if k == 0:
        return "*"
    if k == 1:
        return "1"
    return _tree_term(k, x)


def _tree_term(k, t):
    if isinstance(t, Leaf):
        return [multitope_term(k - 2, t.edge)]
    return [multitope_term(k - 1, t.label), [_tree_term(k, c) for c in t.children]]


def multitope_key(k: int, x) -> str:
    return json.dumps(multitope_term(k, x), separators=(",", ":"))


def parse_multitope(k: int, term) -> Any:
    """Inverse of ``multitope_term``."""
    if isinstance(term, str):
        if term.strip()[:1] in ('[', '"'):
            term = json.loads(term)
    if k == 0:
        if term != "*":
            raise ValueError("the 0-multitope is '*'")
        return "*"
    if k == 1:
        if term != "1":
            raise ValueError("the 1-multitope is '1'")
        return "1"
    below = iterated_slice_gen(k - 2)

    def build(t):
        if not isinstance(t, list) or len(t) not in (1, 2):
            raise ValueError(f"malformed multitope term {t!r}")
        if len(t) == 1:
            return Leaf(parse_multitope(k - 2, t[0]))
        label = parse_multitope(k - 1, t[0])
        kids = tuple(build(c) for c in t[1])
        if len(kids) != below.arity(label):
            raise ValueError(f"node {t[0]!r} needs {below.arity(label)} children")
        return Node(label, below.target(label), kids)

    tree = build(term)
    _check_gen_tree(k, tree)
    return tree


def _check_gen_tree(k, tree):
    below = iterated_slice_gen(k - 2)

    def walk(t, expected):
        if isinstance(t, Leaf):
            if expected is not None and t.edge != expected:
                raise ValueError("leaf does not match the slot of its parent")
            return
        if expected is not None and t.edge != expected:
            raise ValueError("subtree target does not match the slot of its parent")
        for c, x in zip(t.children, below.source(t.label)):
            walk(c, x)

    walk(tree, None)


# --------------------------------------------------------------------------
# opetope documents


def opetope_document(k: int, x) -> dict:
    """``{"dim", "tree", "rho", "tau", "profile"}`` for a k-opetope."""
    if k <= 1:
        return {"dim": k, "tree": encode(x)}
    doc = {"dim": k}
    doc.update(x.encode())
    doc["profile"] = iterated_slice_sym(k - 1).profile(x).encode()
    return doc


def parse_opetope_document(doc: dict) -> Tuple[int, Any]:
    """Inverse of ``opetope_document``; the stored profile is checked."""
    k = int(doc["dim"])
    if k == 0:
        if doc["tree"] != "*":
            raise ValueError("the 0-opetope is '*'")
        return 0, "*"
    if k == 1:
        if doc["tree"] != "1":
            raise ValueError("the 1-opetope is '1'")
        return 1, "1"
    x = _decode_opetope(k, doc)
    if "profile" in doc and iterated_slice_sym(k - 1).profile(x).encode() != doc["profile"]:
        raise ValueError("stored profile does not match the configuration")
    return k, x


def _decode_opetope(k, enc):
    if k == 0:
        return enc
    if k == 1:
        return enc
    tree = _decode_tree(k, enc["tree"])
    return SymConfiguration(
        tree, Permutation(enc["rho"], zero_based=True), Permutation(enc["tau"], zero_based=True)
    )


def _decode_tree(k, enc):
    edge = _decode_morphism(k - 2, enc["edge"])
    if "label" not in enc:
        return Leaf(edge)
    label = _decode_opetope(k - 1, enc["label"])
    return Node(label, edge, tuple(_decode_tree(k, c) for c in enc["children"]))


def _decode_morphism(j, enc):
    if j == 0:
        return enc
    cat = opetope_category(j)
    return cat.morphism(
        _decode_opetope(j, enc["dom"]),
        Permutation(enc["sigma"], zero_based=True),
        tuple(_decode_morphism(j - 1, m) for m in enc["inputs"]),
        _decode_morphism(j - 1, enc["output"]),
    )


# --------------------------------------------------------------------------
# lifting multitopes to opetopes


def lift_multitope(k: int, term) -> Any:
    """An opetope whose image under the comparison is isomorphic to the
    given multitope: same tree shape, recursively lifted labels, node
    ordering by preorder, untwisted leaves and, on internal edges, the
    isomorphism from the child's target to the parent's input."""
    x = parse_multitope(k, term) if not isinstance(term, (Leaf, Node)) else term
    return _lift(k, x)


def _lift(k, x):
    if k == 0:
        return "*"
    if k == 1:
        return "1"
    q = iterated_slice_sym(k - 2)
    cat = q.category

    def build(t, slot):
        if isinstance(t, Leaf):
            obj = slot if slot is not None else _lift(k - 2, t.edge)
            return Leaf(cat.identity(obj))
        label = _lift(k - 1, t.label)
        src = q.source(label)
        kids = tuple(build(c, x) for c, x in zip(t.children, src))
        node = Node(label, cat.identity(q.target(label)), kids)
        return node

    tree = build(x, None)
    tree = _fix_edges(k, tree, None)
    n, m = node_count(tree), leaf_count(tree)
    return SymConfiguration(tree, Permutation.identity(m), Permutation.identity(n))


def _fix_edges(k, t, slot):
    """Set each internal edge to the isomorphism from the child's target to
    the parent's input."""
    if isinstance(t, Leaf):
        return t
    q = iterated_slice_sym(k - 2)
    cat = q.category
    kids = tuple(_fix_edges(k, c, x) for c, x in zip(t.children, q.source(t.label)))
    edge = t.edge
    if slot is not None:
        tgt = q.target(t.label)
        isos = [a for a in cat.hom_out(tgt) if cat.cod(a) == slot]
        if not isos:
            raise ValueError("lifted subtree target is not isomorphic to its slot")
        edge = isos[0]
    return Node(t.label, edge, kids)


# --------------------------------------------------------------------------
# isomorphism classes


@dataclass
class IsoClass:
    representative: Any
    size: int
    members: Optional[List[Any]] = field(default=None, repr=False)

    def encode(self) -> dict:
        return {"representative": encode(self.representative), "size": self.size}


def orbit(k: int, seed, limit: Optional[int] = None) -> set:
    """Every object isomorphic to ``seed`` in the category of k-opetopes,
    by closure under generating isomorphisms."""
    cat = opetope_category(k)
    seen = {seed}
    queue = deque([seed])
    while queue:
        x = queue.popleft()
        for m in cat.generators_out(x):
            y = cat.cod(m)
            if y not in seen:
                seen.add(y)
                queue.append(y)
                if limit is not None and len(seen) > limit:
                    raise RuntimeError(f"orbit exceeds {limit} elements")
    return seen


def manifestation_count(seed, k: int) -> int:
    """Size of the isomorphism class of ``seed``."""
    if k <= 1:
        return 1
    return len(orbit(k, seed))


def class_size_formula(seed, k: int) -> int:
    """Class size from the structure of morphisms alone: a k-opetope with
    ``n`` nodes has ``n! * prod |class(label)| * |class(target)|``
    isomorphisms out of it (hom-sets being singletons)."""
    if k <= 1:
        return 1
    q = iterated_slice_sym(k - 1)
    prof = q.profile(seed)
    total = math.factorial(prof.arity)
    for x in prof.inputs:
        total *= class_size_formula(x, k - 1)
    return total * class_size_formula(prof.output, k - 1)


def iso_classes(items: Sequence[Any], k: int) -> List[IsoClass]:
    """Partition ``items`` by isomorphism; classes are complete orbits."""
    assigned: Dict[Any, int] = {}
    classes: List[IsoClass] = []
    for x in sorted(items, key=canonical):
        if x in assigned:
            continue
        members = sorted(orbit(k, x) if k >= 2 else {x}, key=canonical)
        for y in members:
            assigned[y] = len(classes)
        classes.append(IsoClass(members[0], len(members), members))
    classes.sort(key=lambda c: canonical(c.representative))
    return classes


# the two pictured three-dimensional opetopes, as multitopes: a ternary
# 2-cell with a binary 2-cell on its middle input, and a ternary 2-cell with
# a binary 2-cell on input 2 and a ternary 2-cell on input 3


def chain_term(n: int) -> list:
    """The n-ary 2-multitope: a chain of n unary nodes."""
    t: list = ["*"]
    for _ in range(n):
        t = ["1", [t]]
    return t


LEAF_3 = ["1"]
FIGURE_576 = [chain_term(3), [LEAF_3, [chain_term(2), [LEAF_3, LEAF_3]], LEAF_3]]
FIGURE_311040 = [
    chain_term(3),
    [LEAF_3, [chain_term(2), [LEAF_3, LEAF_3]], [chain_term(3), [LEAF_3, LEAF_3, LEAF_3]]],
]


# --------------------------------------------------------------------------
# correspondence


def verify_correspondence(k: int, bound: int) -> EquivalenceReport:
    """Bounded check that the comparison ``I^{k+} -> xi(J_{k+})`` is an
    equivalence, plus a bijection between isomorphism classes of
    k-opetopes and k-multitopes of size at most ``bound``."""
    phi = comparison(k)
    report = check_sym_equivalence(phi, bound)
    classes = iso_classes(enumerate_opetopes(k, bound), k)
    multitopes = enumerate_multitopes(k, bound)
    images = []
    for c in classes:
        imgs = {phi.on_object(x) for x in c.members}
        if len(imgs) != 1:
            report.failures.append(f"class of {canonical(c.representative)} has {len(imgs)} images")
        images.append(next(iter(imgs)))
    if len(set(images)) != len(images):
        report.failures.append("distinct classes share a multitope")
    if set(images) != set(multitopes):
        report.failures.append("class images do not cover the multitopes")
    report.extra["isoClasses"] = len(classes)
    report.extra["multitopes"] = len(multitopes)
    report.extra["classSizes"] = [c.size for c in classes]
    return report
