"""Planar labelled trees, substitution with combing, and slicing.

A tree is either a bare edge ``Leaf(edge)`` or ``Node(label, edge,
children)`` where ``edge`` is the outgoing edge of the node and
``children[j]`` is attached to input ``j``.  A leaf child is a ``Leaf``
carrying the label of that input edge.  In the symmetric slice edges carry
object-morphisms (oriented from the child towards the parent's input); in
the generalised slice they carry objects.

Nodes are numbered in preorder (root first, children left to right) and
leaves in planar order, both from 1.  A node ordering ``tau`` is stored as a
permutation whose value at ``i`` is the position given to the ``i``-th node
in preorder.  A leaf twist ``rho`` says that source position ``i`` of the
evaluated tree holds planar leaf ``rho(i)``.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

from .foundations import Category, Identity, Permutation, Profile, all_perms, encode
from .genmult import GenComposition, GenMulticat, splice
from .symmult import EltCategory, EltMorphism, SymMorphism, SymMulticat
from .xi import XiArrow, XiMulticat


class TreeError(ValueError):
    pass


class _Cached:
    """Structural equality with a cached hash."""

    __slots__ = ()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True, eq=True)
class Leaf(_Cached):
    edge: Any

    def _key(self):
        return (self.edge,)

    __hash__ = _Cached.__hash__

    def encode(self):
        return {"edge": encode(self.edge)}


@dataclass(frozen=True, eq=True)
class Node(_Cached):
    label: Any
    edge: Any
    children: Tuple[Any, ...]

    def _key(self):
        return (self.label, self.edge, self.children)

    __hash__ = _Cached.__hash__

    def encode(self):
        return {
            "label": encode(self.label),
            "edge": encode(self.edge),
            "children": [c.encode() for c in self.children],
        }


def with_edge(t, edge):
    return Leaf(edge) if isinstance(t, Leaf) else Node(t.label, edge, t.children)


def node_count(t) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + sum(node_count(c) for c in t.children)


def leaf_count(t) -> int:
    if isinstance(t, Leaf):
        return 1
    return sum(leaf_count(c) for c in t.children)


def nodes(t, path: tuple = ()) -> List[Tuple[tuple, "Node"]]:
    """``(position, node)`` pairs in preorder; positions are root paths of
    0-based child indices."""
    if isinstance(t, Leaf):
        return []
    out = [(path, t)]
    for j, c in enumerate(t.children):
        out.extend(nodes(c, path + (j,)))
    return out


def leaves(t, path: tuple = ()) -> List[Tuple[tuple, Leaf]]:
    """``(position, leaf)`` pairs in planar order."""
    if isinstance(t, Leaf):
        return [(path, t)]
    out = []
    for j, c in enumerate(t.children):
        out.extend(leaves(c, path + (j,)))
    return out


def subtree(t, path: tuple):
    for j in path:
        t = t.children[j]
    return t


def map_labels(t, on_label: Callable, on_edge: Callable):
    if isinstance(t, Leaf):
        return Leaf(on_edge(t.edge))
    return Node(on_label(t.label), on_edge(t.edge), tuple(map_labels(c, on_label, on_edge) for c in t.children))


# --------------------------------------------------------------------------
# text grammar:  tree := edgeLabel | node(arrowId, [tree, ...]) @edgeLabel

_BARE = re.compile(r"[A-Za-z0-9_*.:+\-]+\Z")
_TOKEN = re.compile(r'\s*(?:(node\()|(\[)|(\])|(\))|(,)|(@)|("(?:[^"\\]|\\.)*")|([A-Za-z0-9_*.:+\-]+))')


def _fmt_label(v) -> str:
    s = v if isinstance(v, str) else json.dumps(encode(v), separators=(",", ":"), sort_keys=True)
    return s if _BARE.match(s) and s != "node" else json.dumps(s)


def format_tree(t) -> str:
    if isinstance(t, Leaf):
        return _fmt_label(t.edge)
    kids = ", ".join(format_tree(c) for c in t.children)
    return f"node({_fmt_label(t.label)}, [{kids}]) @{_fmt_label(t.edge)}"


def parse_tree(text: str):
    """Inverse of ``format_tree`` for string labels."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TreeError(f"unexpected input at offset {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastindex
        val = m.group(kind)
        tokens.append((kind, json.loads(val) if kind == 7 else val))
        pos = m.end()
    i = 0

    def expect(kind):
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != kind:
            raise TreeError(f"parse error at token {i}")
        i += 1
        return tokens[i - 1][1]

    def label():
        nonlocal i
        if i < len(tokens) and tokens[i][0] in (7, 8):
            i += 1
            return tokens[i - 1][1]
        raise TreeError(f"expected a label at token {i}")

    def tree():
        nonlocal i
        if i < len(tokens) and tokens[i][0] == 1:
            i += 1
            lab = label()
            expect(5)
            expect(2)
            kids = []
            if i < len(tokens) and tokens[i][0] != 3:
                kids.append(tree())
                while i < len(tokens) and tokens[i][0] == 5:
                    i += 1
                    kids.append(tree())
            expect(3)
            expect(4)
            expect(6)
            return Node(lab, label(), tuple(kids))
        return Leaf(label())

    t = tree()
    if i != len(tokens):
        raise TreeError("trailing input")
    return t


# --------------------------------------------------------------------------
# substitution and combing


@dataclass(frozen=True)
class CombedTree:
    tree: Any
    twist: Permutation

    def encode(self):
        return {"tree": self.tree.encode(), "twist": self.twist.encode()}


def _keep_inner(outer_edge, inner_edge):
    return inner_edge


def _substitute(outer, pos: tuple, inner, inner_twist: Permutation, compose_edge):
    """Replace the node of ``outer`` at ``pos`` by ``inner``.

    Input ``j`` of the replaced node is reattached at leaf
    ``inner_twist(j)`` of ``inner``.  Returns the new tree, the origin of
    each new node in preorder (``("o", i)`` for the ``i``-th node of
    ``outer``, ``("i", i)`` for ``inner``) and the outer leaf index of each
    new leaf in planar order.
    """
    node_i = 0
    leaf_i = 0

    def walk(t, path):
        nonlocal node_i, leaf_i
        if isinstance(t, Leaf):
            leaf_i += 1
            return t, [], [leaf_i]
        node_i += 1
        mine = node_i
        kids = [walk(c, path + (j,)) for j, c in enumerate(t.children)]
        if path == pos:
            return _graft(t, kids, inner, inner_twist, compose_edge)
        return (
            Node(t.label, t.edge, tuple(k[0] for k in kids)),
            [("o", mine)] + [o for k in kids for o in k[1]],
            [lf for k in kids for lf in k[2]],
        )

    if isinstance(outer, Leaf):
        raise TreeError("a bare edge has no node to replace")
    try:
        subtree(outer, pos)
    except (IndexError, AttributeError):
        raise TreeError(f"no node at position {list(pos)}") from None
    return walk(outer, ())


def _graft(node, kids, inner, twist, compose_edge):
    if twist.size != len(kids) or leaf_count(inner) != len(kids):
        raise TreeError(
            f"inner tree has {leaf_count(inner)} leaves but the replaced node has {len(kids)} inputs"
        )
    twist_inv = twist.inverse()
    node_i = 0
    leaf_i = 0

    def walk(t):
        nonlocal node_i, leaf_i
        if isinstance(t, Leaf):
            leaf_i += 1
            kid_tree, kid_nodes, kid_leaves = kids[twist_inv(leaf_i) - 1]
            edge = compose_edge(t.edge, kid_tree.edge)
            return with_edge(kid_tree, edge), kid_nodes, kid_leaves
        node_i += 1
        mine = node_i
        parts = [walk(c) for c in t.children]
        return (
            Node(t.label, t.edge, tuple(p[0] for p in parts)),
            [("i", mine)] + [o for p in parts for o in p[1]],
            [lf for p in parts for lf in p[2]],
        )

    tree, origins, leaf_origin = walk(inner)
    tree = with_edge(tree, compose_edge(node.edge, tree.edge))
    return tree, origins, leaf_origin


def _retwist(outer_twist: Permutation, leaf_origin: Sequence[int]) -> Permutation:
    # new position of each outer leaf, then follow the outer twist
    where = {old: new for new, old in enumerate(leaf_origin)}
    return Permutation._raw(tuple(where[v + 1] for v in outer_twist.zero_based))


def comb_substitute(outer: CombedTree, node: tuple, inner: CombedTree, compose_edge=None) -> CombedTree:
    """Replace a node of ``outer`` by ``inner`` and comb the result.

    ``compose_edge(b, a)`` is the edge label ``b o a`` for an edge ``a``
    followed by ``b`` (default: keep the inner label).  Substituting into a
    bare edge glues ``inner`` onto that edge.  The twist of the result
    lists, for each source position, the leaf that held it before.
    """
    compose_edge = compose_edge or _keep_inner
    if isinstance(outer.tree, Leaf):
        return CombedTree(with_edge(inner.tree, compose_edge(outer.tree.edge, inner.tree.edge)), inner.twist)
    tree, _, leaf_origin = _substitute(outer.tree, tuple(node), inner.tree, inner.twist, compose_edge)
    return CombedTree(tree, _retwist(outer.twist, leaf_origin))


def leaf_labels(t) -> List[Any]:
    return [lf.edge for _, lf in leaves(t)]


# --------------------------------------------------------------------------
# symmetric slice


@dataclass(frozen=True, eq=True)
class SymConfiguration(_Cached):
    """``(T, rho, tau)``; ``tau(i)`` is the source position of the ``i``-th
    node in preorder."""

    tree: Any
    rho: Permutation
    tau: Permutation

    def _key(self):
        return (self.tree, self.rho, self.tau)

    __hash__ = _Cached.__hash__

    def encode(self):
        return {"tree": self.tree.encode(), "rho": self.rho.encode(), "tau": self.tau.encode()}


def configuration_target(q: SymMulticat, c: SymConfiguration):
    """Evaluate the tree bottom-up in ``q`` and act by ``rho``."""
    return q.act(evaluate_tree(q, c.tree), c.rho)


def evaluate_tree(q: SymMulticat, t):
    cat = q.category
    if isinstance(t, Leaf):
        return q.iota(t.edge)
    body = q.compose(t.label, [evaluate_tree(q, c) for c in t.children]) if t.children else t.label
    if cat.is_identity(t.edge):
        return body
    return q.compose(q.iota(t.edge), [body])


class SymSlice(SymMulticat):
    """``Q+``: objects are arrows of ``Q`` (with ``elt(Q)`` as category),
    arrows are configurations.

    Size of a configuration: its node count plus the sizes of its node
    labels; a bare edge has the size of its domain object.
    """

    def __init__(self, q: SymMulticat):
        self.q = q
        self.category = EltCategory(q)
        self._values: Dict[Any, Any] = {}
        self._preorder_labels: Dict[Any, tuple] = {}
        self._substitutions: Dict[Any, tuple] = {}
        self._trees: Dict[Any, list] = {}
        self._arrows: Dict[Any, list] = {}
        self._shared: Dict[Any, Any] = {}

    @staticmethod
    def _remember(cache: dict, key, value, limit: int = 200_000):
        if len(cache) > limit:
            cache.clear()
        cache[key] = value
        return value

    def _configuration(self, tree, rho, tau) -> SymConfiguration:
        """Build a configuration sharing equal trees and permutations, which
        keeps large isomorphism classes compact in memory."""
        shared = self._shared
        if len(shared) > 1_000_000:
            shared.clear()
        tree = shared.setdefault(tree, tree)
        rho = shared.setdefault(rho, rho)
        tau = shared.setdefault(tau, tau)
        return SymConfiguration(tree, rho, tau)

    # structure -----------------------------------------------------------

    def labels(self, c: SymConfiguration) -> tuple:
        """Node labels in source order."""
        pre = self._preorder_labels.get(c.tree)
        if pre is None:
            pre = self._remember(self._preorder_labels, c.tree, tuple(n.label for _, n in nodes(c.tree)))
        out = [None] * len(pre)
        for i, v in enumerate(c.tau._img):
            out[v] = pre[i]
        return tuple(out)

    def target_of(self, c: SymConfiguration):
        """The evaluated tree (cached per tree) acted on by ``rho``."""
        value = self._values.get(c.tree)
        if value is None:
            value = self._remember(self._values, c.tree, evaluate_tree(self.q, c.tree))
        return value if c.rho.is_identity() else self.q.act(value, c.rho)

    def profile(self, c):
        return Profile(self.labels(c), self.target_of(c))

    def size(self, c):
        return self.tree_size(c.tree)

    def tree_size(self, t) -> int:
        if isinstance(t, Leaf):
            return self.category.base.size(self.category.base.dom(t.edge))
        return _labelled_size(t, self.q.size)

    def iota(self, alpha: EltMorphism):
        tree = Node(alpha.dom, alpha.output, tuple(Leaf(a) for a in alpha.inputs))
        return SymConfiguration(tree, alpha.sigma, Permutation.identity(1))

    def act(self, c, sigma):
        inv = sigma.inverse()._img
        return self._configuration(c.tree, c.rho, Permutation._raw(tuple(inv[v] for v in c.tau._img)))

    def compose_at(self, c1, m, c2):
        i = c1.tau._img.index(m - 1)
        # the tree part depends only on the two trees, the node and the twist
        key = (c1.tree, i, c2.tree, c2.rho)
        hit = self._substitutions.get(key)
        if hit is None:
            pos = nodes(c1.tree)[i][0]
            hit = _substitute(c1.tree, pos, c2.tree, c2.rho, self.category.base.compose)
            self._remember(self._substitutions, key, hit)
        tree, origins, leaf_origin = hit
        n2 = c2.tau.size
        t1, t2 = c1.tau._img, c2.tau._img
        tau = []
        for side, k in origins:
            if side == "o":
                v = t1[k - 1]
                tau.append(v if v < m - 1 else v + n2 - 1)
            else:
                tau.append(m - 1 + t2[k - 1])
        return self._configuration(tree, _retwist(c1.rho, leaf_origin), Permutation._raw(tuple(tau)))

    # enumeration ---------------------------------------------------------

    def trees_into(self, y, budget: int) -> list:
        """Trees whose root edge ends at ``y`` with labelled size <= budget
        (leaves cost nothing)."""
        key = (y, budget)
        hit = self._trees.get(key)
        if hit is not None:
            return hit
        base = self.category.base
        q = self.q
        out = []
        ins = base.hom_in(y)
        for a in ins:
            out.append(Leaf(a))
        if budget >= 1:
            for a in ins:
                for f in q.arrows_by_target(base.dom(a), budget - 1):
                    rest = budget - 1 - q.size(f)
                    if rest < 0:
                        continue
                    for kids in self._kid_tuples(q.source(f), rest):
                        out.append(Node(f, a, kids))
        self._trees[key] = out
        return out

    def _kid_tuples(self, targets, budget):
        if not targets:
            yield ()
            return
        for t in self.trees_into(targets[0], budget):
            s = _labelled_size(t, self.q.size)
            for tail in self._kid_tuples(targets[1:], budget - s):
                yield (t,) + tail

    def trees(self, bound: int) -> list:
        base = self.category.base
        q = self.q
        out = []
        for x in base.objects(bound):
            if base.size(x) <= bound:
                for a in base.hom_out(x):
                    out.append(Leaf(a))
        if bound >= 1:
            for f in q.arrows(bound - 1):
                rest = bound - 1 - q.size(f)
                for a in base.hom_out(q.target(f)):
                    for kids in self._kid_tuples(q.source(f), rest):
                        out.append(Node(f, a, kids))
        return out

    def arrows(self, bound=None):
        if bound is None:
            raise ValueError("slices are infinite in general; give a size bound")
        hit = self._arrows.get(bound)
        if hit is None:
            hit = []
            for t in self.trees(bound):
                n, k = node_count(t), leaf_count(t)
                for rho in all_perms(k):
                    for tau in all_perms(n):
                        hit.append(SymConfiguration(t, rho, tau))
            self._arrows[bound] = hit
        return hit


def _labelled_size(t, size_fn) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + size_fn(t.label) + sum(_labelled_size(c, size_fn) for c in t.children)


def slice_sym(q: SymMulticat) -> SymSlice:
    return SymSlice(q)


# --------------------------------------------------------------------------
# generalised slice


class GenSlice(GenMulticat):
    """``M+``: objects are arrows of ``M``; arrows are planar trees with
    edges labelled by objects, ordered in preorder, with the leaf ordering
    obtained by composing in ``M``."""

    def __init__(self, m: GenMulticat):
        self.m = m
        self._eval: Dict[Any, Tuple[Any, Permutation]] = {}
        self._trees: Dict[Any, list] = {}
        self._arrows: Dict[Any, list] = {}

    def objects(self, bound=None):
        return self.m.arrows(bound)

    def object_size(self, f):
        return self.m.size(f)

    def size(self, t):
        if isinstance(t, Leaf):
            return self.m.object_size(t.edge)
        return _labelled_size(t, self.m.size)

    def source(self, t):
        return tuple(n.label for _, n in nodes(t))

    def evaluate(self, t) -> Tuple[Any, Permutation]:
        """The composite in ``M`` and the leaf ordering ``rho_T``."""
        hit = self._eval.get(t)
        if hit is None:
            if isinstance(t, Leaf):
                hit = (self.m.identity(t.edge), Permutation.identity(1))
            else:
                h, tags = self._eval_node(t, 0)
                hit = (h, Permutation._raw(tuple(tags)))
            self._eval[t] = hit
        return hit

    def _eval_node(self, t, offset):
        m = self.m
        kids = t.children
        offsets = []
        acc = offset
        for c in kids:
            offsets.append(acc)
            acc += leaf_count(c)
        cur = t.label
        tags: List[Any] = [("slot", j) for j in range(len(kids))]
        for j in range(len(kids) - 1, -1, -1):
            c = kids[j]
            p = tags.index(("slot", j)) + 1
            if isinstance(c, Leaf):
                tags[p - 1] = offsets[j]
                continue
            h, sub = self._eval_node(c, offsets[j])
            comp = m.compose(cur, p, h)
            tags = list(comp.chi.apply(splice(tags, p, sub)))
            cur = comp.result
        return cur, tags

    def target(self, t):
        return self.evaluate(t)[0]

    def rho(self, t) -> Permutation:
        return self.evaluate(t)[1]

    def identity(self, f):
        m = self.m
        return Node(f, m.target(f), tuple(Leaf(x) for x in m.source(f)))

    def compose(self, t1, p, t2):
        ns = nodes(t1)
        pos = ns[p - 1][0]
        tree, origins, _ = _substitute(t1, pos, t2, self.rho(t2), _keep_inner)
        n1, n2 = len(ns), node_count(t2)
        z = splice([("o", i) for i in range(1, n1 + 1)], p, [("i", i) for i in range(1, n2 + 1)])
        where = {tag: i for i, tag in enumerate(z)}
        chi = Permutation._raw(tuple(where[o] for o in origins))
        return GenComposition(t1, p, t2, tree, chi, n1)

    # enumeration ---------------------------------------------------------

    def trees_into(self, x, budget: int) -> list:
        key = (x, budget)
        hit = self._trees.get(key)
        if hit is not None:
            return hit
        m = self.m
        out = [Leaf(x)]
        if budget >= 1:
            for f in m.arrows_by_target(x, budget - 1):
                rest = budget - 1 - m.size(f)
                if rest < 0:
                    continue
                for kids in self._kid_tuples(m.source(f), rest):
                    out.append(Node(f, x, kids))
        self._trees[key] = out
        return out

    def _kid_tuples(self, targets, budget):
        if not targets:
            yield ()
            return
        for t in self.trees_into(targets[0], budget):
            s = _labelled_size(t, self.m.size)
            for tail in self._kid_tuples(targets[1:], budget - s):
                yield (t,) + tail

    def arrows(self, bound=None):
        if bound is None:
            raise ValueError("slices are infinite in general; give a size bound")
        hit = self._arrows.get(bound)
        if hit is None:
            m = self.m
            hit = [Leaf(x) for x in m.objects(bound) if m.object_size(x) <= bound]
            if bound >= 1:
                for f in m.arrows(bound - 1):
                    rest = bound - 1 - m.size(f)
                    for kids in self._kid_tuples(m.source(f), rest):
                        hit.append(Node(f, m.target(f), kids))
            self._arrows[bound] = hit
        return hit


def slice_gen(m: GenMulticat) -> GenSlice:
    return GenSlice(m)


# --------------------------------------------------------------------------
# comparison morphism


def phi_plus(phi: SymMorphism, domain: Optional[SymSlice] = None, codomain: Optional[XiMulticat] = None) -> SymMorphism:
    """From ``phi: Q -> xi(M)`` build ``Q+ -> xi(M+)``.

    A node labelled ``f`` with ``phi(f) = (g, sigma)`` becomes a node
    labelled ``g`` whose input ``j`` carries the old input ``sigma(j)``;
    edge labels become objects of ``M``.  The configuration ``(T, rho,
    tau)`` goes to ``(T', tau o tau_T'^-1)``, nodes of ``T`` and ``T'``
    being identified.
    """
    q = phi.domain
    target = phi.codomain
    if not isinstance(target, XiMulticat):
        raise TypeError("the codomain must be a symmetrisation")
    m = target.base
    dom = domain if domain is not None else SymSlice(q)
    cod = codomain if codomain is not None else XiMulticat(GenSlice(m))
    cache: Dict[Any, XiArrow] = {}

    def on_object(f):
        return phi.on_arrow(f).base

    def on_morphism(alpha):
        return Identity(on_object(alpha.dom))

    def rebuild(t, edge_object, counter):
        if isinstance(t, Leaf):
            return Leaf(edge_object), []
        counter[0] += 1
        mine = counter[0]
        img = phi.on_arrow(t.label)
        g, sigma = img.base, img.sigma
        src = m.source(g)
        # old children are numbered in old preorder before reordering
        old = []
        for c in t.children:
            start = counter[0]
            counter[0] += node_count(c)
            old.append(start)
        kids, order = [], [mine]
        for j in range(1, len(t.children) + 1):
            c = t.children[sigma(j) - 1]
            sub_counter = [old[sigma(j) - 1]]
            new_c, sub_order = rebuild(c, src[j - 1], sub_counter)
            kids.append(new_c)
            order.extend(sub_order)
        return Node(g, edge_object, tuple(kids)), order

    def on_arrow(c: SymConfiguration):
        hit = cache.get(c)
        if hit is not None:
            return hit
        t = c.tree
        if isinstance(t, Leaf):
            base_cat = q.category
            tree = Leaf(phi.on_object(base_cat.dom(t.edge)))
            out = XiArrow(tree, Permutation.identity(0))
        else:
            root_obj = m.target(phi.on_arrow(t.label).base)
            tree, order = rebuild(t, root_obj, [0])
            tau = c.tau._img
            out = XiArrow(tree, Permutation._raw(tuple(tau[o - 1] for o in order)))
        cache[c] = out
        return out

    return SymMorphism(dom, cod, on_object, on_morphism, on_arrow)
