"""Symmetric multicategories over a category of objects.

An arrow ``f`` in ``Q(x_1, ..., x_k; x)`` acted on by ``sigma`` lies in
``Q(x_sigma(1), ..., x_sigma(k); x)``; the action is on the right, so
``act(act(f, s), t) == act(f, s * t)``.  ``iota`` sends an object-morphism
``a: x -> y`` to a unary arrow in ``Q(x; y)``.

Also here: morphisms and equivalences of symmetric multicategories and the
category of elements ``elt(Q)``, whose objects are the arrows of ``Q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .foundations import (
    Category,
    FiniteCategory,
    Permutation,
    Profile,
    ValidationReport,
    all_perms,
    block_perm,
    canonical,
    compose_perm,
    encode,
    equivalent_to_discrete,
    juxtapose_perms,
)


class SymCompositionError(ValueError):
    pass


class SymMulticat:
    """Interface for symmetric multicategories.

    Subclasses implement at least one of ``compose`` (full composition) and
    ``compose_at`` (composition at one input); each has a default in terms
    of the other.  ``arrows(bound)`` lists arrows of size at most ``bound``.
    """

    category: Category

    def arrows(self, bound: Optional[int] = None) -> Iterable[Hashable]:
        raise NotImplementedError

    def profile(self, f: Hashable) -> Profile:
        raise NotImplementedError

    def iota(self, m: Hashable) -> Hashable:
        raise NotImplementedError

    def act(self, f: Hashable, sigma: Permutation) -> Hashable:
        raise NotImplementedError

    def size(self, f: Hashable) -> int:
        return 0

    def is_finite(self) -> bool:
        return False

    # derived -------------------------------------------------------------

    def identity(self, x: Hashable) -> Hashable:
        return self.iota(self.category.identity(x))

    def source(self, f: Hashable) -> tuple:
        return self.profile(f).inputs

    def target(self, f: Hashable) -> Hashable:
        return self.profile(f).output

    def arity(self, f: Hashable) -> int:
        return len(self.profile(f).inputs)

    def compose(self, f: Hashable, gs: Sequence[Hashable]) -> Hashable:
        # compose from the right so lower positions never shift
        cur = f
        for p in range(len(gs), 0, -1):
            cur = self.compose_at(cur, p, gs[p - 1])
        return cur

    def compose_at(self, f: Hashable, p: int, g: Hashable) -> Hashable:
        args = [self.identity(x) for x in self.source(f)]
        args[p - 1] = g
        return self.compose(f, args)

    def arrows_by_target(self, x: Hashable, bound: Optional[int] = None) -> List[Hashable]:
        cache = self.__dict__.setdefault("_by_target", {})
        if bound not in cache:
            table: Dict[Hashable, List[Hashable]] = {}
            for f in self.arrows(bound):
                table.setdefault(self.target(f), []).append(f)
            cache[bound] = table
        return cache[bound].get(x, [])

    def arrows_by_profile(self, bound: Optional[int] = None) -> Dict[Profile, List[Hashable]]:
        table: Dict[Profile, List[Hashable]] = {}
        for f in self.arrows(bound):
            table.setdefault(self.profile(f), []).append(f)
        return table


def sym_compose(q: SymMulticat, f: Hashable, gs: Sequence[Hashable]) -> Hashable:
    src = q.source(f)
    if len(gs) != len(src):
        raise SymCompositionError(f"arrow {f!r} has arity {len(src)} but {len(gs)} arguments were given")
    for i, (g, x) in enumerate(zip(gs, src), 1):
        if q.target(g) != x:
            raise SymCompositionError(f"position {i}: target {q.target(g)!r} does not match source {x!r}")
    return q.compose(f, list(gs))


def sym_act(q: SymMulticat, f: Hashable, sigma: Permutation) -> Hashable:
    if sigma.size != q.arity(f):
        raise SymCompositionError(f"permutation of size {sigma.size} on an arrow of arity {q.arity(f)}")
    return q.act(f, sigma)


class FiniteSymMulticat(SymMulticat):
    """A symmetric multicategory given by explicit tables.

    ``compositions`` maps ``(f, (g_1, ..., g_k))`` to the full composite;
    ``actions`` maps ``(f, sigma)`` to ``f sigma``; identity actions may be
    omitted.  ``truncated_at`` marks a table cut out of a larger instance
    at a size bound (see ``FiniteGenMulticat``).
    """

    def __init__(
        self,
        category: FiniteCategory,
        arrows: Mapping[str, Profile],
        iota: Mapping[str, str],
        compositions: Mapping[Tuple[str, Tuple[str, ...]], str],
        actions: Mapping[Tuple[str, Permutation], str],
        truncated_at: Optional[int] = None,
    ):
        self.category = category
        self.profiles = dict(arrows)
        self.iota_table = dict(iota)
        self.compositions = dict(compositions)
        self.actions = dict(actions)
        self.truncated_at = truncated_at

    def arrows(self, bound=None):
        return sorted(self.profiles)

    def profile(self, f):
        return self.profiles[f]

    def iota(self, m):
        return self.iota_table[m]

    def compose(self, f, gs):
        try:
            return self.compositions[(f, tuple(gs))]
        except KeyError:
            raise SymCompositionError(f"no composite recorded for {f} o {list(gs)}") from None

    def act(self, f, sigma):
        if sigma.is_identity() and (f, sigma) not in self.actions:
            return f
        try:
            return self.actions[(f, sigma)]
        except KeyError:
            raise SymCompositionError(f"no action recorded for {f} . {sigma.encode()}") from None

    def is_finite(self) -> bool:
        return True

    def encode(self) -> dict:
        doc = {
            "category": self.category.encode(),
            "arrows": [
                {"id": f, "source": list(p.inputs), "target": p.output}
                for f, p in sorted(self.profiles.items())
            ],
            "iota": [{"objMorphism": m, "arrow": a} for m, a in sorted(self.iota_table.items())],
            "compose": [
                {"f": f, "args": list(gs), "result": r} for (f, gs), r in sorted(self.compositions.items())
            ],
            "action": [
                {"f": f, "sigma": s.encode(), "result": r}
                for (f, s), r in sorted(self.actions.items(), key=lambda kv: (kv[0][0], kv[0][1].zero_based))
            ],
        }
        if self.truncated_at is not None:
            doc["truncatedAt"] = self.truncated_at
        return doc

    @classmethod
    def decode(cls, doc: dict) -> "FiniteSymMulticat":
        category = FiniteCategory.decode(doc["category"])
        arrows = {a["id"]: Profile(tuple(a["source"]), a["target"]) for a in doc["arrows"]}
        iota = {e["objMorphism"]: e["arrow"] for e in doc.get("iota", [])}
        comps = {(e["f"], tuple(e["args"])): e["result"] for e in doc.get("compose", [])}
        acts = {
            (e["f"], Permutation(e["sigma"], zero_based=True)): e["result"] for e in doc.get("action", [])
        }
        return cls(category, arrows, iota, comps, acts, doc.get("truncatedAt"))


def materialize_sym(q: SymMulticat, bound: Optional[int] = None) -> FiniteSymMulticat:
    """Table form of a finite (or bounded) instance.

    Objects, morphisms and arrows are renamed by their canonical encodings
    when they are not already strings; composites leaving the bound are
    dropped.
    """

    def name(v):
        return v if isinstance(v, str) else canonical(v)

    c = q.category
    objs = list(c.objects(bound))
    morphisms = {}
    for x in objs:
        for m in c.hom_out(x):
            morphisms[name(m)] = (name(c.dom(m)), name(c.cod(m)), m)
    table = {}
    for _, (_, _, m) in morphisms.items():
        for n in c.hom_out(c.cod(m)):
            mn = c.compose(n, m)
            if mn is not None:
                table[(name(n), name(m))] = name(mn)
    category = FiniteCategory(
        [name(x) for x in objs],
        {k: (d, cd) for k, (d, cd, _) in morphisms.items()},
        {name(x): name(c.identity(x)) for x in objs},
        table,
    )
    arrows = list(q.arrows(bound))
    present = set(arrows)
    profiles = {
        name(f): Profile(tuple(name(x) for x in q.source(f)), name(q.target(f))) for f in arrows
    }
    iota = {k: name(q.iota(m)) for k, (_, _, m) in morphisms.items()}
    comps = {}
    for f in arrows:
        choices = [q.arrows_by_target(x, bound) for x in q.source(f)]
        for gs in itertools.product(*choices):
            r = q.compose(f, list(gs))
            if r in present:
                comps[(name(f), tuple(name(g) for g in gs))] = name(r)
    acts = {}
    for f in arrows:
        for s in all_perms(q.arity(f)):
            r = q.act(f, s)
            if r in present:
                acts[(name(f), s)] = name(r)
    truncated = None if q.is_finite() else bound
    return FiniteSymMulticat(category, profiles, iota, comps, acts, truncated)


def terminal_sym() -> FiniteSymMulticat:
    """One object, one object-morphism and one (identity) arrow."""
    cat = FiniteCategory.discrete(["*"])
    one = Permutation.identity(1)
    return FiniteSymMulticat(
        cat,
        {"1": Profile(("*",), "*")},
        {"1_*": "1"},
        {("1", ("1",)): "1"},
        {("1", one): "1"},
    )


# --------------------------------------------------------------------------
# axioms


def _tuples(q: SymMulticat, targets: Sequence[Hashable], bound, budget) -> Iterator[tuple]:
    """Tuples ``(g_1..g_k)`` with ``target(g_i) = targets[i]`` and total size
    within ``budget`` (``None`` means unlimited)."""
    if not targets:
        yield ()
        return
    first, rest = targets[0], targets[1:]
    for g in q.arrows_by_target(first, bound):
        s = q.size(g)
        if budget is not None and s > budget:
            continue
        for tail in _tuples(q, rest, bound, None if budget is None else budget - s):
            yield (g,) + tail


def check_sym_axioms(q: SymMulticat, bound: Optional[int] = None) -> ValidationReport:
    """Exhaustive check of the typing data and the six axioms.

    For lazily generated instances only instances whose total arrow size is
    at most ``bound`` are visited; finite tables are checked completely.
    """
    report = ValidationReport()
    finite = q.is_finite()
    partial = getattr(q, "truncated_at", None) is not None
    c = q.category
    arrows = list(q.arrows(bound))

    def budget_after(*fs):
        if finite or bound is None:
            return None
        return bound - sum(q.size(f) for f in fs)

    def attempt(law, key, fn):
        try:
            return fn()
        except (SymCompositionError, KeyError) as exc:
            if not partial:
                report.add(law + "/undefined", key, str(exc))
            return None

    objects = list(c.objects(bound))
    # iota typing and Axiom 6 (iota is a functor)
    for x in objects:
        for a in c.hom_out(x):
            ia = attempt("iota", a, lambda: q.iota(a))
            if ia is None:
                continue
            if q.profile(ia) != Profile((c.dom(a),), c.cod(a)):
                report.add("iota-typing", a, f"profile {q.profile(ia)!r}")
            for b in c.hom_out(c.cod(a)):
                report.checked += 1
                ib = attempt("iota", b, lambda: q.iota(b))
                ba = c.compose(b, a)
                if ib is None or ba is None:
                    continue
                lhs = attempt("axiom6", [b, a], lambda: q.iota(ba))
                rhs = attempt("axiom6", [b, a], lambda: q.compose(ib, [ia]))
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("axiom6", [b, a], "iota(b o a) != iota(b) o iota(a)")

    for f in arrows:
        prof = q.profile(f)
        k = prof.arity
        # Data 5 typing, Axiom 3 and the unit of the action
        perms = all_perms(k)
        acted = {}
        for s in perms:
            r = attempt("action", [f, s], lambda: q.act(f, s))
            acted[s] = r
            if r is None:
                continue
            if q.profile(r) != Profile(s.apply(prof.inputs), prof.output):
                report.add("action-typing", [f, s], f"profile {q.profile(r)!r}")
        if acted.get(Permutation.identity(k)) not in (f, None):
            report.add("action-unit", f, "f . identity != f")
        for s in perms:
            if acted[s] is None:
                continue
            for t in perms:
                report.checked += 1
                lhs = attempt("axiom3", [f, s, t], lambda: q.act(acted[s], t))
                if lhs is not None and lhs != acted[compose_perm(s, t)]:
                    report.add("axiom3", [f, s, t], "(f s) t != f (s t)")
        # Axiom 1: units
        ids = attempt("axiom1", f, lambda: [q.identity(x) for x in prof.inputs])
        if ids is not None:
            right = attempt("axiom1", f, lambda: q.compose(f, ids))
            if right is not None and right != f:
                report.add("axiom1-right", f, "f o (1, ..., 1) != f")
            left = attempt("axiom1", f, lambda: q.compose(q.identity(prof.output), [f]))
            if left is not None and left != f:
                report.add("axiom1-left", f, "1 o f != f")
        report.checked += 1

    for f in arrows:
        prof = q.profile(f)
        k = prof.arity
        for gs in _tuples(q, prof.inputs, bound, budget_after(f)):
            fg = attempt("composition", [f, gs], lambda: q.compose(f, list(gs)))
            if fg is None:
                continue
            report.checked += 1
            expected = Profile(
                tuple(x for g in gs for x in q.source(g)), prof.output
            )
            if q.profile(fg) != expected:
                report.add("composition-typing", [f, gs], f"profile {q.profile(fg)!r}")
                continue
            arities = [q.arity(g) for g in gs]
            # Axiom 4: (f s) o (g_s(1), ..., g_s(k)) = (f o g) . block(s)
            for s in all_perms(k):
                report.checked += 1
                lhs = attempt("axiom4", [f, gs, s], lambda: q.compose(q.act(f, s), list(s.apply(gs))))
                rhs = attempt("axiom4", [f, gs, s], lambda: q.act(fg, block_perm(s, arities)))
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("axiom4", [f, gs, s], f"{lhs!r} != {rhs!r}")
            # Axiom 5: f o (g_i s_i) = (f o g) . juxtapose(s_i)
            for ss in itertools.product(*(all_perms(n) for n in arities)):
                if all(s.is_identity() for s in ss):
                    continue
                report.checked += 1
                lhs = attempt(
                    "axiom5", [f, gs, ss], lambda: q.compose(f, [q.act(g, s) for g, s in zip(gs, ss)])
                )
                rhs = attempt("axiom5", [f, gs, ss], lambda: q.act(fg, juxtapose_perms(ss)))
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("axiom5", [f, gs, ss], f"{lhs!r} != {rhs!r}")
            # Axiom 2: associativity
            inner_targets = [x for g in gs for x in q.source(g)]
            for hs in _tuples(q, inner_targets, bound, budget_after(f, *gs)):
                report.checked += 1
                lhs = attempt("axiom2", [f, gs, hs], lambda: q.compose(fg, list(hs)))

                def inner_first(hs=hs):
                    pieces, offset = [], 0
                    for g, n in zip(gs, arities):
                        pieces.append(q.compose(g, list(hs[offset : offset + n])))
                        offset += n
                    return q.compose(f, pieces)

                rhs = attempt("axiom2", [f, gs, hs], inner_first)
                if lhs is not None and rhs is not None and lhs != rhs:
                    report.add("axiom2", [f, gs, hs], f"{lhs!r} != {rhs!r}")
    return report


# --------------------------------------------------------------------------
# category of elements


@dataclass(frozen=True)
class EltMorphism:
    """``(sigma, f_1..f_m; f)`` out of the arrow ``dom``.

    It sends ``dom`` to ``(iota(f) o dom o (iota(f_1), ..., iota(f_m))) sigma``;
    here ``f_i`` ends at the ``i``-th source of ``dom`` and ``f`` starts at
    its target.  ``cod`` is cached and excluded from equality.
    """

    dom: Any
    sigma: Permutation
    inputs: Tuple[Any, ...]
    output: Any
    cod: Any = field(default=None, compare=False)

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.dom, self.sigma, self.inputs, self.output))
            object.__setattr__(self, "_h", h)
        return h

    def encode(self) -> dict:
        return {
            "dom": encode(self.dom),
            "sigma": self.sigma.encode(),
            "inputs": [encode(m) for m in self.inputs],
            "output": encode(self.output),
        }


class EltCategory(Category):
    """``elt(Q)``: objects are arrows of ``Q``; morphisms are ``EltMorphism``s."""

    def __init__(self, q: SymMulticat):
        self.q = q
        self.base = q.category

    def objects(self, bound=None):
        return self.q.arrows(bound)

    def size(self, g):
        return self.q.size(g)

    def act_on(self, g, sigma, inputs, output):
        """``(iota(output) o g o (iota(inputs))) sigma``; identity pieces are
        skipped, which the unit laws make harmless."""
        q, c = self.q, self.base
        h = g
        for i in range(len(inputs) - 1, -1, -1):
            if not c.is_identity(inputs[i]):
                h = q.compose_at(h, i + 1, q.iota(inputs[i]))
        if not c.is_identity(output):
            h = q.compose_at(q.iota(output), 1, h)
        return h if sigma.is_identity() else q.act(h, sigma)

    def morphism(self, g, sigma, inputs, output) -> EltMorphism:
        inputs = tuple(inputs)
        return EltMorphism(g, sigma, inputs, output, self.act_on(g, sigma, inputs, output))

    def dom(self, m):
        return m.dom

    def cod(self, m):
        return m.cod

    def identity(self, g):
        cache = self.__dict__.setdefault("_identities", {})
        hit = cache.get(g)
        if hit is None:
            prof = self.q.profile(g)
            c = self.base
            hit = EltMorphism(
                g, Permutation.identity(prof.arity), tuple(c.identity(x) for x in prof.inputs), c.identity(prof.output), g
            )
            if len(cache) > 10_000:
                cache.clear()
            cache[g] = hit
        return hit

    def compose(self, beta, alpha):
        """``beta o alpha``: first ``alpha``, then ``beta``."""
        if beta.dom != alpha.cod:
            return None
        if self.is_identity(alpha):
            return beta
        if self.is_identity(beta):
            return alpha
        c = self.base
        s, s2 = alpha.sigma, beta.sigma
        sinv = s.inverse()
        inputs = []
        for j in range(1, s.size + 1):
            m = c.compose(alpha.inputs[j - 1], beta.inputs[sinv(j) - 1])
            if m is None:
                return None
            inputs.append(m)
        out = c.compose(beta.output, alpha.output)
        if out is None:
            return None
        return EltMorphism(alpha.dom, compose_perm(s, s2), tuple(inputs), out, beta.cod)

    def hom_out(self, g):
        cache = self.__dict__.setdefault("_hom_out", {})
        if g in cache:
            return cache[g]
        prof = self.q.profile(g)
        c = self.base
        ins = [c.hom_in(x) for x in prof.inputs]
        outs = c.hom_out(prof.output)
        result = []
        for s in all_perms(prof.arity):
            for fs in itertools.product(*ins):
                for f in outs:
                    result.append(self.morphism(g, s, fs, f))
        if len(cache) > 200_000:
            cache.clear()
        cache[g] = result
        return result

    def inverse(self, m):
        known = m.__dict__.get("_inverse")
        if known is None:
            known = self._inverse(m)
            object.__setattr__(m, "_inverse", known)
        return known

    def _inverse(self, m):
        c = self.base
        out = c.inverse(m.output)
        if out is None:
            return None
        s = m.sigma
        inputs = []
        for i in range(1, s.size + 1):
            inv = c.inverse(m.inputs[s(i) - 1])
            if inv is None:
                return None
            inputs.append(inv)
        return EltMorphism(m.cod, s.inverse(), tuple(inputs), out, m.dom)

    def is_identity(self, m):
        known = m.__dict__.get("_is_identity")
        if known is None:
            c = self.base
            known = (
                m.sigma.is_identity()
                and all(c.is_identity(a) for a in m.inputs)
                and c.is_identity(m.output)
            )
            object.__setattr__(m, "_is_identity", known)
        return known

    def generators_out(self, g):
        """Adjacent transpositions and single generator relabellings; they
        generate every morphism out of ``g`` when the base is a groupoid."""
        cache = self.__dict__.setdefault("_generators", {})
        hit = cache.get(g)
        if hit is None:
            hit = self._generators_out(g)
            if len(cache) > 10_000:
                cache.clear()
            cache[g] = hit
        return hit

    def _generators_out(self, g):
        prof = self.q.profile(g)
        c = self.base
        k = prof.arity
        ident = Permutation.identity(k)
        id_in = tuple(c.identity(x) for x in prof.inputs)
        id_out = c.identity(prof.output)
        gens = []
        for i in range(1, k):
            gens.append(self.morphism(g, Permutation.transposition(k, i), id_in, id_out))
        for i, x in enumerate(prof.inputs):
            for a in c.generators_out(x):
                inv = c.inverse(a)
                if inv is None:
                    continue
                fs = list(id_in)
                fs[i] = inv
                gens.append(self.morphism(g, ident, fs, id_out))
        for a in c.generators_out(prof.output):
            gens.append(self.morphism(g, ident, id_in, a))
        return gens


def elt_category(q: SymMulticat) -> EltCategory:
    return EltCategory(q)


# --------------------------------------------------------------------------
# morphisms and equivalences


class SymMorphism:
    """``F: Q -> R``: a functor on objects and a map on arrows.

    Maps are callables; ``on_morphism`` acts on object-morphisms.
    """

    def __init__(self, domain: SymMulticat, codomain: SymMulticat, on_object, on_morphism, on_arrow):
        self.domain = domain
        self.codomain = codomain
        self.on_object = on_object
        self.on_morphism = on_morphism
        self.on_arrow = on_arrow

    @classmethod
    def identity(cls, q: SymMulticat) -> "SymMorphism":
        same = lambda v: v  # noqa: E731
        return cls(q, q, same, same, same)

    @classmethod
    def from_tables(cls, domain, codomain, objects: Mapping, morphisms: Mapping, arrows: Mapping) -> "SymMorphism":
        return cls(domain, codomain, objects.__getitem__, morphisms.__getitem__, arrows.__getitem__)


def compose_sym_morphisms(F: SymMorphism, G: SymMorphism) -> SymMorphism:
    """``G o F``."""
    return SymMorphism(
        F.domain,
        G.codomain,
        lambda x: G.on_object(F.on_object(x)),
        lambda m: G.on_morphism(F.on_morphism(m)),
        lambda f: G.on_arrow(F.on_arrow(f)),
    )


def check_sym_morphism(F: SymMorphism, bound: Optional[int] = None) -> ValidationReport:
    """Functoriality on objects and preservation of typing, iota,
    composition and the symmetric action, within ``bound``."""
    q, r = F.domain, F.codomain
    c, d = q.category, r.category
    report = ValidationReport()

    def safe(law, key, fn):
        try:
            return fn()
        except (KeyError, TypeError, ValueError) as exc:
            report.add(law, key, f"undefined: {exc}")
            return None

    for x in c.objects(bound):
        fx = safe("object-map", x, lambda: F.on_object(x))
        if fx is None:
            continue
        if safe("functor-identity", x, lambda: F.on_morphism(c.identity(x))) != d.identity(fx):
            report.add("functor-identity", x)
        for a in c.hom_out(x):
            report.checked += 1
            fa = safe("morphism-map", a, lambda: F.on_morphism(a))
            if fa is None:
                continue
            if d.dom(fa) != F.on_object(c.dom(a)) or d.cod(fa) != F.on_object(c.cod(a)):
                report.add("functor-typing", a)
                continue
            if F.on_arrow(q.iota(a)) != r.iota(fa):
                report.add("iota", a, "F(iota(a)) != iota(F a)")
            for b in c.hom_out(c.cod(a)):
                ba = c.compose(b, a)
                if ba is not None and F.on_morphism(ba) != d.compose(F.on_morphism(b), fa):
                    report.add("functor-composition", [b, a])
    finite = q.is_finite()
    for f in q.arrows(bound):
        report.checked += 1
        ff = safe("arrow-map", f, lambda: F.on_arrow(f))
        if ff is None:
            continue
        prof = q.profile(f)
        expected = Profile(tuple(F.on_object(x) for x in prof.inputs), F.on_object(prof.output))
        if r.profile(ff) != expected:
            report.add("arrow-typing", f, f"{r.profile(ff)!r} != {expected!r}")
            continue
        for s in all_perms(prof.arity):
            if F.on_arrow(q.act(f, s)) != r.act(ff, s):
                report.add("action", [f, s], "F(f s) != (F f) s")
        budget = None if (finite or bound is None) else bound - q.size(f)
        for gs in _tuples(q, prof.inputs, bound, budget):
            report.checked += 1
            lhs = safe("composition", [f, gs], lambda: F.on_arrow(q.compose(f, list(gs))))
            rhs = safe("composition", [f, gs], lambda: r.compose(ff, [F.on_arrow(g) for g in gs]))
            if lhs != rhs:
                report.add("composition", [f, gs], "F(f o g) != Ff o Fg")
    return report


@dataclass
class EquivalenceReport:
    essentially_surjective: bool
    full_faithful_on_objects: bool
    arrow_bijections: Dict[Profile, bool]
    bound: Optional[int]
    failures: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.essentially_surjective
            and self.full_faithful_on_objects
            and all(self.arrow_bijections.values())
            and not self.failures
        )

    def encode(self) -> dict:
        return {
            "ok": self.ok,
            "bound": self.bound,
            "essentiallySurjective": self.essentially_surjective,
            "fullFaithfulOnObjects": self.full_faithful_on_objects,
            "arrowBijections": {
                "checked": len(self.arrow_bijections),
                "failed": sorted(canonical(p) for p, ok in self.arrow_bijections.items() if not ok),
            },
            "failures": list(self.failures),
            **{k: encode(v) for k, v in sorted(self.extra.items())},
        }


def isomorphic(c: Category, x: Hashable, y: Hashable) -> bool:
    if x == y:
        return True
    return any(c.cod(m) == y and c.inverse(m) is not None for m in c.hom_out(x))


def check_sym_equivalence(F: SymMorphism, bound: Optional[int] = None) -> EquivalenceReport:
    """Bounded check that ``F`` is an equivalence.

    The object functor must be essentially surjective, full and faithful on
    objects of size at most ``bound``; for each profile of domain arrows of
    size at most ``bound`` the arrow map must be a bijection onto the
    codomain arrows (of size at most ``bound``) of the image profile.  The
    size-bounded comparison is exact when ``F`` preserves arrow sizes.
    """
    q, r = F.domain, F.codomain
    c, d = q.category, r.category
    failures: List[str] = []
    dom_objects = list(c.objects(bound))
    images = [F.on_object(x) for x in dom_objects]
    image_set = set(images)

    surjective = True
    for y in d.objects(bound):
        if y in image_set:
            continue
        if not any(isomorphic(d, y, fx) for fx in image_set):
            surjective = False
            failures.append(f"object {canonical(y)} is not isomorphic to an image")
            break

    fully_faithful = True
    for x, fx in zip(dom_objects, images):
        by_cod: Dict[Hashable, List[Hashable]] = {}
        for a in c.hom_out(x):
            by_cod.setdefault(c.cod(a), []).append(a)
        hom_d: Dict[Hashable, List[Hashable]] = {}
        for b in d.hom_out(fx):
            hom_d.setdefault(d.cod(b), []).append(b)
        for x2, fx2 in zip(dom_objects, images):
            src = by_cod.get(x2, [])
            mapped = [F.on_morphism(a) for a in src]
            if len(set(mapped)) != len(mapped):
                fully_faithful = False
                failures.append(f"not faithful on hom({canonical(x)}, {canonical(x2)})")
            if set(mapped) != set(hom_d.get(fx2, [])):
                fully_faithful = False
                failures.append(f"not full on hom({canonical(x)}, {canonical(x2)})")
            if not fully_faithful:
                break
        if not fully_faithful:
            break

    bijections: Dict[Profile, bool] = {}
    dom_by_profile = q.arrows_by_profile(bound)
    cod_by_profile = r.arrows_by_profile(bound)
    for prof, arrows in sorted(dom_by_profile.items(), key=lambda kv: canonical(kv[0])):
        image_prof = Profile(tuple(F.on_object(x) for x in prof.inputs), F.on_object(prof.output))
        mapped = [F.on_arrow(f) for f in arrows]
        ok = len(set(mapped)) == len(mapped) and set(mapped) == set(cod_by_profile.get(image_prof, []))
        bijections[prof] = ok
        if not ok and len(failures) < 20:
            failures.append(f"arrow map on profile {canonical(prof)} is not a bijection")
    # codomain profiles whose objects are images but that have no domain arrows
    covered = {
        Profile(tuple(F.on_object(x) for x in p.inputs), F.on_object(p.output)) for p in dom_by_profile
    }
    pre_objects = {}
    for x, fx in zip(dom_objects, images):
        pre_objects.setdefault(fx, []).append(x)
    for prof, arrows in cod_by_profile.items():
        if prof in covered:
            continue
        if all(o in pre_objects for o in prof.inputs + (prof.output,)):
            # every preimage profile is empty, so this one must be too
            failures.append(f"codomain arrows on {canonical(prof)} have no preimage")
    return EquivalenceReport(surjective, fully_faithful, bijections, bound, failures)


# --------------------------------------------------------------------------
# skeleton


def skeletal(q: FiniteSymMulticat) -> Tuple[FiniteSymMulticat, SymMorphism]:
    """The full sub-multicategory on one object per isomorphism class, and
    the comparison morphism from ``q`` onto it.

    Requires the object category of ``q`` to be equivalent to a discrete
    one; every arrow is transported along the unique isomorphisms to the
    chosen representatives.
    """
    c = q.category
    ok, skeleton = equivalent_to_discrete(c)
    if not ok:
        raise ValueError("object category is not equivalent to a discrete category")
    to_rep: Dict[Hashable, Hashable] = {}
    for s in skeleton:
        to_rep[s] = c.identity(s)
        for m in c.hom_out(s):
            to_rep[c.cod(m)] = c.inverse(m)
    rep_of = {x: c.cod(m) for x, m in to_rep.items()}
    reps = set(skeleton)
    morphisms = {m: (x, x) for x in skeleton for m in [c.identity(x)]}
    sub_cat = FiniteCategory(list(skeleton), morphisms, {x: c.identity(x) for x in skeleton},
                             {(c.identity(x), c.identity(x)): c.identity(x) for x in skeleton})
    arrows = [f for f in q.arrows() if all(x in reps for x in q.source(f)) and q.target(f) in reps]
    aset = set(arrows)
    profiles = {f: q.profile(f) for f in arrows}
    iota = {c.identity(x): q.iota(c.identity(x)) for x in skeleton}
    comps = {k: v for k, v in q.compositions.items() if k[0] in aset and all(g in aset for g in k[1])}
    acts = {k: v for k, v in q.actions.items() if k[0] in aset}
    sub = FiniteSymMulticat(sub_cat, profiles, iota, comps, acts)

    def on_arrow(f):
        prof = q.profile(f)
        inner = q.compose(f, [q.iota(c.inverse(to_rep[x])) for x in prof.inputs])
        return q.compose(q.iota(to_rep[prof.output]), [inner])

    def on_morphism(a):
        # the unique morphism between representatives is the identity
        return c.identity(rep_of[c.dom(a)])

    return sub, SymMorphism(q, sub, rep_of.__getitem__, on_morphism, on_arrow)
