"""Symmetrisation: from generalised to symmetric multicategories and back.

``xi(M)`` has the objects of ``M`` (discretely) and arrows ``(f, sigma)``
with ``(f, sigma)`` in ``xi(M)(x_1..x_k; x)`` iff ``f`` has source
``(x_sigma(1), ..., x_sigma(k))``.  Its image consists, up to isomorphism, of
the object-discrete freely symmetric multicategories; ``xi_inverse``
recovers a generalised multicategory from such a one by choosing orbit
representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Dict, Hashable, List, Optional, Tuple

from .foundations import (
    DiscreteCategory,
    Identity,
    Permutation,
    Profile,
    all_perms,
    canonical,
    compose_perm,
    encode,
    equivalent_to_discrete,
)
from .genmult import FiniteGenMulticat, GenArrow, GenMorphism, GenMulticat, gen_compose, splice
from .symmult import SymMorphism, SymMulticat, check_sym_morphism


class PreconditionError(ValueError):
    """Raised with a ``witness`` when an input lies outside an operation's domain."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class XiArrow:
    base: Any
    sigma: Permutation

    def encode(self) -> dict:
        return {"base": encode(self.base), "sigma": self.sigma.encode()}


class XiMulticat(SymMulticat):
    """``xi(M)``, computed lazily from ``M``."""

    def __init__(self, base: GenMulticat):
        self.base = base
        self.category = DiscreteCategory(base.objects, base.object_size)
        self._compose_cache: Dict[tuple, XiArrow] = {}

    def is_finite(self) -> bool:
        return self.base.is_finite()

    def arrows(self, bound=None):
        for f in self.base.arrows(bound):
            for s in all_perms(self.base.arity(f)):
                yield XiArrow(f, s)

    def arrows_by_target(self, x, bound=None):
        return [XiArrow(f, s) for f in self.base.arrows_by_target(x, bound) for s in all_perms(self.base.arity(f))]

    def size(self, f):
        return self.base.size(f.base)

    def profile(self, f):
        m = self.base
        return Profile(f.sigma.inverse().apply(m.source(f.base)), m.target(f.base))

    def iota(self, a):
        # the object category is discrete: only identities
        return XiArrow(self.base.identity(a.obj), Permutation.identity(1))

    def act(self, f, sigma):
        return XiArrow(f.base, compose_perm(sigma.inverse(), f.sigma))

    def compose_at(self, f, p, g):
        key = (f, p, g)
        hit = self._compose_cache.get(key)
        if hit is not None:
            return hit
        s, t = f.sigma, g.sigma
        k, j = s.size, t.size
        pbar = s.inverse()(p)
        comp = gen_compose(self.base, f.base, pbar, g.base)
        xs = [("x", i) for i in range(1, k + 1)]
        ys = [("y", i) for i in range(1, j + 1)]
        z = splice(s.apply(xs), pbar, t.apply(ys))
        a = splice(xs, p, ys)
        where = {tag: i for i, tag in enumerate(a)}
        gamma = Permutation._raw(tuple(where[tag] for tag in comp.chi.apply(z)))
        out = XiArrow(comp.result, gamma)
        if len(self._compose_cache) > 500_000:
            self._compose_cache.clear()
        self._compose_cache[key] = out
        return out


def xi(m: GenMulticat) -> XiMulticat:
    return XiMulticat(m)


def xi_on_morphism(F: GenMorphism, domain: Optional[XiMulticat] = None, codomain: Optional[XiMulticat] = None) -> SymMorphism:
    """``(f, sigma) -> (Ff, sigma theta_f^-1)``."""
    dom = domain if domain is not None else XiMulticat(F.domain)
    cod = codomain if codomain is not None else XiMulticat(F.codomain)
    return SymMorphism(
        dom,
        cod,
        F.on_object,
        lambda a: Identity(F.on_object(a.obj)),
        lambda f: XiArrow(F.on_arrow(f.base), compose_perm(f.sigma, F.theta(f.base).inverse())),
    )


# --------------------------------------------------------------------------
# image characterisation


def fixed_point(q: SymMulticat, bound: Optional[int] = None) -> Optional[Tuple[Any, Permutation]]:
    """An arrow and a non-identity permutation fixing it, if any."""
    for f in q.arrows(bound):
        for s in all_perms(q.arity(f))[1:]:
            if q.act(f, s) == f:
                return f, s
    return None


def is_freely_symmetric(q: SymMulticat, bound: Optional[int] = None) -> bool:
    return fixed_point(q, bound) is None


def is_tidy(q: SymMulticat, bound: Optional[int] = None) -> bool:
    return is_freely_symmetric(q, bound) and equivalent_to_discrete(q.category, bound)[0]


def non_identity_morphism(q: SymMulticat, bound: Optional[int] = None):
    c = q.category
    for x in c.objects(bound):
        for m in c.hom_out(x):
            if not c.is_identity(m):
                return m
    return None


def _name(v) -> str:
    return v if isinstance(v, str) else canonical(v)


def orbit_representatives(q: SymMulticat, bound: Optional[int] = None) -> Dict[Any, Tuple[Any, Permutation]]:
    """For every arrow ``a`` the pair ``(r, sigma)`` with ``a = r sigma`` and
    ``r`` the least member of its orbit under the encoding of
    ``(source, target, id)``."""

    def key(f):
        return canonical([list(map(encode, q.source(f))), encode(q.target(f)), encode(f)])

    out: Dict[Any, Tuple[Any, Permutation]] = {}
    for f in q.arrows(bound):
        if f in out:
            continue
        orbit = {s: q.act(f, s) for s in all_perms(q.arity(f))}
        rep = min(orbit.values(), key=key)
        # rep = f s0  =>  f s = rep (s0^-1 s)
        s0 = next(s for s, a in orbit.items() if a == rep)
        s0inv = s0.inverse()
        for s, a in orbit.items():
            out[a] = (rep, compose_perm(s0inv, s))
    return out


def xi_inverse(q: SymMulticat, bound: Optional[int] = None) -> FiniteGenMulticat:
    """A generalised multicategory ``M`` with ``xi(M)`` isomorphic to ``q``.

    Arrows of ``M`` are orbit representatives; ``chi`` of a composite is the
    inverse of the permutation relating the composite in ``q`` to its
    representative.  Lazily generated ``q`` are cut off at ``bound``.
    """
    witness = non_identity_morphism(q, bound)
    if witness is not None:
        raise PreconditionError(
            f"not object-discrete: non-identity object-morphism {_name(witness)}", witness
        )
    fixed = fixed_point(q, bound)
    if fixed is not None:
        f, s = fixed
        raise PreconditionError(
            f"not freely symmetric: arrow {_name(f)} is fixed by {s.encode()}", fixed
        )
    reps = orbit_representatives(q, bound)
    rep_arrows = sorted({r for r, _ in reps.values()}, key=_name)
    arrows = [
        GenArrow(_name(r), tuple(_name(x) for x in q.source(r)), _name(q.target(r))) for r in rep_arrows
    ]
    by_target: Dict[Hashable, List[Any]] = {}
    for r in rep_arrows:
        by_target.setdefault(q.target(r), []).append(r)
    comps = {}
    for f in rep_arrows:
        for p, x in enumerate(q.source(f), 1):
            for g in by_target.get(x, []):
                h = q.compose_at(f, p, g)
                if h not in reps:
                    continue
                r, s = reps[h]
                comps[(_name(f), p, _name(g))] = (_name(r), s.inverse())
    objects = [_name(x) for x in q.category.objects(bound)]
    identities = {_name(x): _name(q.identity(x)) for x in q.category.objects(bound)}
    return FiniteGenMulticat(objects, arrows, identities, comps)


def comparison_from_xi_inverse(q: SymMulticat, m: FiniteGenMulticat, bound: Optional[int] = None) -> SymMorphism:
    """The isomorphism ``xi(m) -> q`` for ``m = xi_inverse(q)``:
    ``(r, sigma) -> r sigma^-1``."""
    by_name = {_name(f): f for f in q.arrows(bound)}
    objs = {_name(x): x for x in q.category.objects(bound)}
    c = q.category
    return SymMorphism(
        XiMulticat(m),
        q,
        objs.__getitem__,
        lambda a: c.identity(objs[a.obj]),
        lambda f: q.act(by_name[f.base], f.sigma.inverse()),
    )


# --------------------------------------------------------------------------
# fullness


def xi_fullness_witness(G: SymMorphism) -> GenMorphism:
    """The unique ``H`` with ``xi(H) = G`` for ``G: xi(M) -> xi(N)``."""
    if not isinstance(G.domain, XiMulticat) or not isinstance(G.codomain, XiMulticat):
        raise PreconditionError("domain and codomain must be symmetrisations", G)
    m, n = G.domain.base, G.codomain.base

    def image(f):
        a = G.on_arrow(XiArrow(f, Permutation.identity(m.arity(f))))
        if not isinstance(a, XiArrow):
            raise PreconditionError(f"image of {f!r} is not a symmetrised arrow", a)
        return a

    if m.is_finite():
        arrs = {f: image(f).base for f in m.arrows()}
        thetas = {f: image(f).sigma.inverse() for f in m.arrows()}
        objs = {x: G.on_object(x) for x in m.objects()}
        return GenMorphism(m, n, objs, arrs, thetas)
    return GenMorphism(m, n, G.on_object, lambda f: image(f).base, lambda f: image(f).sigma.inverse())


def sym_morphism_tables(F: SymMorphism, bound: Optional[int] = None):
    q = F.domain
    objs = {x: F.on_object(x) for x in q.category.objects(bound)}
    arrs = {f: F.on_arrow(f) for f in q.arrows(bound)}
    return objs, arrs


def enumerate_sym_morphisms(q: SymMulticat, r: SymMulticat) -> List[SymMorphism]:
    """All morphisms between finite object-discrete symmetric multicategories.

    Exhaustive backtracking over object maps and arrow images; values forced
    by the action, identities or binary composites are propagated, and every
    complete assignment is validated by the morphism checker.
    """
    if non_identity_morphism(q) is not None or non_identity_morphism(r) is not None:
        raise PreconditionError("enumeration supports object-discrete multicategories only")
    objs_q = list(q.category.objects())
    objs_r = list(r.category.objects())
    arrows = list(q.arrows())
    r_by_profile = r.arrows_by_profile()
    facts: Dict[Any, List[Tuple[Any, int, Any, Any]]] = {f: [] for f in arrows}
    for f in arrows:
        for p, x in enumerate(q.source(f), 1):
            for g in q.arrows_by_target(x):
                h = q.compose_at(f, p, g)
                fact = (f, p, g, h)
                facts[f].append(fact)
                if g != f:
                    facts[g].append(fact)
                if h not in (f, g):
                    facts.setdefault(h, []).append(fact)
    found: List[SymMorphism] = []
    for images in itertools.product(objs_r, repeat=len(objs_q)):
        omap = dict(zip(objs_q, images))

        def image_profile(f):
            prof = q.profile(f)
            return Profile(tuple(omap[x] for x in prof.inputs), omap[prof.output])

        cand = {f: r_by_profile.get(image_profile(f), []) for f in arrows}
        if any(not v for v in cand.values()):
            continue
        start: Dict[Any, Any] = {}
        ok = True
        for x in objs_q:
            ok = ok and _assign(q, r, facts, start, q.identity(x), r.identity(omap[x]))
        if not ok:
            continue
        _search(q, r, omap, arrows, cand, facts, start, found)
    return found


def _assign(q, r, facts, amap, f, image) -> bool:
    stack = [(f, image)]
    while stack:
        a, b = stack.pop()
        if a in amap:
            if amap[a] != b:
                return False
            continue
        if r.profile(b).arity != q.profile(a).arity:
            return False
        amap[a] = b
        for s in all_perms(q.arity(a))[1:]:
            stack.append((q.act(a, s), r.act(b, s)))
        for (f2, p, g2, h) in facts.get(a, []):
            if f2 in amap and g2 in amap:
                stack.append((h, r.compose_at(amap[f2], p, amap[g2])))
    return True


def _search(q, r, omap, arrows, cand, facts, amap, found):
    todo = [f for f in arrows if f not in amap]
    if not todo:
        objs = dict(omap)
        F = SymMorphism(
            q, r, objs.__getitem__, lambda a: r.category.identity(objs[q.category.dom(a)]), dict(amap).__getitem__
        )
        if not check_sym_morphism(F):
            found.append(F)
        return
    f = min(todo, key=lambda a: len(cand[a]))
    for b in cand[f]:
        trial = dict(amap)
        if _assign(q, r, facts, trial, f, b) and all(
            trial[a] in set(cand[a]) for a in trial if a in cand
        ):
            _search(q, r, omap, arrows, cand, facts, trial, found)
