"""Generalised (1-level) multicategories.

Every composite ``f o_p g`` carries one permutation ``chi`` with
``source(f o_p g) = chi.apply(z)`` where ``z`` is the spliced list
``s(f)[:p-1] + s(g) + s(f)[p:]``.  The amalgamating maps ``psi`` (for the
sources of ``f`` other than ``p``) and ``phi`` (for the sources of ``g``) are
derived from ``chi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .foundations import Permutation, ValidationReport, all_perms, canonical, compose_perm, encode


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class GenArrow:
    id: str
    source: Tuple[str, ...]
    target: str

    @property
    def arity(self) -> int:
        return len(self.source)

    def encode(self) -> dict:
        return {"id": self.id, "source": list(self.source), "target": self.target}


@dataclass(frozen=True)
class GenComposition:
    """``result = left o_position right`` with its amalgamation permutation."""

    left: Any
    position: int
    right: Any
    result: Any
    chi: Permutation
    left_arity: int

    @property
    def right_arity(self) -> int:
        return self.chi.size - self.left_arity + 1

    def psi(self, a: int) -> int:
        """Result position of source ``a`` (``a != position``) of the left arrow."""
        p = self.position
        if a == p:
            raise ValueError("psi is undefined at the grafting position")
        r = a if a < p else a + self.right_arity - 1
        return self.chi.inverse()(r)

    def phi(self, b: int) -> int:
        """Result position of source ``b`` of the right arrow."""
        return self.chi.inverse()(self.position - 1 + b)


def splice(xs: Sequence[Any], p: int, ys: Sequence[Any]) -> tuple:
    """``xs`` with its ``p``-th (1-based) entry replaced by the entries of ``ys``."""
    return tuple(xs[: p - 1]) + tuple(ys) + tuple(xs[p:])


def track(tags_f: Sequence[Any], comp: GenComposition, tags_g: Sequence[Any]) -> tuple:
    """Tags of the sources of ``comp.result`` given tags for ``f`` and ``g``."""
    return comp.chi.apply(splice(tags_f, comp.position, tags_g))


class GenMulticat:
    """Interface for generalised multicategories.

    Finite tables and lazily generated instances (slices) implement the same
    methods.  ``arrows(bound)`` lists arrows of size at most ``bound``;
    arrows of finite tables have size 0.
    """

    def objects(self, bound: Optional[int] = None) -> Iterable[Hashable]:
        raise NotImplementedError

    def arrows(self, bound: Optional[int] = None) -> Iterable[Hashable]:
        raise NotImplementedError

    def source(self, f: Hashable) -> tuple:
        raise NotImplementedError

    def target(self, f: Hashable) -> Hashable:
        raise NotImplementedError

    def identity(self, x: Hashable) -> Hashable:
        raise NotImplementedError

    def compose(self, f: Hashable, p: int, g: Hashable) -> GenComposition:
        raise NotImplementedError

    def size(self, f: Hashable) -> int:
        return 0

    def object_size(self, x: Hashable) -> int:
        return 0

    def arity(self, f: Hashable) -> int:
        return len(self.source(f))

    def arrows_by_target(self, x: Hashable, bound: Optional[int] = None) -> List[Hashable]:
        cache = self.__dict__.setdefault("_by_target", {})
        key = bound
        if key not in cache:
            table: Dict[Hashable, List[Hashable]] = {}
            for f in self.arrows(bound):
                table.setdefault(self.target(f), []).append(f)
            cache[key] = table
        return cache[key].get(x, [])

    def is_finite(self) -> bool:
        return False


def gen_compose(m: GenMulticat, f: Hashable, p: int, g: Hashable) -> GenComposition:
    src = m.source(f)
    if not 1 <= p <= len(src):
        raise CompositionError(f"position {p} out of range for arrow {f!r} of arity {len(src)}")
    if m.target(g) != src[p - 1]:
        raise CompositionError(
            f"target {m.target(g)!r} of {g!r} does not match source {src[p - 1]!r} of {f!r} at {p}"
        )
    return m.compose(f, p, g)


class FiniteGenMulticat(GenMulticat):
    """A generalised multicategory given by explicit tables.

    ``truncated_at`` marks a table cut out of a larger instance at a size
    bound: composites leaving the bound are absent, and the checkers skip
    the instances that need them.
    """

    def __init__(
        self,
        objects: Iterable[str],
        arrows: Iterable[GenArrow],
        identities: Mapping[str, str],
        compositions: Mapping[Tuple[str, int, str], Tuple[str, Permutation]],
        truncated_at: Optional[int] = None,
    ):
        self._objects = tuple(sorted(objects))
        self._arrows = {a.id: a for a in arrows}
        self.identities = dict(identities)
        self.compositions = dict(compositions)
        self.truncated_at = truncated_at

    def objects(self, bound=None):
        return self._objects

    def arrows(self, bound=None):
        return sorted(self._arrows)

    def arrow(self, f: str) -> GenArrow:
        return self._arrows[f]

    def source(self, f):
        return self._arrows[f].source

    def target(self, f):
        return self._arrows[f].target

    def identity(self, x):
        return self.identities[x]

    def compose(self, f, p, g):
        try:
            result, chi = self.compositions[(f, p, g)]
        except KeyError:
            raise CompositionError(f"no composite recorded for {f} o_{p} {g}") from None
        return GenComposition(f, p, g, result, chi, len(self.source(f)))

    def is_finite(self) -> bool:
        return True

    def encode(self) -> dict:
        doc = {
            "objects": list(self._objects),
            "arrows": [self._arrows[a].encode() for a in sorted(self._arrows)],
            "identities": {x: self.identities[x] for x in self._objects if x in self.identities},
            "compose": [
                {"f": f, "p": p, "g": g, "result": r, "chi": chi.encode()}
                for (f, p, g), (r, chi) in sorted(self.compositions.items())
            ],
        }
        if self.truncated_at is not None:
            doc["truncatedAt"] = self.truncated_at
        return doc

    @classmethod
    def decode(cls, doc: dict) -> "FiniteGenMulticat":
        arrows = [GenArrow(a["id"], tuple(a["source"]), a["target"]) for a in doc["arrows"]]
        comps = {
            (c["f"], int(c["p"]), c["g"]): (c["result"], Permutation(c["chi"], zero_based=True))
            for c in doc.get("compose", [])
        }
        return cls(doc["objects"], arrows, doc.get("identities", {}), comps, doc.get("truncatedAt"))


def materialize_gen(m: GenMulticat, bound: Optional[int] = None) -> FiniteGenMulticat:
    """Table form of a finite (or bounded) lazily generated instance.

    Arrow ids are canonical encodings; composites leaving the bound are
    dropped.
    """

    def name(v):
        return v if isinstance(v, str) else canonical(v)

    arrows = list(m.arrows(bound))
    present = set(arrows)
    objs = list(m.objects(bound))
    table = [GenArrow(name(f), tuple(name(x) for x in m.source(f)), name(m.target(f))) for f in arrows]
    identities = {name(x): name(m.identity(x)) for x in objs}
    comps = {}
    for f in arrows:
        for p, x in enumerate(m.source(f), 1):
            for g in m.arrows_by_target(x, bound):
                c = m.compose(f, p, g)
                if c.result in present:
                    comps[(name(f), p, name(g))] = (name(c.result), c.chi)
    truncated = None if m.is_finite() else bound
    return FiniteGenMulticat([name(x) for x in objs], table, identities, comps, truncated)


# --------------------------------------------------------------------------
# axioms


def _composable(m: GenMulticat, f, bound, budget=None):
    """(p, g) with ``t(g) = s(f)_p`` and size within the remaining budget."""
    for p, x in enumerate(m.source(f), 1):
        for g in m.arrows_by_target(x, bound):
            if budget is None or m.size(g) <= budget:
                yield p, g


def check_gen_axioms(m: GenMulticat, bound: Optional[int] = None) -> ValidationReport:
    """Exhaustive check of typing, unit, associativity and commutativity laws,
    including the coherence of amalgamation maps.

    For lazily generated instances only instances whose total arrow size is
    at most ``bound`` are visited.
    """
    report = ValidationReport()
    arrows = list(m.arrows(bound))
    objects = list(m.objects(bound))
    finite = m.is_finite()
    partial = getattr(m, "truncated_at", None) is not None
    if finite:
        objset = set(objects)
        for f in arrows:
            if m.target(f) not in objset or any(x not in objset for x in m.source(f)):
                report.add("arrow-typing", f, "source/target is not an object")
    for x in objects:
        try:
            ix = m.identity(x)
        except KeyError:
            report.add("identity-missing", x)
            continue
        if tuple(m.source(ix)) != (x,) or m.target(ix) != x:
            report.add("identity-typing", x)

    def total(*fs):
        return sum(m.size(f) for f in fs)

    def within(*fs):
        return bound is None or finite or total(*fs) <= bound

    def comp(f, p, g, law):
        try:
            c = gen_compose(m, f, p, g)
        except CompositionError as exc:
            if not partial:
                report.add(law + "/composite-missing", [f, p, g], str(exc))
            return None
        return c

    for f in arrows:
        src_f = m.source(f)
        budget_f = None if (bound is None or finite) else bound - m.size(f)
        for p, g in _composable(m, f, bound, budget_f):
            c = comp(f, p, g, "composition")
            if c is None:
                continue
            report.checked += 1
            h_src = m.source(c.result)
            splice_ = splice(src_f, p, m.source(g))
            if c.chi.size != len(splice_):
                report.add("composition-chi-size", [f, p, g])
                continue
            if m.target(c.result) != m.target(f):
                report.add("composition-target", [f, p, g])
            if tuple(h_src) != c.chi.apply(splice_):
                report.add("composition-source", [f, p, g], "source is not the chi-reordered splice")

    # unit laws
    for f in arrows:
        y = m.target(f)
        try:
            c = gen_compose(m, m.identity(y), 1, f)
            if c.result != f or not c.chi.is_identity():
                report.add("unit-left", f, f"1_y o_1 f = {c.result!r}, chi = {c.chi.encode()}")
        except (CompositionError, KeyError) as exc:
            if not partial:
                report.add("unit-left/composite-missing", f, str(exc))
        for p, x in enumerate(m.source(f), 1):
            try:
                c = gen_compose(m, f, p, m.identity(x))
                if c.result != f or not c.chi.is_identity():
                    report.add("unit-right", [f, p], f"f o_p 1_x = {c.result!r}, chi = {c.chi.encode()}")
            except (CompositionError, KeyError) as exc:
                if not partial:
                    report.add("unit-right/composite-missing", [f, p], str(exc))
        report.checked += 1

    # associativity: (f o_p g) o_qbar h = f o_p (g o_q h)
    for f in arrows:
        kf = len(m.source(f))
        tf = [("f", a) for a in range(1, kf + 1)]
        for p, g in _composable(m, f, bound):
            if not within(f, g):
                continue
            fg = comp(f, p, g, "associativity")
            if fg is None:
                continue
            tg = [("g", b) for b in range(1, len(m.source(g)) + 1)]
            t_fg = track(tf, fg, tg)
            for q, h in _composable(m, g, bound):
                if not within(f, g, h):
                    continue
                th = [("h", c) for c in range(1, len(m.source(h)) + 1)]
                qbar = fg.phi(q)
                left = comp(fg.result, qbar, h, "associativity")
                gh = comp(g, q, h, "associativity")
                if left is None or gh is None:
                    continue
                right = comp(f, p, gh.result, "associativity")
                if right is None:
                    continue
                report.checked += 1
                key = [f, p, g, q, h]
                if left.result != right.result:
                    report.add("associativity", key, f"{left.result!r} != {right.result!r}")
                    continue
                lt = track(t_fg, left, th)
                rt = track(tf, right, track(tg, gh, th))
                if lt != rt:
                    report.add("associativity-coherence", key, _coherence_detail(lt, rt))

    # commutativity: (f o_p g) o_qbar h = (f o_q h) o_pbar g, p != q
    for f in arrows:
        kf = len(m.source(f))
        tf = [("f", a) for a in range(1, kf + 1)]
        pairs = list(_composable(m, f, bound))
        for p, g in pairs:
            for q, h in pairs:
                if p == q or not within(f, g, h):
                    continue
                fg = comp(f, p, g, "commutativity")
                fh = comp(f, q, h, "commutativity")
                if fg is None or fh is None:
                    continue
                left = comp(fg.result, fg.psi(q), h, "commutativity")
                right = comp(fh.result, fh.psi(p), g, "commutativity")
                if left is None or right is None:
                    continue
                report.checked += 1
                key = [f, p, g, q, h]
                if left.result != right.result:
                    report.add("commutativity", key, f"{left.result!r} != {right.result!r}")
                    continue
                tg = [("g", b) for b in range(1, len(m.source(g)) + 1)]
                th = [("h", c) for c in range(1, len(m.source(h)) + 1)]
                lt = track(track(tf, fg, tg), left, th)
                rt = track(track(tf, fh, th), right, tg)
                if lt != rt:
                    report.add("commutativity-coherence", key, _coherence_detail(lt, rt))
    return report


def _coherence_detail(lt, rt) -> str:
    for i, (a, b) in enumerate(zip(lt, rt), 1):
        if a != b:
            return f"position {i}: {a[0]}{a[1]} vs {b[0]}{b[1]}"
    return "source lengths differ"


# --------------------------------------------------------------------------
# morphisms


class GenMorphism:
    """``(F, theta)``: object map, arrow map and transition maps ``theta_f``.

    Maps may be dicts or callables.
    """

    def __init__(self, domain: GenMulticat, codomain: GenMulticat, objects, arrows, theta):
        self.domain = domain
        self.codomain = codomain
        self._obj = objects
        self._arr = arrows
        self._theta = theta

    @staticmethod
    def _get(table, key):
        return table(key) if callable(table) else table[key]

    def on_object(self, x):
        return self._get(self._obj, x)

    def on_arrow(self, f):
        return self._get(self._arr, f)

    def theta(self, f) -> Permutation:
        return self._get(self._theta, f)

    @classmethod
    def identity(cls, m: GenMulticat) -> "GenMorphism":
        return cls(m, m, lambda x: x, lambda f: f, lambda f: Permutation.identity(m.arity(f)))

    def tables(self, bound: Optional[int] = None):
        objs = {x: self.on_object(x) for x in self.domain.objects(bound)}
        arrs = {f: self.on_arrow(f) for f in self.domain.arrows(bound)}
        thetas = {f: self.theta(f) for f in self.domain.arrows(bound)}
        return objs, arrs, thetas

    def same_data(self, other: "GenMorphism", bound: Optional[int] = None) -> bool:
        return self.tables(bound) == other.tables(bound)

    def encode(self) -> dict:
        objs, arrs, thetas = self.tables()
        return {
            "objects": {canonical(k) if not isinstance(k, str) else k: encode(v) for k, v in objs.items()},
            "arrows": [
                {"f": encode(f), "image": encode(arrs[f]), "theta": thetas[f].encode()}
                for f in sorted(arrs, key=canonical)
            ],
        }


def compose_gen_morphisms(F: GenMorphism, G: GenMorphism) -> GenMorphism:
    """``G o F`` with ``theta^H_f = theta^G_{Ff} o theta^F_f``."""
    if F.codomain is not G.domain:
        raise ValueError("codomain of the first morphism is not the domain of the second")
    return GenMorphism(
        F.domain,
        G.codomain,
        lambda x: G.on_object(F.on_object(x)),
        lambda f: G.on_arrow(F.on_arrow(f)),
        lambda f: compose_perm(G.theta(F.on_arrow(f)), F.theta(f)),
    )


def check_gen_morphism(
    F: GenMorphism, m: GenMulticat, n: GenMulticat, bound: Optional[int] = None
) -> ValidationReport:
    report = ValidationReport()
    n_objects = set(n.objects(bound)) if n.is_finite() else None
    n_arrows = set(n.arrows(bound)) if n.is_finite() else None
    for x in m.objects(bound):
        try:
            fx = F.on_object(x)
        except (KeyError, TypeError):
            report.add("object-map", x, "unmapped object")
            continue
        if n_objects is not None and fx not in n_objects:
            report.add("object-map", x, f"{fx!r} is not an object of the codomain")
        try:
            if F.on_arrow(m.identity(x)) != n.identity(fx):
                report.add("identity", x, "F(1_x) != 1_Fx")
        except (KeyError, TypeError):
            report.add("identity", x, "identity not mapped")
    arrows = list(m.arrows(bound))
    for f in arrows:
        try:
            ff, th = F.on_arrow(f), F.theta(f)
        except (KeyError, TypeError):
            report.add("arrow-map", f, "unmapped arrow")
            continue
        src = m.source(f)
        if th.size != len(src):
            report.add("theta-size", f)
            continue
        if n_arrows is not None and ff not in n_arrows:
            report.add("arrow-map", f, f"{ff!r} is not an arrow of the codomain")
            continue
        expected = th.inverse().apply([F.on_object(x) for x in src])
        if tuple(n.source(ff)) != expected or n.target(ff) != F.on_object(m.target(f)):
            report.add("arrow-typing", f, "s(Ff) != (Fx_theta^-1(i))")
    for f in arrows:
        for p, g in _composable(m, f, bound):
            report.checked += 1
            try:
                c = gen_compose(m, f, p, g)
                ff, fg, th_f, th_g = F.on_arrow(f), F.on_arrow(g), F.theta(f), F.theta(g)
                cn = gen_compose(n, ff, th_f(p), fg)
                th_h = F.theta(c.result)
                fh = F.on_arrow(c.result)
            except (CompositionError, KeyError, TypeError, ValueError) as exc:
                report.add("composition", [f, p, g], str(exc))
                continue
            key = [f, p, g]
            if fh != cn.result:
                report.add("composition", key, "F(f o_p g) != Ff o_theta(p) Fg")
                continue
            for b in range(1, len(m.source(g)) + 1):
                if th_h(c.phi(b)) != cn.phi(th_g(b)):
                    report.add("coherence-phi", key + [b])
            for a in range(1, len(m.source(f)) + 1):
                if a != p and th_h(c.psi(a)) != cn.psi(th_f(a)):
                    report.add("coherence-psi", key + [a])
    return report


def enumerate_gen_morphisms(m: FiniteGenMulticat, n: FiniteGenMulticat) -> List[GenMorphism]:
    """All morphisms ``m -> n`` between finite tables, by backtracking over
    object maps, arrow images and transition maps."""
    objs_m, objs_n = list(m.objects()), list(n.objects())
    arrows_m = m.arrows()
    found: List[GenMorphism] = []
    for images in itertools.product(objs_n, repeat=len(objs_m)):
        omap = dict(zip(objs_m, images))
        choices: List[List[Tuple[Any, Permutation]]] = []
        feasible = True
        for f in arrows_m:
            src = [omap[x] for x in m.source(f)]
            tgt = omap[m.target(f)]
            opts = []
            for g in n.arrows_by_target(tgt):
                if len(n.source(g)) != len(src):
                    continue
                for th in all_perms(len(src)):
                    if tuple(n.source(g)) == th.inverse().apply(src):
                        opts.append((g, th))
            if not opts:
                feasible = False
                break
            choices.append(opts)
        if not feasible:
            continue
        _backtrack_gen(m, n, omap, arrows_m, choices, 0, {}, {}, found)
    return found


def _backtrack_gen(m, n, omap, arrows, choices, i, amap, tmap, found):
    if i == len(arrows):
        F = GenMorphism(m, n, dict(omap), dict(amap), dict(tmap))
        if not check_gen_morphism(F, m, n):
            found.append(F)
        return
    f = arrows[i]
    for g, th in choices[i]:
        amap[f], tmap[f] = g, th
        if _consistent_so_far(m, n, omap, amap, tmap, f):
            _backtrack_gen(m, n, omap, arrows, choices, i + 1, amap, tmap, found)
        del amap[f], tmap[f]


def _consistent_so_far(m, n, omap, amap, tmap, newest) -> bool:
    """Prune on laws whose arrows are all assigned and involve ``newest``."""
    for x in m.objects():
        ix = m.identity(x)
        if ix in amap and amap[ix] != n.identity(omap[x]):
            return False
    for f in list(amap):
        for p, g in _composable(m, f, None):
            if g not in amap or newest not in (f, g):
                continue
            c = m.compose(f, p, g)
            if c.result not in amap:
                continue
            cn = n.compose(amap[f], tmap[f](p), amap[g])
            if cn.result != amap[c.result]:
                return False
    return True
