"""Permutations, finite categories and arrow profiles.

Permutations use 1-based semantics: ``sigma(i)`` is the image of ``i`` for
``1 <= i <= k``.  Acting on a list, ``sigma.apply(xs)`` returns
``(xs[sigma(1)], ..., xs[sigma(k)])`` so that an arrow ``f`` with source
``xs`` acted on by ``sigma`` has source ``sigma.apply(xs)``.  Serialized
permutations are 0-based integer arrays.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple


class Permutation:
    """An element of the symmetric group S_k."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Iterable[int], zero_based: bool = False):
        img = tuple(images) if zero_based else tuple(i - 1 for i in images)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {list(images) if not zero_based else img}")
        self._img = img
        self._hash = hash(("perm", img))

    @classmethod
    def _raw(cls, img: Tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p._img = img
        p._hash = hash(("perm", img))
        return p

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return _identity(k)

    @classmethod
    def transposition(cls, k: int, i: int, j: Optional[int] = None) -> "Permutation":
        """Swap of ``i`` and ``j`` (default ``i+1``), 1-based."""
        j = i + 1 if j is None else j
        img = list(range(k))
        img[i - 1], img[j - 1] = img[j - 1], img[i - 1]
        return cls._raw(tuple(img))

    @property
    def size(self) -> int:
        return len(self._img)

    @property
    def images(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in self._img)

    @property
    def zero_based(self) -> Tuple[int, ...]:
        return self._img

    def __call__(self, i: int) -> int:
        return self._img[i - 1] + 1

    def __len__(self) -> int:
        return len(self._img)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose_perm(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._img)
        for i, v in enumerate(self._img):
            inv[v] = i
        return Permutation._raw(tuple(inv))

    def is_identity(self) -> bool:
        return self._img == _identity(len(self._img))._img

    def apply(self, seq: Sequence[Any]) -> tuple:
        if len(seq) != len(self._img):
            raise ValueError(f"permutation of size {len(self._img)} applied to {len(seq)} items")
        return tuple(seq[v] for v in self._img)

    def encode(self) -> List[int]:
        return list(self._img)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return (len(self._img), self._img) < (len(other._img), other._img)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


@lru_cache(maxsize=None)
def _identity(k: int) -> Permutation:
    return Permutation._raw(tuple(range(k)))


@lru_cache(maxsize=None)
def all_perms(k: int) -> Tuple[Permutation, ...]:
    """All of S_k, identity first, in lexicographic order of images."""
    return tuple(Permutation._raw(p) for p in itertools.permutations(range(k)))


def compose_perm(sigma: Permutation, tau: Permutation) -> Permutation:
    """The permutation ``i -> sigma(tau(i))``."""
    if sigma.size != tau.size:
        raise ValueError(f"cannot compose permutations of sizes {sigma.size} and {tau.size}")
    s = sigma._img
    return Permutation._raw(tuple(s[t] for t in tau._img))


def block_perm(sigma: Permutation, block_sizes: Sequence[int]) -> Permutation:
    """Move contiguous blocks the way ``sigma`` moves indices.

    Applied to the concatenation ``B_1 ... B_k`` of blocks with the given
    sizes this yields ``B_sigma(1) ... B_sigma(k)``.
    """
    if sigma.size != len(block_sizes):
        raise ValueError("block_perm needs one block size per point")
    starts = [0]
    for m in block_sizes:
        starts.append(starts[-1] + m)
    img: List[int] = []
    for r in sigma._img:
        img.extend(range(starts[r], starts[r] + block_sizes[r]))
    return Permutation._raw(tuple(img))


def juxtapose_perms(perms: Sequence[Permutation]) -> Permutation:
    """Block-diagonal permutation acting as ``perms[i]`` on the i-th block."""
    img: List[int] = []
    offset = 0
    for p in perms:
        img.extend(offset + v for v in p._img)
        offset += p.size
    return Permutation._raw(tuple(img))


def insert_perm(outer: Permutation, position: int, inner: Permutation) -> Permutation:
    """Permutation of ``outer.size + inner.size - 1`` points: identity outside
    the block occupying ``position`` (1-based), ``inner`` within it."""
    parts = [Permutation.identity(1)] * outer.size
    parts[position - 1] = inner
    return juxtapose_perms(parts)


# --------------------------------------------------------------------------
# canonical encodings


def encode(value: Any) -> Any:
    """JSON-able encoding used for canonical ordering and serialization."""
    if isinstance(value, (str, int)) or value is None:
        return value
    if isinstance(value, (tuple, list)):
        return [encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    enc = getattr(value, "encode", None)
    if enc is not None:
        return enc()
    raise TypeError(f"no encoding for {type(value).__name__}")


_canonical_cache: Dict[Any, str] = {}


def canonical(value: Any) -> str:
    """Compact JSON string of ``encode(value)``; the canonical total order."""
    try:
        return _canonical_cache[value]
    except (KeyError, TypeError):
        pass
    s = json.dumps(encode(value), separators=(",", ":"), sort_keys=True)
    try:
        if len(_canonical_cache) > 2_000_000:
            _canonical_cache.clear()
        _canonical_cache[value] = s
    except TypeError:
        pass
    return s


# --------------------------------------------------------------------------
# validation reports


@dataclass(frozen=True, order=True)
class Violation:
    law: str
    instance: str
    detail: str = ""

    def encode(self) -> dict:
        return {"law": self.law, "instance": self.instance, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    checked: int = 0

    def add(self, law: str, instance: Any, detail: str = "") -> None:
        if not isinstance(instance, str):
            instance = canonical(instance)
        self.violations.append(Violation(law, instance, detail))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        self.checked += other.checked

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        # truthy iff there is something to report
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def laws(self) -> List[str]:
        return sorted({v.law for v in self.violations})

    def encode(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "violations": [v.encode() for v in sorted(self.violations)],
        }


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """``(x_1, ..., x_k; x)``; nullary profiles have no inputs."""

    inputs: Tuple[Hashable, ...]
    output: Hashable

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def encode(self) -> dict:
        return {"inputs": encode(self.inputs), "output": encode(self.output)}

    def __repr__(self) -> str:
        return f"({', '.join(map(str, self.inputs))}; {self.output})"


# --------------------------------------------------------------------------
# categories


class Category:
    """Interface shared by finite tables and lazily generated categories.

    ``compose(f, g)`` is ``f o g``: first ``g``, then ``f``.  Lazily
    generated categories need only be locally finite: ``hom_out`` of any
    object is a finite list.  ``objects(bound)`` lists objects of size at most
    ``bound``.
    """

    def objects(self, bound: Optional[int] = None) -> Iterable[Hashable]:
        raise NotImplementedError

    def dom(self, m: Hashable) -> Hashable:
        raise NotImplementedError

    def cod(self, m: Hashable) -> Hashable:
        raise NotImplementedError

    def identity(self, x: Hashable) -> Hashable:
        raise NotImplementedError

    def compose(self, f: Hashable, g: Hashable) -> Optional[Hashable]:
        raise NotImplementedError

    def hom_out(self, x: Hashable) -> List[Hashable]:
        raise NotImplementedError

    def hom_in(self, x: Hashable) -> List[Hashable]:
        """Morphisms with codomain ``x``.

        The default assumes every morphism is invertible, which holds for the
        categories of elements met when slicing tidy multicategories.
        """
        out = []
        for m in self.hom_out(x):
            inv = self.inverse(m)
            if inv is None:
                raise ValueError(f"hom_in needs invertible morphisms; {m!r} is not")
            out.append(inv)
        return out

    def hom(self, x: Hashable, y: Hashable) -> List[Hashable]:
        return [m for m in self.hom_out(x) if self.cod(m) == y]

    def is_identity(self, m: Hashable) -> bool:
        return m == self.identity(self.dom(m))

    def inverse(self, m: Hashable) -> Optional[Hashable]:
        x, y = self.dom(m), self.cod(m)
        idx, idy = self.identity(x), self.identity(y)
        for n in self.hom_out(y):
            if self.cod(n) == x and self.compose(n, m) == idx and self.compose(m, n) == idy:
                return n
        return None

    def generators_out(self, x: Hashable) -> List[Hashable]:
        """A subset of ``hom_out(x)`` whose closure reaches every object
        isomorphic to ``x``."""
        return [m for m in self.hom_out(x) if not self.is_identity(m)]

    def size(self, x: Hashable) -> int:
        return 0

    def is_discrete(self) -> bool:
        return False


class FiniteCategory(Category):
    """A category given by explicit tables of opaque string ids."""

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Dict[str, Tuple[str, str]],
        identities: Dict[str, str],
        compose_table: Dict[Tuple[str, str], str],
    ):
        self._objects = tuple(sorted(objects))
        self.morphisms = dict(morphisms)
        self.identities = dict(identities)
        self.compose_table = dict(compose_table)
        self._out: Dict[str, List[str]] = {x: [] for x in self._objects}
        self._in: Dict[str, List[str]] = {x: [] for x in self._objects}
        for m in sorted(self.morphisms):
            d, c = self.morphisms[m]
            self._out.setdefault(d, []).append(m)
            self._in.setdefault(c, []).append(m)

    @classmethod
    def discrete(cls, objects: Iterable[str]) -> "FiniteCategory":
        objs = sorted(objects)
        ids = {x: f"1_{x}" for x in objs}
        morphisms = {ids[x]: (x, x) for x in objs}
        table = {(ids[x], ids[x]): ids[x] for x in objs}
        return cls(objs, morphisms, ids, table)

    def objects(self, bound: Optional[int] = None) -> Tuple[str, ...]:
        return self._objects

    def dom(self, m: str) -> str:
        return self.morphisms[m][0]

    def cod(self, m: str) -> str:
        return self.morphisms[m][1]

    def identity(self, x: str) -> str:
        return self.identities[x]

    def compose(self, f: str, g: str) -> Optional[str]:
        return self.compose_table.get((f, g))

    def hom_out(self, x: str) -> List[str]:
        return self._out.get(x, [])

    def hom_in(self, x: str) -> List[str]:
        return self._in.get(x, [])

    def is_identity(self, m: str) -> bool:
        return self.identities.get(self.morphisms[m][0]) == m

    def all_morphisms(self) -> List[str]:
        return sorted(self.morphisms)

    def is_discrete(self) -> bool:
        return all(self.is_identity(m) for m in self.morphisms)

    # serialization -------------------------------------------------------

    def encode(self) -> dict:
        return {
            "objects": list(self._objects),
            "morphisms": [
                {"id": m, "dom": d, "cod": c} for m, (d, c) in sorted(self.morphisms.items())
            ],
            "identities": {x: self.identities[x] for x in self._objects if x in self.identities},
            "compose": [[f, g, fg] for (f, g), fg in sorted(self.compose_table.items())],
        }

    @classmethod
    def decode(cls, doc: dict) -> "FiniteCategory":
        objects = [str(x) for x in doc["objects"]]
        morphisms = {m["id"]: (m["dom"], m["cod"]) for m in doc.get("morphisms", [])}
        identities = dict(doc.get("identities", {}))
        for x in objects:
            if x not in identities:
                # default identity naming; added as a morphism when absent
                ident = f"1_{x}"
                identities[x] = ident
                morphisms.setdefault(ident, (x, x))
        table = {(f, g): fg for f, g, fg in doc.get("compose", [])}
        for x, ident in identities.items():
            for m, (d, c) in morphisms.items():
                if d == x:
                    table.setdefault((m, ident), m)
                if c == x:
                    table.setdefault((ident, m), m)
        return cls(objects, morphisms, identities, table)


class DiscreteCategory(Category):
    """Discrete category on an arbitrary (possibly lazily listed) object set.

    Morphisms are ``Identity`` markers.
    """

    def __init__(self, objects_fn, size_fn=None):
        self._objects_fn = objects_fn
        self._size_fn = size_fn

    def objects(self, bound: Optional[int] = None):
        return self._objects_fn(bound)

    def dom(self, m: "Identity") -> Hashable:
        return m.obj

    def cod(self, m: "Identity") -> Hashable:
        return m.obj

    def identity(self, x: Hashable) -> "Identity":
        return Identity(x)

    def compose(self, f: "Identity", g: "Identity") -> Optional["Identity"]:
        return f if f == g else None

    def hom_out(self, x: Hashable) -> List["Identity"]:
        return [Identity(x)]

    def hom_in(self, x: Hashable) -> List["Identity"]:
        return [Identity(x)]

    def is_identity(self, m: "Identity") -> bool:
        return True

    def inverse(self, m: "Identity") -> "Identity":
        return m

    def generators_out(self, x: Hashable) -> list:
        return []

    def size(self, x: Hashable) -> int:
        return self._size_fn(x) if self._size_fn else 0

    def is_discrete(self) -> bool:
        return True


@dataclass(frozen=True)
class Identity:
    obj: Any

    def encode(self) -> dict:
        return {"id": encode(self.obj)}


def _morphisms_within(c: Category, bound: Optional[int]) -> List[Hashable]:
    if isinstance(c, FiniteCategory):
        return c.all_morphisms()
    out: List[Hashable] = []
    for x in c.objects(bound):
        out.extend(c.hom_out(x))
    return out


def check_category(c: Category, bound: Optional[int] = None) -> ValidationReport:
    """Exhaustively check the category laws (within ``bound`` if lazy)."""
    report = ValidationReport()
    objects = list(c.objects(bound))
    objset = set(objects)
    morphisms = _morphisms_within(c, bound)
    for x in objects:
        try:
            ident = c.identity(x)
        except KeyError:
            report.add("identity-missing", x)
            continue
        if c.dom(ident) != x or c.cod(ident) != x:
            report.add("identity-typing", x, f"identity {ident!r} is not an endomorphism of {x!r}")
    if isinstance(c, FiniteCategory):
        for (f, g), fg in sorted(c.compose_table.items()):
            if f not in c.morphisms or g not in c.morphisms or fg not in c.morphisms:
                report.add("compose-unknown", [f, g, fg])
            elif c.dom(f) != c.cod(g):
                report.add("compose-not-composable", [f, g])
    for g in morphisms:
        d, y = c.dom(g), c.cod(g)
        if isinstance(c, FiniteCategory) and (d not in objset or y not in objset):
            report.add("morphism-typing", g, "dom/cod is not an object")
            continue
        try:
            idd, idy = c.identity(d), c.identity(y)
        except KeyError:
            continue
        report.checked += 1
        if c.compose(g, idd) != g:
            report.add("right-unit", g)
        if c.compose(idy, g) != g:
            report.add("left-unit", g)
        for f in c.hom_out(y):
            fg = c.compose(f, g)
            report.checked += 1
            if fg is None:
                report.add("compose-missing", [f, g])
                continue
            if c.dom(fg) != d or c.cod(fg) != c.cod(f):
                report.add("compose-typing", [f, g, fg])
                continue
            for e in c.hom_out(c.cod(f)):
                report.checked += 1
                ef = c.compose(e, f)
                left = c.compose(ef, g) if ef is not None else None
                efg = c.compose(e, fg)
                if left is None or efg is None or left != efg:
                    report.add("associativity", [e, f, g], f"{left!r} != {efg!r}")
    return report


def equivalent_to_discrete(
    c: Category, bound: Optional[int] = None
) -> Tuple[bool, Optional[List[Hashable]]]:
    """Whether ``c`` is equivalent to a discrete category.

    True iff every hom-set has at most one element and every morphism is
    invertible; the witness lists one object per connected component.
    """
    objects = sorted(c.objects(bound), key=canonical)
    component: Dict[Hashable, Hashable] = {}
    skeleton: List[Hashable] = []
    for x in objects:
        seen_cods = set()
        for m in c.hom_out(x):
            y = c.cod(m)
            if y in seen_cods:
                return False, None
            seen_cods.add(y)
            if c.inverse(m) is None:
                return False, None
    # components: all morphisms are isos, so reachability is symmetric
    for x in objects:
        if x in component:
            continue
        skeleton.append(x)
        stack = [x]
        component[x] = x
        while stack:
            u = stack.pop()
            for m in c.hom_out(u):
                v = c.cod(m)
                if v not in component:
                    component[v] = x
                    stack.append(v)
    return True, skeleton
