"""Homology of pointed subsets of groups.

A group is a category with one object ``*``; a pointed subset ``X`` (with
``1 ∈ X``) is the quiver whose arrows are the elements of ``X`` other than
``1``.  Composing ``a`` then ``b`` gives the product ``b·a``, so the middle
face of ``⟨x, y⟩`` is ``⟨y·x⟩``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product as iproduct
from math import comb
from typing import Sequence

from .errors import (
    HypothesisViolated,
    IdentityMissing,
    InvariantBreach,
    NotAbelian,
    NotAssociative,
    ParseError,
    UnsupportedAmbient,
    ValidationError,
)
from .exactalg import FieldHomology, HomologyGroup, Ring, kunneth
from .nerve import (
    Kind,
    OmegaComplex,
    Quiver,
    QuiverMorphism,
    ez_aw,
    omega_complex,
    verify_homotopy,
)
from .picomb import enumerate_shuffles
from .tokens import Identity, label_str, sorted_tokens

VERTEX = "*"

# ---------------------------------------------------------------------------
# groups


class Group:
    """Base class: canonical element tokens with decidable equality."""

    finite: bool = True
    abelian: bool = False
    name: str = "group"

    @property
    def identity(self):
        raise NotImplementedError

    def multiply(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def elements(self) -> list:
        raise UnsupportedAmbient(f"{self.name} is infinite")

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        return label_str(a)

    def order(self) -> int:
        return len(self.elements())


class CyclicGroup(Group):
    def __init__(self, n: int):
        if n < 1:
            raise ValidationError("cyclic groups need n >= 1")
        self.n = n
        self.abelian = True
        self.name = f"cyclic({n})"

    @property
    def identity(self):
        return 0

    def multiply(self, a, b):
        return (a + b) % self.n

    def inverse(self, a):
        return (-a) % self.n

    def elements(self):
        return list(range(self.n))

    def parse(self, text):
        try:
            return int(text) % self.n
        except ValueError:
            raise ParseError(f"not an element of {self.name}: {text!r}") from None


class DihedralGroup(Group):
    """Symmetries of a regular ``n``-gon, generated by reflections ``x`` and ``y``.

    Elements are ``(rotation, reflection)`` pairs; ``x = (0, 1)``,
    ``y = (1, 1)`` and ``xy`` is a rotation of order ``n``.  Elements are
    named by their shortlex-smallest word in ``x`` and ``y``.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValidationError("dihedral groups need n >= 1")
        self.n = n
        self.abelian = n <= 2
        self.name = f"dihedral({n})"
        self._names = self._shortest_words()
        self._by_name = {w: e for e, w in self._names.items()}

    @property
    def identity(self):
        return (0, 0)

    def multiply(self, a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 + (-1) ** f1 * r2) % self.n, (f1 + f2) % 2)

    def inverse(self, a):
        r, f = a
        return ((-r) % self.n, 0) if f == 0 else a

    def elements(self):
        return [(r, f) for f in (0, 1) for r in range(self.n)]

    def _shortest_words(self) -> dict:
        gens = {"x": (0, 1), "y": (1 % self.n, 1)}
        names = {self.identity: "1"}
        frontier = [("", self.identity)]
        while frontier:
            nxt = []
            for word, el in frontier:
                for g in ("x", "y"):
                    e = self.multiply(el, gens[g])
                    if e not in names:
                        names[e] = word + g
                        nxt.append((word + g, e))
            frontier = sorted(nxt)
        return names

    def parse(self, text):
        text = text.strip()
        if text in ("1", "e", ""):
            return self.identity
        el = self.identity
        for ch in text.replace("*", ""):
            if ch not in "xy":
                raise ParseError(f"dihedral words use x and y only: {text!r}")
            el = self.multiply(el, (0, 1) if ch == "x" else (1 % self.n, 1))
        return el

    def format(self, a):
        return self._names[a]


class ProductGroup(Group):
    def __init__(self, left: Group, right: Group):
        self.left, self.right = left, right
        self.finite = left.finite and right.finite
        self.abelian = left.abelian and right.abelian
        self.name = f"{left.name} x {right.name}"

    @property
    def identity(self):
        return (self.left.identity, self.right.identity)

    def multiply(self, a, b):
        return (self.left.multiply(a[0], b[0]), self.right.multiply(a[1], b[1]))

    def inverse(self, a):
        return (self.left.inverse(a[0]), self.right.inverse(a[1]))

    def elements(self):
        return [(a, b) for a in self.left.elements() for b in self.right.elements()]

    def parse(self, text):
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ParseError(f"product elements are written (a,b): {text!r}")
        inner = text[1:-1]
        depth = 0
        for i, ch in enumerate(inner):
            depth += ch == "("
            depth -= ch == ")"
            if ch == "," and depth == 0:
                return (self.left.parse(inner[:i]), self.right.parse(inner[i + 1:]))
        raise ParseError(f"product elements are written (a,b): {text!r}")

    def format(self, a):
        return f"({self.left.format(a[0])},{self.right.format(a[1])})"


class FreeAbelianGroup(Group):
    """``Z^r``; elements are integer tuples (plain integers when ``r = 1``)."""

    finite = False
    abelian = True

    def __init__(self, r: int):
        if r < 1:
            raise ValidationError("free abelian groups need rank >= 1")
        self.r = r
        self.name = f"free_abelian({r})"

    @property
    def identity(self):
        return 0 if self.r == 1 else (0,) * self.r

    def multiply(self, a, b):
        if self.r == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def inverse(self, a):
        return -a if self.r == 1 else tuple(-x for x in a)

    def basis_vector(self, i: int):
        """``e_i`` for ``1 <= i <= r``, matching the ``e1..er`` input syntax."""
        if not 1 <= i <= self.r:
            raise ValidationError(f"basis index {i} out of range 1..{self.r}")
        return 1 if self.r == 1 else tuple(int(j == i - 1) for j in range(self.r))

    def parse(self, text):
        text = text.replace(" ", "")
        if self.r == 1 and re.fullmatch(r"[+-]?\d+", text):
            return int(text)
        if text in ("0", "1", "e"):
            return self.identity
        if re.fullmatch(r"\(?[+-]?\d+(,[+-]?\d+)*\)?", text):
            vals = tuple(int(v) for v in text.strip("()").split(","))
            if len(vals) != self.r:
                raise ParseError(f"expected {self.r} coordinates: {text!r}")
            return vals[0] if self.r == 1 else vals
        coords = [0] * self.r
        pos = 0
        for m in re.finditer(r"([+-]?)(\d*)e(\d+)", text):
            if m.start() != pos:
                raise ParseError(f"cannot parse {text!r} as a combination of e1..e{self.r}")
            pos = m.end()
            k = int(m.group(3))
            if not 1 <= k <= self.r:
                raise ParseError(f"basis index out of range in {text!r}")
            c = int(m.group(2)) if m.group(2) else 1
            coords[k - 1] += -c if m.group(1) == "-" else c
        if pos != len(text):
            raise ParseError(f"cannot parse {text!r} as a combination of e1..e{self.r}")
        return coords[0] if self.r == 1 else tuple(coords)


class FreeGroup(Group):
    """Free group on ``x1..xr``; elements are reduced words of ``(generator, ±1)``."""

    finite = False

    def __init__(self, r: int):
        if r < 1:
            raise ValidationError("free groups need rank >= 1")
        self.r = r
        self.abelian = r == 1
        self.name = f"free({r})"

    @property
    def identity(self):
        return ()

    def multiply(self, a, b):
        out = list(a)
        for g in b:
            if out and out[-1][0] == g[0] and out[-1][1] == -g[1]:
                out.pop()
            else:
                out.append(g)
        return tuple(out)

    def inverse(self, a):
        return tuple((g, -e) for g, e in reversed(a))

    def generator(self, i: int):
        """``x_i`` for ``1 <= i <= r``, matching the ``x1..xr`` input syntax."""
        if not 1 <= i <= self.r:
            raise ValidationError(f"generator index {i} out of range 1..{self.r}")
        return ((i, 1),)

    def parse(self, text):
        text = text.replace(" ", "").replace("*", "")
        if text in ("1", "e", ""):
            return ()
        word = ()
        pos = 0
        for m in re.finditer(r"x(\d+)(\^(-?\d+))?", text):
            if m.start() != pos:
                raise ParseError(f"cannot parse free-group word {text!r}")
            pos = m.end()
            g = int(m.group(1))
            if not 1 <= g <= self.r:
                raise ParseError(f"generator index out of range in {text!r}")
            e = int(m.group(3)) if m.group(3) else 1
            step = ((g, 1 if e > 0 else -1),)
            for _ in range(abs(e)):
                word = self.multiply(word, step)
        if pos != len(text):
            raise ParseError(f"cannot parse free-group word {text!r}")
        return word

    def format(self, a):
        if not a:
            return "1"
        return "".join(f"x{g}" + ("" if e == 1 else "^-1") for g, e in a)


class CayleyTable(Group):
    """A finite group from its multiplication table (identity listed first)."""

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[str]]):
        names = list(names)
        if len(set(names)) != len(names):
            raise ValidationError("repeated element names in the Cayley table")
        n = len(names)
        idx = {s: i for i, s in enumerate(names)}
        if len(table) != n or any(len(row) != n for row in table):
            raise ValidationError(f"Cayley table must be {n}x{n}")
        try:
            self.table = [[idx[s] for s in row] for row in table]
        except KeyError as e:
            raise ValidationError(f"unknown element {e.args[0]!r} in the Cayley table") from None
        self.names = names
        self.name = "cayley"
        T = self.table
        for i in range(n):
            if T[0][i] != i or T[i][0] != i:
                raise ValidationError("the first element must be the identity")
            if sorted(T[i]) != list(range(n)):
                raise ValidationError(f"row of {names[i]!r} is not a permutation")
        for a, b, c in iproduct(range(n), repeat=3):
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise NotAssociative(f"({names[a]}{names[b]}){names[c]} != {names[a]}({names[b]}{names[c]})")
        self._inv = [row.index(0) for row in T]
        self.abelian = all(T[a][b] == T[b][a] for a in range(n) for b in range(n))

    @property
    def identity(self):
        return 0

    def multiply(self, a, b):
        return self.table[a][b]

    def inverse(self, a):
        return self._inv[a]

    def elements(self):
        return list(range(len(self.names)))

    def parse(self, text):
        text = text.strip()
        if text not in self.names:
            raise ParseError(f"unknown element {text!r}")
        return self.names.index(text)

    def format(self, a):
        return self.names[a]


def parse_cayley(text: str, source: str = "<cayley>") -> CayleyTable:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.replace(",", " ").split())
    if not rows:
        raise ParseError("empty Cayley table", source=source)
    return CayleyTable(rows[0], rows[1:])


_BUILTIN = re.compile(r"\s*(\w+)\s*\(")


def parse_builtin(text: str) -> Group:
    """``cyclic(n)``, ``dihedral(n)``, ``free_abelian(r)``, ``free(r)``, ``product(G,H)`` or ``G x H``."""
    text = text.strip()
    if text.startswith("builtin:"):
        text = text[len("builtin:"):]

    def split_top(s: str, sep: str) -> list[str]:
        parts, depth, start = [], 0, 0
        i = 0
        while i < len(s):
            ch = s[i]
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and s.startswith(sep, i):
                parts.append(s[start:i])
                start = i + len(sep)
                i += len(sep)
                continue
            i += 1
        parts.append(s[start:])
        return parts

    factors = split_top(text, " x ")
    if len(factors) > 1:
        groups = [parse_builtin(f) for f in factors]
        out = groups[0]
        for g in groups[1:]:
            out = ProductGroup(out, g)
        return out
    m = re.fullmatch(r"\s*(\w+)\s*\((.*)\)\s*", text)
    if not m:
        raise ParseError(f"cannot parse group {text!r}")
    kind, args = m.group(1), m.group(2)
    if kind == "product":
        parts = split_top(args, ",")
        if len(parts) != 2:
            raise ParseError("product takes two groups")
        return ProductGroup(parse_builtin(parts[0]), parse_builtin(parts[1]))
    try:
        n = int(args)
    except ValueError:
        raise ParseError(f"{kind} expects an integer argument, got {args!r}") from None
    families = {"cyclic": CyclicGroup, "dihedral": DihedralGroup, "free_abelian": FreeAbelianGroup,
                "free": FreeGroup}
    if kind not in families:
        raise ParseError(f"unknown group family {kind!r}")
    return families[kind](n)


# ---------------------------------------------------------------------------
# pointed subsets and Ω


@dataclass
class PointedSubset:
    group: Group
    elements: list

    def __post_init__(self):
        els = list(dict.fromkeys(self.elements))
        if self.group.identity not in els:
            raise IdentityMissing("a pointed subset must contain the identity")
        self.elements = sorted_tokens(els)

    @classmethod
    def parse(cls, group: Group, text: str) -> "PointedSubset":
        return cls(group, [group.parse(t) for t in _split_subset(text)])

    def nontrivial(self) -> list:
        return [x for x in self.elements if x != self.group.identity]


def _split_subset(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [s.strip() for s in out if s.strip()]


class GroupOracle:
    """Composition oracle of a group seen as a one-object category."""

    exterior_scale = 1
    ideal_shortcut = False

    def __init__(self, group: Group, subset: Sequence):
        self.group = group
        self.subset = set(subset) - {group.identity}

    def compose(self, first, second) -> dict:
        if isinstance(first, Identity):
            return {second: 1}
        if isinstance(second, Identity):
            return {first: 1}
        return {self.group.multiply(second, first): 1}

    def classify(self, token) -> Kind:
        if isinstance(token, Identity) or token == self.group.identity:
            return Kind.IDENTITY
        return Kind.IN_Q if token in self.subset else Kind.OTHER

    def tail(self, token):
        return VERTEX

    def head(self, token):
        return VERTEX

    def ambient_arrows(self) -> list:
        if not self.group.finite:
            from .errors import InfiniteAmbient

            raise InfiniteAmbient(f"{self.group.name} is infinite")
        return [g for g in self.group.elements() if g != self.group.identity]


def subset_quiver(p: PointedSubset) -> Quiver:
    return Quiver([VERTEX], {x: (VERTEX, VERTEX) for x in p.nontrivial()})


def omega_group(p: PointedSubset, ring: Ring, n_max: int) -> OmegaComplex:
    """``Ω(G, X)`` through the nerve engine."""
    Q = subset_quiver(p)
    om = omega_complex(GroupOracle(p.group, p.elements), Q, n_max, ring)
    if om.dims[0] != 1 or om.dims[1] != len(p.nontrivial()):
        raise InvariantBreach("Ω_0 must be one-dimensional and Ω_1 spanned by X minus the identity")
    if om.homology(0) != HomologyGroup(1):
        raise InvariantBreach("H_0 of a pointed subset must be the ground ring")
    return om


# ---------------------------------------------------------------------------
# coacyclicity


@dataclass
class CoacyclicReport:
    computed: list[HomologyGroup]
    reference: list[HomologyGroup]
    reference_source: str
    coacyclic: bool
    first_failure: int | None


def coacyclic_check(p: PointedSubset, n_max: int) -> CoacyclicReport:
    """Compare ``H_*(G, X)`` with ``H_*(G)`` over Z degree by degree."""
    Z = Ring.integers()
    G = p.group
    computed = omega_group(p, Z, n_max).homology_all()
    N = len(computed)
    if G.finite:
        reference = omega_group(PointedSubset(G, G.elements()), Z, n_max).homology_all()
        source = "Ω(G, G) computed directly"
    elif isinstance(G, FreeAbelianGroup):
        reference = [HomologyGroup(comb(G.r, i)) for i in range(N)]
        source = f"exterior algebra on {G.r} generators"
    elif isinstance(G, FreeGroup):
        reference = [HomologyGroup(1), HomologyGroup(G.r)] + [HomologyGroup(0)] * max(0, N - 2)
        reference = reference[:N]
        source = f"free group of rank {G.r}"
    else:
        raise UnsupportedAmbient(f"no reference homology for {G.name}")
    failure = next((n for n in range(N) if computed[n] != reference[n]), None)
    return CoacyclicReport(computed, reference, source, failure is None, failure)


# ---------------------------------------------------------------------------
# wedges, unions and products


def wedge(p: PointedSubset, q: PointedSubset) -> PointedSubset:
    """``X ∨ X' = (X × 1) ∪ (1 × X')`` inside ``G × G'``."""
    G = ProductGroup(p.group, q.group)
    e, e2 = p.group.identity, q.group.identity
    return PointedSubset(G, [(x, e2) for x in p.elements] + [(e, y) for y in q.elements])


@dataclass
class WedgeReport:
    subset: PointedSubset
    homology: list[HomologyGroup]
    expected: list[HomologyGroup]
    ez_dims: list[int]


def wedge_check(p: PointedSubset, q: PointedSubset, ring: Ring, n_max: int) -> WedgeReport:
    """Shuffle isomorphism for the wedge and the Künneth sequence over Z."""
    A = omega_group(p, ring, n_max)
    B = omega_group(q, ring, n_max)
    ez = ez_aw(A, B, n_max)
    w = wedge(p, q)
    direct = omega_group(w, ring, n_max)
    if direct.dims != ez.box.dims:
        raise InvariantBreach(f"wedge dims {direct.dims} differ from the box product {ez.box.dims}")
    hom = direct.homology_all()
    if hom != ez.box.homology_all():
        raise InvariantBreach("wedge homology differs between the product group and the box product")
    HA, HB = A.homology_all(), B.homology_all()
    if ring.is_field:
        expected = [HomologyGroup(sum(HA[i].rank * HB[n - i].rank for i in range(n + 1))) for n in range(len(hom))]
    else:
        expected = [kunneth(HA, HB, n) for n in range(len(hom))]
    if hom != expected:
        raise InvariantBreach(f"Künneth formula fails for the wedge: {[str(h) for h in hom]}")
    return WedgeReport(w, hom, expected, ez.box.dims)


def union_hypothesis_witnesses(G: Group, X: Sequence, Y: Sequence) -> list[tuple]:
    """Collisions of the multiplication map on the free-product side.

    In ``G * G`` with ``X`` in the first factor and ``Y`` in the second, the
    square of ``ι(X) ∪ ι(Y)`` consists of ``X^2``, ``Y^2`` and the length-two
    words ``xy``, ``yx`` (``x, y ≠ 1``).  The splitting needs this set to map
    injectively to ``G``; every collision is returned as a witness.
    """
    e = G.identity
    Xb = [x for x in dict.fromkeys(X) if x != e]
    Yb = [y for y in dict.fromkeys(Y) if y != e]
    sources: dict = {}

    def add(label, value):
        sources.setdefault(value, []).append(label)

    add(("1",), e)
    x_sq = {G.multiply(a, b) for a in [e] + Xb for b in [e] + Xb} - {e}
    y_sq = {G.multiply(a, b) for a in [e] + Yb for b in [e] + Yb} - {e}
    for g in sorted_tokens(x_sq):
        add(("X^2", G.format(g)), g)
    for g in sorted_tokens(y_sq):
        add(("Y^2", G.format(g)), g)
    for x in Xb:
        for y in Yb:
            add(("XY", G.format(x), G.format(y)), G.multiply(x, y))
            add(("YX", G.format(y), G.format(x)), G.multiply(y, x))
    return [(G.format(v), labels) for v, labels in sources.items() if len(labels) > 1]


@dataclass
class UnionReport:
    union: list[HomologyGroup]
    left: list[HomologyGroup]
    right: list[HomologyGroup]
    degrees: list[int]


def union_split_check(G: Group, X: Sequence, Y: Sequence, ring: Ring, n_max: int) -> UnionReport:
    """``H_n(G, X ∪ Y) = H_n(G, X) ⊕ H_n(G, Y)`` for ``1 <= n <= n_max - 1``."""
    witnesses = union_hypothesis_witnesses(G, X, Y)
    if witnesses:
        raise HypothesisViolated("products of X and Y collide", witnesses)
    U = omega_group(PointedSubset(G, list(X) + list(Y)), ring, n_max).homology_all()
    A = omega_group(PointedSubset(G, list(X)), ring, n_max).homology_all()
    B = omega_group(PointedSubset(G, list(Y)), ring, n_max).homology_all()
    degrees = list(range(1, len(U)))
    for n in degrees:
        if U[n] != A[n] + B[n]:
            raise InvariantBreach(f"union does not split in degree {n}: {U[n]} vs {A[n]} + {B[n]}")
    return UnionReport(U, A, B, degrees)


# ---------------------------------------------------------------------------
# conjugation


def conjugation_check(p: PointedSubset, q: PointedSubset, f: dict, g: dict, x, ring: Ring, n_max: int):
    """Equal induced maps for homomorphisms related by ``f(y) = x^{-1} g(y) x`` with ``x ∈ X'``."""
    if x not in q.elements:
        raise ValidationError("the conjugating element must lie in the target subset")
    E = omega_group(p, ring, n_max)
    F = omega_group(q, ring, n_max)
    e2 = q.group.identity

    def as_morphism(h: dict) -> QuiverMorphism:
        arrows = {a: (Identity(VERTEX) if h[a] == e2 else h[a]) for a in p.nontrivial()}
        return QuiverMorphism({VERTEX: VERTEX}, arrows)

    phi = {VERTEX: Identity(VERTEX) if x == e2 else x}
    return verify_homotopy(as_morphism(f), as_morphism(g), phi, E, F)


# ---------------------------------------------------------------------------
# Pontryagin product


def shuffle_product(x: tuple, y: tuple) -> dict:
    """Signed shuffles of two tuples (the Eilenberg-Zilber map followed by multiplication)."""
    k, l = len(x), len(y)
    out: dict = {}
    for sh, sign in enumerate_shuffles(l, k):
        nu = set(sh.nu)
        i = j = 0
        entries = []
        for pos in range(k + l):
            if pos in nu:
                entries.append(x[i])
                i += 1
            else:
                entries.append(y[j])
                j += 1
        t = tuple(entries)
        out[t] = out.get(t, 0) + sign
    return {t: c for t, c in out.items() if c}


@dataclass
class PontryaginAlgebra:
    """Structure constants of the Pontryagin product on ``H_*(G, X)`` over a field.

    ``basis[n]`` holds cycle representatives; ``table[(a, i, b, j)]`` is the
    coordinate vector of ``[u_i]·[v_j]`` in ``H_{a+b}``.
    """

    ring: Ring
    dims: list[int]
    table: dict = field(default_factory=dict)

    def multiply(self, a: int, u: Sequence, b: int, v: Sequence) -> list:
        out = [0] * self.dims[a + b]
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if y:
                    for k, z in enumerate(self.table[(a, i, b, j)]):
                        out[k] = self.ring(out[k] + x * y * z)
        return out


def pontryagin(p: PointedSubset, ring: Ring, n_max: int) -> PontryaginAlgebra:
    """Shuffle product followed by the group multiplication, checked on a homology basis."""
    ring.require_field("the Pontryagin product")
    G = p.group
    if not G.abelian:
        raise NotAbelian(f"{G.name} is not abelian")
    om = omega_group(p, ring, n_max)
    top = om.certified_max
    homs = [FieldHomology.compute(om.complex.boundary(n), om.complex.boundary(n + 1)) for n in range(top + 1)]
    dims = [h.dim for h in homs]
    alg = PontryaginAlgebra(ring, dims)

    def as_chain(n, vec):
        chain: dict = {}
        for i, c in enumerate(vec):
            if c:
                for t, a in om.chain(n, i).items():
                    chain[t] = chain.get(t, 0) + c * a
        return chain

    for a in range(top + 1):
        for b in range(top + 1 - a):
            for i, u in enumerate(homs[a].reps):
                cu = as_chain(a, u)
                for j, v in enumerate(homs[b].reps):
                    cv = as_chain(b, v)
                    prod: dict = {}
                    for s, x in cu.items():
                        for t, y in cv.items():
                            left = () if a == 0 else s
                            right = () if b == 0 else t
                            for w, c in shuffle_product(left, right).items():
                                key = VERTEX if a + b == 0 else w
                                prod[key] = prod.get(key, 0) + x * y * c
                    coords = om.coordinates(a + b, prod)
                    if coords is None:
                        raise InvariantBreach("the shuffle product leaves Ω")
                    vec = [coords.get(k, 0) for k in range(om.dims[a + b])]
                    alg.table[(a, i, b, j)] = homs[a + b].coordinates(vec)
    if alg.table != _pontryagin_via_wedge(om, homs, top):
        raise InvariantBreach("the two routes to the Pontryagin product disagree")
    _check_pontryagin(alg, top)
    return alg


def _pontryagin_via_wedge(om: OmegaComplex, homs: list, top: int) -> dict:
    """The same table through ``Ω(G,X) ⊗ Ω(G,X) -> Ω(G×G, X∨X) -> Ω(G,X)``.

    The first map is the shuffle isomorphism of the nerve engine; the second
    multiplies the two coordinates of every entry, which for entries of the
    form ``(x, 1)`` or ``(1, y)`` just keeps the non-identity coordinate.
    """
    ring = om.ring
    ez = ez_aw(om, om, top)
    box = ez.box

    def multiply_entries(t):
        if not isinstance(t, tuple) or not t or not isinstance(t[0], tuple):
            return VERTEX
        return tuple(b if isinstance(a, Identity) else a for a, b in t)

    table = {}
    for a in range(top + 1):
        for b in range(top + 1 - a):
            n = a + b
            pos = {t: q for q, t in enumerate(ez.tensor_index[n])}
            for i, u in enumerate(homs[a].reps):
                for j, v in enumerate(homs[b].reps):
                    tensor = [0] * len(ez.tensor_index[n])
                    for r, x in enumerate(u):
                        for c, y in enumerate(v):
                            if x and y:
                                tensor[pos[(a, r, c)]] = ring(x * y)
                    in_box = ez.epsilon[n].apply(tensor)
                    chain: dict = {}
                    for q, coef in enumerate(in_box):
                        if coef:
                            for t, c in box.chain(n, q).items():
                                key = multiply_entries(t) if n else VERTEX
                                chain[key] = ring(chain.get(key, 0) + coef * c)
                    chain = {k: c for k, c in chain.items() if c}
                    coords = om.coordinates(n, chain)
                    if coords is None:
                        raise InvariantBreach("multiplication leaves Ω")
                    vec = [coords.get(k, 0) for k in range(om.dims[n])]
                    table[(a, i, b, j)] = homs[n].coordinates(vec)
    return table


def _check_pontryagin(alg: PontryaginAlgebra, top: int) -> None:
    ring = alg.ring
    dims = alg.dims
    unit = [1]
    for n in range(top + 1):
        for i in range(dims[n]):
            e = [int(k == i) for k in range(dims[n])]
            if alg.multiply(0, unit, n, e) != e or alg.multiply(n, e, 0, unit) != e:
                raise InvariantBreach("the degree-0 class is not a unit")
    for a in range(top + 1):
        for b in range(top + 1 - a):
            for i in range(dims[a]):
                u = [int(k == i) for k in range(dims[a])]
                for j in range(dims[b]):
                    v = [int(k == j) for k in range(dims[b])]
                    uv = alg.multiply(a, u, b, v)
                    vu = alg.multiply(b, v, a, u)
                    sign = -1 if (a * b) % 2 else 1
                    if uv != [ring(sign * x) for x in vu]:
                        raise InvariantBreach(f"product is not graded-commutative in degrees ({a},{b})")
                    for c in range(top + 1 - a - b):
                        for k in range(dims[c]):
                            w = [int(m == k) for m in range(dims[c])]
                            if alg.multiply(a + b, uv, c, w) != alg.multiply(a, u, b + c, alg.multiply(b, v, c, w)):
                                raise InvariantBreach(f"product is not associative in degrees ({a},{b},{c})")
