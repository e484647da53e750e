"""Combinatorics of connected order-preserving maps and shuffles.

A connected map ``[n] -> [m]`` is a nondecreasing map whose consecutive
values differ by 0 or 1 (so its image is an interval).  Maps are stored as
explicit value tuples; normal forms are derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb

from .errors import NotConnected, ValidationError


@dataclass(frozen=True)
class ConnectedMap:
    """``f: [n] -> [codomain]`` given by ``values = (f(0), ..., f(n))``."""

    codomain: int
    values: tuple[int, ...]

    def __post_init__(self):
        v = tuple(int(x) for x in self.values)
        object.__setattr__(self, "values", v)
        if not v:
            raise ValidationError("a map needs a nonempty domain")
        if v[0] < 0 or v[-1] > self.codomain:
            raise NotConnected(f"values {v} leave [0, {self.codomain}]")
        for a, b in zip(v, v[1:]):
            if b - a not in (0, 1):
                raise NotConnected(f"values {v} do not form a connected map")

    @property
    def domain(self) -> int:
        return len(self.values) - 1

    @classmethod
    def identity(cls, n: int) -> "ConnectedMap":
        return cls(n, tuple(range(n + 1)))

    @classmethod
    def codegeneracy(cls, i: int, n: int) -> "ConnectedMap":
        """``s^(i): [n+1] -> [n]`` hitting ``i`` twice."""
        if not 0 <= i <= n:
            raise ValidationError("codegeneracy index out of range")
        return cls(n, tuple(range(i + 1)) + tuple(range(i, n + 1)))

    @classmethod
    def first_coface(cls, n: int) -> "ConnectedMap":
        """``t = d^0: [n-1] -> [n]`` (misses the first point)."""
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def last_coface(cls, n: int) -> "ConnectedMap":
        """``h = d^n: [n-1] -> [n]`` (misses the last point)."""
        return cls(n, tuple(range(n)))

    @classmethod
    def from_kernel(cls, kernel, n: int, start: int = 0, codomain: int | None = None) -> "ConnectedMap":
        """The connected map on ``[n]`` starting at ``start`` whose flat steps are ``kernel``."""
        kernel = set(kernel)
        vals = [start]
        for j in range(n):
            vals.append(vals[-1] + (0 if j in kernel else 1))
        if codomain is None:
            codomain = vals[-1]
        return cls(codomain, tuple(vals))

    @property
    def kernel(self) -> frozenset[int]:
        v = self.values
        return frozenset(i for i in range(len(v) - 1) if v[i] == v[i + 1])

    def is_injective(self) -> bool:
        return not self.kernel

    def is_surjective(self) -> bool:
        return self.values[0] == 0 and self.values[-1] == self.codomain

    def __call__(self, i: int) -> int:
        return self.values[i]

    def after(self, other: "ConnectedMap") -> "ConnectedMap":
        """Composite ``self ∘ other``."""
        if other.codomain != self.domain:
            raise ValidationError("maps are not composable")
        return ConnectedMap(self.codomain, tuple(self.values[x] for x in other.values))

    def image_factorisation(self) -> tuple["ConnectedMap", "ConnectedMap"]:
        """``self = mono ∘ epi`` with ``epi`` surjective and ``mono`` injective."""
        lo, hi = self.values[0], self.values[-1]
        epi = ConnectedMap(hi - lo, tuple(x - lo for x in self.values))
        mono = ConnectedMap(self.codomain, tuple(range(lo, hi + 1)))
        return mono, epi


def normal_form(f: ConnectedMap) -> tuple[int, int, list[int]]:
    """``(k, l, [i_1 < ... < i_m])`` with ``f = h^k t^l s^(i_1) ... s^(i_m)``."""
    return f.codomain - f.values[-1], f.values[0], sorted(f.kernel)


def from_normal_form(h_count: int, t_count: int, indices, domain: int) -> ConnectedMap:
    """Compose the generators of a normal form back into a map on ``[domain]``."""
    idx = sorted(indices)
    if len(set(idx)) != len(idx):
        raise ValidationError("degeneracy indices must be distinct")
    f = ConnectedMap.identity(domain)
    # rightmost generator acts first: s^(i_m), then ..., then s^(i_1)
    for i in reversed(idx):
        f = ConnectedMap.codegeneracy(i, f.codomain - 1).after(f)
    for _ in range(t_count):
        f = ConnectedMap.first_coface(f.codomain + 1).after(f)
    for _ in range(h_count):
        f = ConnectedMap.last_coface(f.codomain + 1).after(f)
    return f


def connected_maps(n: int, m: int):
    """All connected maps ``[n] -> [m]`` in lexicographic order of values."""
    for start in range(m + 1):
        for steps in product((0, 1), repeat=n):
            if start + sum(steps) <= m:
                vals = [start]
                for s in steps:
                    vals.append(vals[-1] + s)
                yield ConnectedMap(m, tuple(vals))


# ---------------------------------------------------------------------------
# shuffles


@dataclass(frozen=True)
class Shuffle:
    """An ``(l, k)``-shuffle: ``mu`` has ``l`` entries, ``nu`` has ``k``."""

    mu: tuple[int, ...]
    nu: tuple[int, ...]

    def __post_init__(self):
        mu, nu = tuple(self.mu), tuple(self.nu)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        n = len(mu) + len(nu)
        if list(mu) != sorted(set(mu)) or list(nu) != sorted(set(nu)):
            raise ValidationError("shuffle entries must be strictly increasing")
        if set(mu) | set(nu) != set(range(n)):
            raise ValidationError("mu and nu must partition {0, ..., n-1}")

    @property
    def size(self) -> int:
        return len(self.mu) + len(self.nu)

    @property
    def sign(self) -> int:
        """``(-1)^#{(i, j) : nu_i > mu_j}``."""
        inv = sum(1 for a in self.nu for b in self.mu if a > b)
        return -1 if inv % 2 else 1

    def mu_map(self) -> ConnectedMap:
        """``s^mu : [k+l] -> [k]``, flat exactly on ``mu``."""
        return ConnectedMap.from_kernel(self.mu, self.size, codomain=len(self.nu))

    def nu_map(self) -> ConnectedMap:
        return ConnectedMap.from_kernel(self.nu, self.size, codomain=len(self.mu))

    def inversions(self) -> list[int]:
        """Elementary inversions: ``i`` with ``i-1 in nu`` and ``i in mu``."""
        mu, nu = set(self.mu), set(self.nu)
        return [i for i in range(1, self.size) if i - 1 in nu and i in mu]

    def flip(self, i: int) -> "Shuffle":
        if i not in self.inversions():
            raise ValidationError(f"{i} is not an elementary inversion of {self}")
        mu = tuple(sorted((set(self.mu) - {i}) | {i - 1}))
        nu = tuple(sorted((set(self.nu) - {i - 1}) | {i}))
        return Shuffle(mu, nu)


def enumerate_shuffles(l: int, k: int) -> list[tuple[Shuffle, int]]:
    """All ``(l, k)``-shuffles with their signs, ordered by ``mu``."""
    if l < 0 or k < 0:
        raise ValidationError("shuffle sizes must be nonnegative")
    n = l + k
    out = []
    for mu in combinations(range(n), l):
        nu = tuple(i for i in range(n) if i not in mu)
        s = Shuffle(mu, nu)
        out.append((s, s.sign))
    return out


@dataclass(frozen=True)
class ShuffleGraph:
    vertices: tuple[Shuffle, ...]
    edges: tuple[tuple[Shuffle, Shuffle, int], ...]

    def is_weakly_connected(self) -> bool:
        if not self.vertices:
            return True
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b, _ in self.edges:
            parent[find(a)] = find(b)
        return len({find(v) for v in self.vertices}) == 1


def shuffle_graph(l: int, k: int) -> ShuffleGraph:
    verts = [s for s, _ in enumerate_shuffles(l, k)]
    edges = [(s, s.flip(i), i) for s in verts for i in s.inversions()]
    g = ShuffleGraph(tuple(verts), tuple(edges))
    if not g.is_weakly_connected():  # pragma: no cover - guaranteed combinatorially
        raise AssertionError(f"shuffle graph Sh({l},{k}) is not weakly connected")
    return g


def _compose_values(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(outer[x] for x in inner)


def edge_lemma_holds(src: Shuffle, dst: Shuffle, i: int) -> bool:
    """Check the factorisation identities attached to an edge of weight ``i``.

    With ``d^i: [n-1] -> [n]`` the interior coface missing ``i``, the maps
    ``s^mu d^i`` and ``s^mu' d^i`` agree (likewise for ``nu``), both
    composites are surjective, and their kernels cover ``[n-2]`` minus
    ``{i-1}``.
    """
    n = src.size
    coface = tuple(j for j in range(n + 1) if j != i)
    sm = _compose_values(src.mu_map().values, coface)
    sn = _compose_values(src.nu_map().values, coface)
    if sm != _compose_values(dst.mu_map().values, coface):
        return False
    if sn != _compose_values(dst.nu_map().values, coface):
        return False
    f = ConnectedMap(len(src.nu), sm)
    g = ConnectedMap(len(src.mu), sn)
    if not (f.is_surjective() and g.is_surjective()):
        return False
    if f.kernel & g.kernel:
        return False
    return (f.kernel | g.kernel) == frozenset(range(n - 1)) - {i - 1}


# ---------------------------------------------------------------------------
# pairs of connected maps


@dataclass(frozen=True)
class SquarePair:
    """Connected maps ``f: [n] -> [k]``, ``g: [n] -> [l]`` whose kernels cover ``[n-1]``."""

    f: ConnectedMap
    g: ConnectedMap

    def __post_init__(self):
        if self.f.domain != self.g.domain:
            raise ValidationError("pair members need a common domain")
        if (self.f.kernel | self.g.kernel) != frozenset(range(self.f.domain)):
            raise ValidationError("kernels do not cover [n-1]")

    @property
    def n(self) -> int:
        return self.f.domain

    def is_nondegenerate(self) -> bool:
        return not (self.f.kernel & self.g.kernel)


def enumerate_ppi_square(n: int, k: int, l: int) -> list[SquarePair]:
    out = []
    full = frozenset(range(n))
    for f in connected_maps(n, k):
        for g in connected_maps(n, l):
            if (f.kernel | g.kernel) == full:
                out.append(SquarePair(f, g))
    return out


def enumerate_ps_square(n: int, k: int, l: int) -> list[SquarePair]:
    """Surjective nondegenerate pairs: exactly the shuffle pairs when ``n = k + l``."""
    return [p for p in enumerate_ppi_square(n, k, l)
            if p.f.is_surjective() and p.g.is_surjective() and p.is_nondegenerate()]


def count_box_paths(n: int, k: int, l: int) -> int:
    """Number of n-simplices of the nerve of ``q^k □ q^l`` (grid walks)."""
    total = 0
    # choose how many right, up and stay steps; positions are arbitrary
    for a in range(k + 1):
        for b in range(l + 1):
            stays = n - a - b
            if stays < 0:
                continue
            ways = comb(n, a) * comb(n - a, b)
            total += ways * (k - a + 1) * (l - b + 1)
    return total


@dataclass(frozen=True)
class StandardDecomposition:
    alpha: ConnectedMap
    sigma: ConnectedMap
    mu: tuple[int, ...]
    beta: ConnectedMap
    nu: tuple[int, ...]

    def recompose(self, n: int) -> tuple[ConnectedMap, ConnectedMap]:
        s_mu = ConnectedMap.from_kernel(self.mu, n)
        s_nu = ConnectedMap.from_kernel(self.nu, n)
        return self.alpha.after(self.sigma).after(s_mu), self.beta.after(s_nu)


def standard_decomposition(p: SquarePair) -> StandardDecomposition:
    """``(f, g) = (alpha sigma s^mu, beta s^nu)``."""
    n = p.n
    beta, g_epi = p.g.image_factorisation()
    nu = tuple(sorted(g_epi.kernel))
    mu = tuple(i for i in range(n) if i not in nu)
    s_mu = ConnectedMap.from_kernel(mu, n)
    # f is flat on mu, so it factors through s_mu
    f_prime = ConnectedMap(p.f.codomain, tuple(p.f.values[s_mu.values.index(j)]
                                               for j in range(s_mu.codomain + 1)))
    if f_prime.after(s_mu) != p.f:  # pragma: no cover - forced by the kernel condition
        raise AssertionError("f does not factor through s^mu")
    alpha, sigma = f_prime.image_factorisation()
    return StandardDecomposition(alpha, sigma, mu, beta, nu)
