"""Exact linear algebra over Z, Q and F_p.

Everything here works on Python integers (arbitrary precision), on
``fractions.Fraction`` for Q, and on residues for F_p.  Dense row reduction
over F_p is delegated to :mod:`pathhom._modp`, which carries the numba
kernel.  No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Sequence

from . import _modp
from .errors import CompositionNotZero, NotField, ParseError, ValidationError


# ---------------------------------------------------------------------------
# rings


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: ``Z``, ``Q`` or ``F_p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValidationError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise ValidationError(f"{self.p} is not prime")

    @classmethod
    def integers(cls) -> "Ring":
        return cls("Z")

    @classmethod
    def rationals(cls) -> "Ring":
        return cls("Q")

    @classmethod
    def prime_field(cls, p: int) -> "Ring":
        return cls("Fp", p)

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip()
        if t in ("Z", "ZZ"):
            return cls.integers()
        if t in ("Q", "QQ"):
            return cls.rationals()
        for prefix in ("Fp:", "F", "GF"):
            if t.startswith(prefix):
                num = t[len(prefix):].lstrip(":(").rstrip(")")
                if num.isdigit():
                    return cls.prime_field(int(num))
        raise ParseError(f"unrecognised ring {text!r} (expected Z, Q or Fp:p)")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def require_field(self, what: str = "this operation") -> None:
        if not self.is_field:
            raise NotField(f"{what} needs field coefficients, got {self}")

    def __str__(self) -> str:
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    def __call__(self, x) -> int | Fraction:
        """Coerce an integer or fraction into the ring."""
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValidationError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def div(self, a, b):
        """Exact quotient ``a / b``; over Z the division must be exact."""
        if self.kind == "Q":
            return Fraction(a) / b
        if self.kind == "Fp":
            return a * pow(b, -1, self.p) % self.p
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} is not divisible by {b}")
        return q

    def is_unit(self, a) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        return self(a) != 0


# ---------------------------------------------------------------------------
# dense matrices


class ExactMatrix:
    """A dense matrix with exact entries over a :class:`Ring`."""

    __slots__ = ("ring", "rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence], ring: Ring, cols: int | None = None):
        self.ring = ring
        self._data = [[ring(x) for x in row] for row in data]
        self.rows = len(self._data)
        if cols is None:
            cols = len(self._data[0]) if self._data else 0
        self.cols = cols
        for row in self._data:
            if len(row) != cols:
                raise ValidationError("ragged matrix")

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)], ring, cols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ring, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], ring: Ring, rows: int) -> "ExactMatrix":
        data = [[0] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                data[i][j] = x
        return cls(data, ring, len(columns))

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], ring: Ring, rows: int) -> "ExactMatrix":
        data = [[0] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                data[i][j] = x
        return cls(data, ring, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def to_lists(self) -> list[list]:
        return [row[:] for row in self._data]

    def row(self, i: int) -> list:
        return self._data[i][:]

    def column(self, j: int) -> list:
        return [row[j] for row in self._data]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                           self.ring, self.rows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValidationError(f"shape mismatch {self.shape} @ {other.shape}")
        norm = self.ring
        out = []
        ocols = other._data
        for row in self._data:
            acc = [0] * other.cols
            for k, a in enumerate(row):
                if a:
                    for j, b in enumerate(ocols[k]):
                        if b:
                            acc[j] += a * b
            out.append([norm(x) for x in acc])
        return ExactMatrix(out, self.ring, other.cols)

    def apply(self, vec: Sequence) -> list:
        return [self.ring(sum(a * b for a, b in zip(row, vec) if a and b)) for row in self._data]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._data for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, tuple(map(tuple, self._data))))

    def __repr__(self) -> str:
        return f"ExactMatrix({self._data!r}, ring={self.ring})"


# ---------------------------------------------------------------------------
# finitely generated abelian groups


def _prime_powers(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append(q)
        d += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Normalise a list of cyclic orders into a divisibility chain."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n <= 1:
            continue
        for q in _prime_powers(n):
            base = next(d for d in range(2, q + 1) if q % d == 0)
            by_prime.setdefault(base, []).append(q)
    if not by_prime:
        return ()
    width = max(len(v) for v in by_prime.values())
    factors = [1] * width
    for qs in by_prime.values():
        qs.sort(reverse=True)
        for i, q in enumerate(qs):
            factors[width - 1 - i] *= q
    return tuple(factors)


@dataclass(frozen=True)
class HomologyGroup:
    """``Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`` with ``d_1 | d_2 | ...``."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", invariant_factors(self.torsion))

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __add__(self, other: "HomologyGroup") -> "HomologyGroup":
        return HomologyGroup(self.rank + other.rank, self.torsion + other.torsion)

    def tensor(self, other: "HomologyGroup") -> "HomologyGroup":
        tors = [d for d in self.torsion for _ in range(other.rank)]
        tors += [d for d in other.torsion for _ in range(self.rank)]
        tors += [gcd(a, b) for a in self.torsion for b in other.torsion]
        return HomologyGroup(self.rank * other.rank, tuple(tors))

    def tor(self, other: "HomologyGroup") -> "HomologyGroup":
        return HomologyGroup(0, tuple(gcd(a, b) for a in self.torsion for b in other.torsion))

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d: dict) -> "HomologyGroup":
        return cls(int(d["rank"]), tuple(int(t) for t in d["torsion"]))

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def direct_sum(groups: Iterable[HomologyGroup]) -> HomologyGroup:
    out = HomologyGroup(0)
    for g in groups:
        out = out + g
    return out


def kunneth(left: Sequence[HomologyGroup], right: Sequence[HomologyGroup], n: int) -> HomologyGroup:
    """Expected ``H_n`` of a tensor product of free complexes over Z."""
    terms = []
    for i in range(n + 1):
        j = n - i
        if i < len(left) and j < len(right):
            terms.append(left[i].tensor(right[j]))
    for i in range(n):
        j = n - 1 - i
        if i < len(left) and j < len(right):
            terms.append(left[i].tor(right[j]))
    return direct_sum(terms)


def betti_exterior(r: int, n: int) -> int:
    return comb(r, n)


# ---------------------------------------------------------------------------
# row reduction


def _field_rref(rows: list[list], ring: Ring, ncols: int) -> tuple[list[list], list[int]]:
    """RREF over a field; returns only the nonzero rows and their pivots."""
    if not rows:
        return [], []
    if ring.kind == "Fp" and ring.p < _modp.MAX_NATIVE_PRIME:
        arr, piv = _modp.rref_mod_p(rows, ring.p)
        return [[int(x) for x in arr[i]] for i in range(len(piv))], piv
    a = [[ring(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = ring.div(1, a[r][c])
        a[r] = [ring(x * inv) for x in a[r]]
        for i in range(nrows):
            f = a[i][c]
            if i != r and f != 0:
                ar = a[r]
                a[i] = [ring(x - f * y) if y else x for x, y in zip(a[i], ar)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Row Hermite normal form of an integer row lattice.

    Returns the nonzero rows (positive pivots, entries above each pivot
    reduced into ``[0, pivot)``) and the pivot columns.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    a = [list(map(int, r)) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            if len(nz) == 1:
                break
            piv = a[r][c]
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        piv = a[r][c]
        for i in range(r):
            q = a[i][c] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        a = a[:r] + [row for row in a[r:] if any(row)]
    return a[:r], pivots


def echelon_rows(rows: Sequence[Sequence], ring: Ring, ncols: int) -> tuple[list[list], list[int]]:
    """Canonical echelon basis of the row span (HNF over Z, RREF over a field)."""
    if ring.is_field:
        return _field_rref([list(r) for r in rows], ring, ncols)
    return hermite_rows(rows, ncols)


def rank(M: ExactMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    if M.ring.is_field:
        return len(_field_rref(M.to_lists(), M.ring, M.cols)[1])
    return sum(1 for d in elementary_divisors(M) if d)


# ---------------------------------------------------------------------------
# kernels


def _integer_kernel_rows(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of the integer kernel, via unimodular column operations."""
    cols_a = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    cols_v = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    k = 0
    for i in range(len(rows)):
        while True:
            nz = [j for j in range(k, ncols) if cols_a[j][i] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols_a[j][i]))
            cols_a[k], cols_a[j0] = cols_a[j0], cols_a[k]
            cols_v[k], cols_v[j0] = cols_v[j0], cols_v[k]
            piv = cols_a[k][i]
            clean = True
            for j in range(k + 1, ncols):
                x = cols_a[j][i]
                if x:
                    q = x // piv
                    if q:
                        cols_a[j] = [u - q * w for u, w in zip(cols_a[j], cols_a[k])]
                        cols_v[j] = [u - q * w for u, w in zip(cols_v[j], cols_v[k])]
                    if cols_a[j][i]:
                        clean = False
            if clean:
                k += 1
                break
        if k == ncols:
            break
    return cols_v[k:]


def kernel_rows(rows: list[list], ring: Ring, ncols: int) -> list[list]:
    """Canonical echelon basis of ``{x : A x = 0}`` given the rows of A."""
    rows = [r for r in rows if any(r)]
    if not rows:
        basis = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
        return echelon_rows(basis, ring, ncols)[0] if ring.is_field else basis
    if ring.is_field:
        red, piv = _field_rref(rows, ring, ncols)
        pivset = set(piv)
        basis = []
        for f in range(ncols):
            if f in pivset:
                continue
            v = [0] * ncols
            v[f] = 1
            for r_i, c in enumerate(piv):
                v[c] = ring(-red[r_i][f])
            basis.append(v)
        return echelon_rows(basis, ring, ncols)[0]
    basis = _integer_kernel_rows([list(map(int, r)) for r in rows], ncols)
    return hermite_rows(basis, ncols)[0]


def kernel_basis(M: ExactMatrix, ring: Ring | None = None) -> list[list]:
    """Column vectors spanning ``ker(M)``.

    Over Z the returned vectors generate the full integer kernel, which is
    automatically a direct summand of the domain.
    """
    ring = ring or M.ring
    return kernel_rows(M.to_lists(), ring, M.cols)


def left_annihilator(columns: Sequence[Sequence], ring: Ring, dim: int) -> list[list]:
    """Rows ``P`` with ``ker(P) = span(columns)`` (saturated span over Z)."""
    if not columns:
        return [[int(i == j) for j in range(dim)] for i in range(dim)]
    return kernel_rows([list(c) for c in columns], ring, dim)


def saturate(columns: Sequence[Sequence], ring: Ring, dim: int) -> list[list]:
    """Echelon basis of ``(Q · span) ∩ Z^dim`` (over a field: of the span)."""
    if ring.is_field:
        return echelon_rows(columns, ring, dim)[0]
    ann = left_annihilator(columns, ring, dim)
    return kernel_rows(ann, ring, dim)


# ---------------------------------------------------------------------------
# sparse echelon bases


class Echelon:
    """A basis in echelon form, able to express vectors in its coordinates.

    Vectors are sparse ``{index: value}`` dictionaries.  The basis rows must
    have strictly increasing leading indices (true for HNF and RREF output
    and for disjoint unions of such blocks).
    """

    def __init__(self, rows: Sequence[dict], ring: Ring):
        self.ring = ring
        items = []
        for r in rows:
            r = {k: v for k, v in r.items() if v}
            if not r:
                raise ValidationError("zero vector in echelon basis")
            items.append((min(r), r))
        items.sort(key=lambda t: t[0])
        self.pivots = [p for p, _ in items]
        if len(set(self.pivots)) != len(self.pivots):
            raise ValidationError("echelon basis with repeated pivots")
        self.rows = [r for _, r in items]
        self._index = {p: i for i, p in enumerate(self.pivots)}

    def __len__(self) -> int:
        return len(self.rows)

    def coordinates(self, vec: dict, strict: bool = True) -> dict[int, object] | None:
        """Return ``c`` with ``vec = Σ c[i] rows[i]``; ``None`` if not in the span."""
        ring = self.ring
        y = {k: v for k, v in vec.items() if v}
        out: dict[int, object] = {}
        for i, (p, row) in enumerate(zip(self.pivots, self.rows)):
            a = y.get(p)
            if not a:
                continue
            try:
                c = ring.div(a, row[p])
            except ArithmeticError:
                if strict:
                    return None
                raise
            out[i] = c
            for k, v in row.items():
                nv = ring(y.get(k, 0) - c * v)
                if nv:
                    y[k] = nv
                else:
                    y.pop(k, None)
        if y:
            return None
        return out

    def contains(self, vec: dict) -> bool:
        return self.coordinates(vec) is not None


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """Return unimodular ``U, V`` and diagonal ``S`` with ``U·M·V = S``.

    Pivots are chosen with minimal absolute value; the diagonal is
    nonnegative and forms a divisibility chain.
    """
    if M.ring.kind != "Z":
        raise ValidationError("smith_normal_form is defined over Z")
    m, n = M.shape
    S = M.to_lists()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        S[dst] = [x - q * y for x, y in zip(S[dst], S[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = S[i][j]
                if x and (best is None or abs(x) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            piv = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, S[i][t] // piv)
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, S[t][j] // piv)
            rest = [(i, t) for i in range(t + 1, m) if S[i][t]] + \
                   [(t, j) for j in range(t + 1, n) if S[t][j]]
            if rest:
                i, j = min(rest, key=lambda ij: abs(S[ij[0]][ij[1]]))
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    Z = M.ring
    return ExactMatrix(U, Z, m), ExactMatrix(S, Z, n), ExactMatrix(V, Z, n)


def _dense_divisors(rows: list[list[int]]) -> list[int]:
    """Smith diagonal of a dense integer matrix, without transforms."""
    S = [r[:] for r in rows if any(r)]
    if not S:
        return []
    m, n = len(S), len(S[0])
    out = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = S[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[2]):
                    best = (i, j, abs(x))
                    if best[2] == 1:
                        break
            if best and best[2] == 1:
                break
        if best is None:
            break
        i0, j0, _ = best
        S[t], S[i0] = S[i0], S[t]
        for row in S:
            row[t], row[j0] = row[j0], row[t]
        while True:
            piv = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // piv
                    S[i] = [x - q * y for x, y in zip(S[i], S[t])]
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // piv
                    for row in S:
                        row[j] -= q * row[t]
            rest = [(i, t) for i in range(t + 1, m) if S[i][t]] + \
                   [(t, j) for j in range(t + 1, n) if S[t][j]]
            if rest:
                i, j = min(rest, key=lambda ij: abs(S[ij[0]][ij[1]]))
                if j == t:
                    S[t], S[i] = S[i], S[t]
                else:
                    for row in S:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv), None)
            if bad is None:
                break
            S[t] = [x + y for x, y in zip(S[t], S[bad])]
        out.append(abs(S[t][t]))
        t += 1
    return out


def elementary_divisors(M: ExactMatrix | Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith diagonal entries of an integer matrix.

    Unit pivots are eliminated sparsely first; only the residual block goes
    through dense Smith reduction.
    """
    rows = M.to_lists() if isinstance(M, ExactMatrix) else [list(r) for r in M]
    sparse = [{j: int(x) for j, x in enumerate(r) if x} for r in rows]
    sparse = [r for r in sparse if r]
    col_index: dict[int, set[int]] = {}
    for ri, r in enumerate(sparse):
        for j in r:
            col_index.setdefault(j, set()).add(ri)
    alive = set(range(len(sparse)))
    divisors: list[int] = []
    progress = True
    while progress:
        progress = False
        for ri in sorted(alive):
            row = sparse[ri]
            unit_col = next((j for j in sorted(row) if row[j] in (1, -1)), None)
            if unit_col is None:
                continue
            sign = row[unit_col]
            for rj in sorted(col_index[unit_col] - {ri}):
                other = sparse[rj]
                f = other[unit_col] * sign
                for j, x in row.items():
                    nv = other.get(j, 0) - f * x
                    if nv:
                        if j not in other:
                            col_index.setdefault(j, set()).add(rj)
                        other[j] = nv
                    else:
                        other.pop(j, None)
                        col_index[j].discard(rj)
                if not other:
                    alive.discard(rj)
            for j in row:
                col_index[j].discard(ri)
            alive.discard(ri)
            divisors.append(1)
            progress = True
    if alive:
        cols = sorted({j for ri in alive for j in sparse[ri]})
        pos = {j: k for k, j in enumerate(cols)}
        dense = []
        for ri in sorted(alive):
            r = [0] * len(cols)
            for j, x in sparse[ri].items():
                r[pos[j]] = x
            dense.append(r)
        divisors += _dense_divisors(dense)
    return sorted(divisors)


# ---------------------------------------------------------------------------
# homology


def _check_composition(d_out: ExactMatrix, d_in: ExactMatrix) -> None:
    if d_out.cols != d_in.rows:
        raise CompositionNotZero(f"incompatible shapes {d_out.shape} and {d_in.shape}")
    if d_out.rows and d_in.cols and not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out · d_in is not zero")


def homology_at(d_out: ExactMatrix, d_in: ExactMatrix, ring: Ring | None = None) -> HomologyGroup:
    """``ker(d_out) / im(d_in)`` as free rank plus torsion."""
    ring = ring or d_out.ring
    _check_composition(d_out, d_in)
    n = d_out.cols
    r_out = rank(d_out)
    if ring.is_field:
        return HomologyGroup(n - r_out - rank(d_in))
    divs = elementary_divisors(d_in) if d_in.rows and d_in.cols else []
    return HomologyGroup(n - r_out - len(divs), tuple(d for d in divs if d > 1))


@dataclass
class FieldHomology:
    """Explicit homology of one degree over a field.

    ``reps`` are cycle representatives (dense vectors) of a basis of
    ``ker(d_out)/im(d_in)``; :meth:`coordinates` maps a cycle to its class.
    """

    ring: Ring
    dim: int
    reps: list[list]
    _basis: Echelon = field(repr=False)
    _n_boundary: int = field(repr=False, default=0)

    @classmethod
    def compute(cls, d_out: ExactMatrix, d_in: ExactMatrix) -> "FieldHomology":
        ring = d_out.ring
        ring.require_field("explicit homology")
        _check_composition(d_out, d_in)
        n = d_out.cols
        cycles = kernel_rows(d_out.to_lists(), ring, n) if d_out.rows else \
            [[int(i == j) for i in range(n)] for j in range(n)]
        bounds = echelon_rows(d_in.columns(), ring, n)[0] if d_in.cols else []
        # extend the boundary basis to a basis of the cycles
        reps = []
        span = [list(b) for b in bounds]
        current = len(echelon_rows(span, ring, n)[1]) if span else 0
        for z in cycles:
            trial = span + [z]
            r = len(echelon_rows(trial, ring, n)[1])
            if r > current:
                span = trial
                current = r
                reps.append(z)
        rows = [dict((i, x) for i, x in enumerate(v) if x) for v in bounds + reps]
        # re-echelonise while remembering which combination is which
        return cls(ring, len(reps), reps, _CombinedBasis(rows, len(bounds), ring, n), len(bounds))

    def coordinates(self, cycle: Sequence) -> list:
        return self._basis.class_of(cycle)


class _CombinedBasis:
    """Solve ``v = Σ b_i + Σ c_j rep_j`` and return ``c`` (field only)."""

    def __init__(self, rows: list[dict], n_bounds: int, ring: Ring, n: int):
        self.ring = ring
        self.n = n
        self.n_bounds = n_bounds
        self.k = len(rows)
        # augmented RREF: [vectors | identity] to track combinations
        aug = []
        for i, r in enumerate(rows):
            row = [0] * (n + self.k)
            for j, x in r.items():
                row[j] = x
            row[n + i] = 1
            aug.append(row)
        red, piv = _field_rref(aug, ring, n + self.k) if aug else ([], [])
        self.red = red
        self.piv = piv

    def class_of(self, vec: Sequence) -> list:
        ring = self.ring
        y = [ring(x) for x in vec] + [0] * self.k
        combo = [0] * self.k
        for row, c in zip(self.red, self.piv):
            if c >= self.n:
                break
            a = y[c]
            if a:
                y = [ring(u - a * w) for u, w in zip(y, row)]
        if any(y[: self.n]):
            raise ValidationError("vector is not a cycle in the span")
        # y[n:] now holds -(combination); the tail records the coefficients
        combo = [ring(-x) for x in y[self.n:]]
        return combo[self.n_bounds:]
