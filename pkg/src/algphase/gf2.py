"""GF(2) linear algebra on int bitsets, plus the truncated rings F2[u]/(u^k).

Vectors are Python ints: bit ``j`` holds coordinate ``j``.  Row reduction
picks the lowest set bit of each row as its pivot, so a reduced basis has
strictly increasing pivot columns and every pivot column is cleared in the
other rows.  That canonical form makes subspace equality plain tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence


def bits_of(v: int) -> list[int]:
    """Indices of the set bits of ``v``, ascending."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def parity(v: int) -> int:
    return v.bit_count() & 1


def weight(v: int) -> int:
    return v.bit_count()


def pivot(v: int) -> int:
    return (v & -v).bit_length() - 1


def vec_to_list(v: int, n: int) -> list[int]:
    return [(v >> j) & 1 for j in range(n)]


def list_to_vec(bits: Sequence[int]) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"expected 0/1 entries, got {b!r}")
        if b:
            v |= 1 << j
    return v


def echelon(rows: Iterable[int]) -> list[int]:
    """Reduced row-echelon basis of the span of ``rows``, sorted by pivot."""
    basis: dict[int, int] = {}
    for r in rows:
        for p, b in basis.items():
            if (r >> p) & 1:
                r ^= b
        if not r:
            continue
        p = pivot(r)
        for q in basis:
            if (basis[q] >> p) & 1:
                basis[q] ^= r
        basis[p] = r
    return [basis[p] for p in sorted(basis)]


def reduce_vec(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` against a reduced echelon basis."""
    for b in basis:
        if (v >> pivot(b)) & 1:
            v ^= b
    return v


class Echelon:
    """Incrementally maintained reduced echelon basis."""

    def __init__(self, rows: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, v: int) -> int:
        for p, b in self.rows.items():
            if (v >> p) & 1:
                v ^= b
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; False when it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = pivot(v)
        for q, b in self.rows.items():
            if (b >> p) & 1:
                self.rows[q] = b ^ v
        self.rows[p] = v
        return True

    def __len__(self) -> int:
        return len(self.rows)

    def basis(self) -> list[int]:
        return [self.rows[p] for p in sorted(self.rows)]


def rank(rows: Iterable[int]) -> int:
    return len(echelon(rows))


def left_kernel(rows: Sequence[int], width: int) -> list[int]:
    """Canonical basis of ``{x : XOR of rows[j] over bits j of x == 0}``."""
    tagged = [r | (1 << (width + j)) for j, r in enumerate(rows)]
    mask = (1 << width) - 1
    return echelon(r >> width for r in echelon(tagged) if not r & mask)


@dataclass(frozen=True)
class GF2Matrix:
    """Dense matrix over GF(2); ``data[r]`` is row ``r`` as a bitset."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        limit = 1 << self.cols
        if any(r < 0 or r >= limit for r in self.data):
            raise ValueError("row has bits beyond the column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "GF2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> "GF2Matrix":
        data = [0] * rows
        for j, c in enumerate(columns):
            for i in bits_of(c):
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "GF2Matrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(list_to_vec(r) for r in rows))

    def to_lists(self) -> list[list[int]]:
        return [vec_to_list(r, self.cols) for r in self.data]

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.data))

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.cols)]

    def apply(self, v: int) -> int:
        """Matrix times column vector."""
        out = 0
        for i, r in enumerate(self.data):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        data = []
        for r in self.data:
            acc = 0
            for k in bits_of(r):
                acc ^= other.data[k]
            data.append(acc)
        return GF2Matrix(self.rows, other.cols, tuple(data))

    def __add__(self, other: "GF2Matrix") -> "GF2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return GF2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix(self.cols, self.rows, tuple(self.columns()))

    def is_zero(self) -> bool:
        return not any(self.data)

    def flat(self) -> int:
        """Row-major bitset of all entries."""
        out = 0
        for i, r in enumerate(self.data):
            out |= r << (i * self.cols)
        return out

    @classmethod
    def from_flat(cls, v: int, rows: int, cols: int) -> "GF2Matrix":
        mask = (1 << cols) - 1
        return cls(rows, cols, tuple((v >> (i * cols)) & mask for i in range(rows)))


def rref(m: GF2Matrix) -> tuple[GF2Matrix, int]:
    """Reduced row-echelon form (zero rows at the bottom) and rank."""
    basis = echelon(m.data)
    data = tuple(basis) + (0,) * (m.rows - len(basis))
    return GF2Matrix(m.rows, m.cols, data), len(basis)


@dataclass(frozen=True)
class GF2Subspace:
    """Subspace of GF(2)^n held by its canonical reduced echelon basis."""

    ambient_dim: int
    basis: tuple[int, ...]

    def __post_init__(self):
        limit = 1 << self.ambient_dim
        pivots = [pivot(b) for b in self.basis]
        if any(b <= 0 or b >= limit for b in self.basis):
            raise ValueError("basis rows must be nonzero and fit the ambient space")
        if pivots != sorted(set(pivots)):
            raise ValueError("pivots must be strictly increasing")
        for i, p in enumerate(pivots):
            for j, c in enumerate(self.basis):
                if i != j and (c >> p) & 1:
                    raise ValueError("basis is not in reduced echelon form")

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[int]) -> "GF2Subspace":
        return cls(ambient_dim, tuple(echelon(vectors)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "GF2Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "GF2Subspace":
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(pivot(b) for b in self.basis)

    def reduce(self, v: int) -> int:
        return reduce_vec(v, self.basis)

    def contains(self, v: int) -> bool:
        if v >> self.ambient_dim:
            raise ValueError("vector does not fit the ambient space")
        return self.reduce(v) == 0

    def __contains__(self, v: int) -> bool:
        return self.contains(v)

    def _check(self, other: "GF2Subspace") -> None:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: "GF2Subspace") -> "GF2Subspace":
        self._check(other)
        return GF2Subspace.span(self.ambient_dim, self.basis + other.basis)

    def __and__(self, other: "GF2Subspace") -> "GF2Subspace":
        self._check(other)
        n = self.ambient_dim
        rows = [b | (b << n) for b in self.basis] + list(other.basis)
        mask = (1 << n) - 1
        return GF2Subspace.span(n, (r >> n for r in echelon(rows) if not r & mask))

    def __le__(self, other: "GF2Subspace") -> bool:
        self._check(other)
        return all(other.reduce(b) == 0 for b in self.basis)

    def __lt__(self, other: "GF2Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def is_zero(self) -> bool:
        return not self.basis

    def complement_coords(self) -> list[int]:
        """Non-pivot coordinates; their unit vectors span a complement."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def coords(self, v: int) -> int:
        """Coordinates of ``v`` in this basis (bit i = coefficient of basis[i])."""
        out = 0
        for i, b in enumerate(self.basis):
            if (v >> pivot(b)) & 1:
                v ^= b
                out |= 1 << i
        if v:
            raise ValueError("vector is not in the subspace")
        return out

    def to_lists(self) -> list[list[int]]:
        return [vec_to_list(b, self.ambient_dim) for b in self.basis]

    @classmethod
    def from_lists(cls, ambient_dim: int, rows: Sequence[Sequence[int]]) -> "GF2Subspace":
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("row length does not match the ambient dimension")
        vecs = [list_to_vec(r) for r in rows]
        s = cls.span(ambient_dim, vecs)
        if s.dim != len(vecs) or list(s.basis) != vecs:
            raise ValueError("rows are not a canonical reduced echelon basis")
        return s


def subspace_contains(s: GF2Subspace, v: int) -> bool:
    return s.contains(v)


def subspace_mul(s: GF2Subspace, t: GF2Subspace, mul: Callable[[int, int], int]) -> GF2Subspace:
    """Span of all products ``x*y`` with ``x`` and ``y`` running over the bases."""
    s._check(t)
    return GF2Subspace.span(s.ambient_dim, (mul(x, y) for x in s.basis for y in t.basis))


# -- F2[u]/(u^k) --------------------------------------------------------------


@dataclass(frozen=True)
class NilRingElem:
    """Element of F2[u]/(u^k); bit i of ``coeffs`` is the coefficient of u^i."""

    coeffs: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("nilpotency order k must be >= 1")
        if self.coeffs < 0 or self.coeffs >> self.k:
            raise ValueError(f"coefficients {self.coeffs:b} exceed degree {self.k - 1}")

    @classmethod
    def one(cls, k: int) -> "NilRingElem":
        return cls(1, k)

    @classmethod
    def zero(cls, k: int) -> "NilRingElem":
        return cls(0, k)

    @classmethod
    def u(cls, k: int) -> "NilRingElem":
        return cls(2 if k > 1 else 0, k)

    def _same(self, other: "NilRingElem") -> None:
        if not isinstance(other, NilRingElem) or other.k != self.k:
            raise ValueError("ring mismatch")

    def __add__(self, other: "NilRingElem") -> "NilRingElem":
        self._same(other)
        return NilRingElem(self.coeffs ^ other.coeffs, self.k)

    __sub__ = __add__

    def __mul__(self, other: "NilRingElem") -> "NilRingElem":
        return nr_mul(self, other)

    def __bool__(self) -> bool:
        return self.coeffs != 0

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in bits_of(self.coeffs):
            terms.append("1" if i == 0 else "u" if i == 1 else f"u^{i}")
        return "+".join(terms)


def nr_mul(a: NilRingElem, b: NilRingElem) -> NilRingElem:
    """Carry-less product truncated at u^k."""
    a._same(b)
    acc = 0
    for i in bits_of(a.coeffs):
        acc ^= b.coeffs << i
    return NilRingElem(acc & ((1 << a.k) - 1), a.k)


def frobenius_lambda(a: NilRingElem) -> int:
    """Top coefficient (of u^(k-1)); the identity when k == 1."""
    return (a.coeffs >> (a.k - 1)) & 1
