"""Heisenberg-type phases over F2[u]/(u^k).

The phase is spanned by symbols ``Z^a D(w)`` for ``a`` in {0, 1} and ``w`` in
``W = R^n ⊕ R^n`` with ``D(w) D(w') = Z^Ω(w, w') D(w + w')`` and ``Z`` a
central involution.  Since ``Ω`` is GF(2)-bilinear this is the group algebra
of a central extension of ``W`` by ``Z/2``.

Basis order: index ``a * |W| + idx(w)`` where ``idx`` concatenates the
coefficient bits of ``x_1..x_n, ξ_1..ξ_n`` (``k`` bits each, low bit first),
so ``idx(w + w') = idx(w) ^ idx(w')``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import lru_cache

from .gf2 import GF2Subspace, NilRingElem, frobenius_lambda, nr_mul
from .maps import IsoSearchResult, iso_search, rigidity_island
from .phase import Phase, boundary_quotient, induce_phase, square_zero_extend, validate_phase

COCYCLES = ("alternating", "polarized")


@dataclass(frozen=True)
class HeisenbergSpec:
    n: int
    k: int
    cocycle: str = "alternating"

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("need n >= 1 and k >= 1")
        if self.cocycle not in COCYCLES:
            raise ValueError(f"cocycle must be one of {COCYCLES}")
        if 2 * (2**self.k) ** (2 * self.n) > 2**12:
            raise ValueError("phase would exceed 4096 basis elements")

    @classmethod
    def parse(cls, text: str) -> "HeisenbergSpec":
        """Parse ``heisenberg:n=1,k=2[,cocycle=alternating]``."""
        m = re.fullmatch(r"heisenberg:(.*)", text.strip())
        if not m:
            raise ValueError(f"not a heisenberg spec: {text!r}")
        fields = {}
        for part in filter(None, m.group(1).split(",")):
            key, sep, val = part.partition("=")
            if not sep or key not in ("n", "k", "cocycle"):
                raise ValueError(f"bad field {part!r}")
            fields[key] = val
        if "n" not in fields or "k" not in fields:
            raise ValueError("spec needs n= and k=")
        return cls(int(fields["n"]), int(fields["k"]), fields.get("cocycle", "alternating"))

    def __str__(self) -> str:
        return f"heisenberg:n={self.n},k={self.k},cocycle={self.cocycle}"

    @property
    def w_size(self) -> int:
        return 2 ** (2 * self.n * self.k)


@dataclass(frozen=True)
class PhasePoint:
    x: tuple[NilRingElem, ...]
    xi: tuple[NilRingElem, ...]

    def __post_init__(self):
        if len(self.x) != len(self.xi) or not self.x:
            raise ValueError("x and xi need the same positive length")
        ks = {e.k for e in self.x + self.xi}
        if len(ks) != 1:
            raise ValueError("all entries must live in the same ring")

    @property
    def k(self) -> int:
        return self.x[0].k

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(tuple(a + b for a, b in zip(self.x, other.x)), tuple(a + b for a, b in zip(self.xi, other.xi)))

    def scale(self, r: NilRingElem) -> "PhasePoint":
        return PhasePoint(tuple(nr_mul(r, a) for a in self.x), tuple(nr_mul(r, a) for a in self.xi))

    def index(self) -> int:
        k = self.k
        out = 0
        for c, e in enumerate(self.x + self.xi):
            out |= e.coeffs << (k * c)
        return out

    @classmethod
    def from_index(cls, idx: int, n: int, k: int) -> "PhasePoint":
        mask = (1 << k) - 1
        comps = [NilRingElem((idx >> (k * c)) & mask, k) for c in range(2 * n)]
        return cls(tuple(comps[:n]), tuple(comps[n:]))

    def __str__(self) -> str:
        return ",".join(map(str, self.x)) + ";" + ",".join(map(str, self.xi))


def _dot(a: tuple[NilRingElem, ...], b: tuple[NilRingElem, ...]) -> NilRingElem:
    acc = NilRingElem.zero(a[0].k)
    for s, t in zip(a, b):
        acc = acc + nr_mul(s, t)
    return acc


def _check_pair(w: PhasePoint, w2: PhasePoint) -> None:
    if len(w.x) != len(w2.x) or w.k != w2.k:
        raise ValueError("points come from different specs")


def omega(w: PhasePoint, w2: PhasePoint) -> NilRingElem:
    """``ξ·x' − ξ'·x`` in the ring (minus is plus in characteristic 2)."""
    _check_pair(w, w2)
    return _dot(w.xi, w2.x) + _dot(w2.xi, w.x)


def capital_omega(w: PhasePoint, w2: PhasePoint, cocycle: str = "alternating") -> int:
    _check_pair(w, w2)
    if cocycle == "alternating":
        return frobenius_lambda(omega(w, w2))
    if cocycle == "polarized":
        return frobenius_lambda(_dot(w.xi, w2.x))
    raise ValueError(f"unknown cocycle {cocycle!r}")


@lru_cache(maxsize=None)
def _omega_table(spec: HeisenbergSpec) -> tuple[tuple[int, ...], ...]:
    pts = [PhasePoint.from_index(i, spec.n, spec.k) for i in range(spec.w_size)]
    return tuple(tuple(capital_omega(a, b, spec.cocycle) for b in pts) for a in pts)


def basis_labels(spec: HeisenbergSpec) -> list[str]:
    out = []
    for a in (0, 1):
        for i in range(spec.w_size):
            w = PhasePoint.from_index(i, spec.n, spec.k)
            out.append(("Z*" if a else "") + f"D({w})")
    return out


def heisenberg_algebra(spec: HeisenbergSpec) -> Phase:
    """The twisted group algebra with the trivial filtration."""
    size = spec.w_size
    om = _omega_table(spec)
    table = []
    for a in (0, 1):
        for i in range(size):
            row = []
            for b in (0, 1):
                for j in range(size):
                    c = a ^ b ^ om[i][j]
                    row.append(1 << (c * size + (i ^ j)))
            table.append(row)
    return Phase.from_table(basis_labels(spec), 1, table, augmentation=(1 << (2 * size)) - 1)


def boundary_generators(spec: HeisenbergSpec) -> list[int]:
    """Basis indices of ``D(u w)``, the elements whose ``D(uw) - 1`` span the boundary."""
    u = NilRingElem.u(spec.k)
    idx = {PhasePoint.from_index(i, spec.n, spec.k).scale(u).index() for i in range(spec.w_size)}
    return sorted(idx)


def heisenberg_phase(spec: HeisenbergSpec) -> Phase:
    """Heisenberg-type phase filtered by powers of the ideal generated by ``D(uw) - 1``.

    When a complementing subgroup exists it is recorded as the witness
    island, so square-zero extensions keep a certified island.
    """
    p = induce_phase(heisenberg_algebra(spec), subgroup=boundary_generators(spec))
    if p.is_strong():
        return p
    found = rigidity_island(p)
    return replace(p, witness_island=found.island) if found.status == "found" else p


def flagship(n: int = 1, k: int = 2, cocycle: str = "alternating") -> Phase:
    return heisenberg_phase(HeisenbergSpec(n, k, cocycle))


@dataclass(frozen=True)
class FlagshipSuite:
    R_strong: Phase
    P_weak: Phase
    P_ext: Phase
    R_ext: Phase
    quotient_iso: IsoSearchResult

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.R_strong.dim, self.P_weak.dim, self.P_ext.dim

    @property
    def depths(self) -> tuple[int, int, int]:
        return self.R_strong.depth, self.P_weak.depth, self.P_ext.depth


def flagship_suite(n: int = 1, b_dim: int = 1, budget: int = 10**6) -> FlagshipSuite:
    """The strong phase over F2, the weak one over F2[u]/(u^2), and their square-zero extensions."""
    if b_dim < 1:
        raise ValueError("b_dim must be at least 1")
    r = heisenberg_phase(HeisenbergSpec(n, 1))
    p = heisenberg_phase(HeisenbergSpec(n, 2))
    p_ext = square_zero_extend(p, b_dim)
    r_ext = square_zero_extend(r, b_dim)
    for ph in (r, p, p_ext, r_ext):
        rep = validate_phase(ph)
        if not rep.ok:
            raise AssertionError(f"flagship phase fails validation: {rep.first_failure}")
    if not GF2Subspace(p_ext.dim, p.boundary.basis) < p_ext.boundary:
        raise AssertionError("extension did not enlarge the boundary layer")
    q, _ = boundary_quotient(p)
    return FlagshipSuite(r, p, p_ext, r_ext, iso_search(q, r, budget))
