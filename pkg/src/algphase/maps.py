"""Phase maps, their certification, isomorphism search and rigidity islands."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

from .gf2 import Echelon, GF2Matrix, GF2Subspace, bits_of, pivot, rank
from .phase import (
    Phase,
    algebra_generators,
    defect_degree,
    island_problem,
    phase_invariants,
)


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of steps before reaching a verdict."""


@dataclass(frozen=True)
class PhaseMap:
    """Linear map ``source -> target``; ``matrix`` is ``dim_target x dim_source``."""

    source: Phase
    target: Phase
    matrix: GF2Matrix

    def __call__(self, x: int) -> int:
        return self.matrix.apply(x)

    @classmethod
    def identity(cls, p: Phase) -> "PhaseMap":
        return cls(p, p, GF2Matrix.identity(p.dim))

    def compose(self, other: "PhaseMap") -> "PhaseMap":
        """``self ∘ other``."""
        return PhaseMap(other.source, self.target, self.matrix @ other.matrix)


@dataclass(frozen=True)
class Certificate:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def morphism_certify(m: PhaseMap) -> Certificate:
    """Unital, multiplicative on basis pairs, and ``F_s[k] -> F_t[k]``."""
    s, t = m.source, m.target
    if (m.matrix.rows, m.matrix.cols) != (t.dim, s.dim):
        return Certificate(False, "matrix shape does not match the phases")
    if m(s.unit) != t.unit:
        return Certificate(False, "unit is not preserved")
    images = [m(1 << j) for j in range(s.dim)]
    for i in range(s.dim):
        for j in range(s.dim):
            if m(s.table[i][j]) != t.mul(images[i], images[j]):
                return Certificate(False, "not multiplicative", (i, j))
    depth = max(len(s.filtration), len(t.filtration))
    for k in range(1, depth):
        for v in s.layer(k).basis:
            if m(v) not in t.layer(k):
                return Certificate(False, "filtration not preserved", (k, v))
    return Certificate(True)


def iso_certify(m: PhaseMap) -> Certificate:
    """True iff ``m`` is a filtration-preserving algebra isomorphism both ways."""
    s, t = m.source, m.target
    if s.dim != t.dim:
        return Certificate(False, "dimensions differ")
    if rank(m.matrix.data) != s.dim:
        return Certificate(False, "not bijective")
    c = morphism_certify(m)
    if not c:
        return c
    depth = max(len(s.filtration), len(t.filtration))
    for k in range(1, depth):
        if s.layer(k).dim != t.layer(k).dim:
            return Certificate(False, "filtration not reflected", (k,))
    return Certificate(True)


# -- partial homomorphisms ----------------------------------------------------------


class PartialHom:
    """A linear map defined on the subalgebra generated so far.

    The graph is kept in reduced echelon form on the source side.  Adding a
    generator closes the domain under right multiplication by every
    generator; any product whose source is already in the domain must land on
    the predicted target, which is exactly the homomorphism condition.
    """

    def __init__(self, src_mul: Callable[[int, int], int], tgt_mul: Callable[[int, int], int], src_unit: int, tgt_unit: int):
        self.src_mul = src_mul
        self.tgt_mul = tgt_mul
        self.rows: dict[int, tuple[int, int]] = {}
        self.gens: list[tuple[int, int]] = []
        self.steps = 0
        self._insert(src_unit, tgt_unit)

    def copy(self) -> "PartialHom":
        out = PartialHom.__new__(PartialHom)
        out.src_mul, out.tgt_mul = self.src_mul, self.tgt_mul
        out.rows = dict(self.rows)
        out.gens = list(self.gens)
        out.steps = 0
        return out

    def _insert(self, s: int, t: int) -> str:
        self.steps += 1
        for p, (bs, bt) in self.rows.items():
            if (s >> p) & 1:
                s ^= bs
                t ^= bt
        if not s:
            return "dup" if not t else "conflict"
        p = pivot(s)
        for q, (bs, bt) in list(self.rows.items()):
            if (bs >> p) & 1:
                self.rows[q] = (bs ^ s, bt ^ t)
        self.rows[p] = (s, t)
        return "new"

    def image(self, s: int) -> int | None:
        t = 0
        for p, (bs, bt) in self.rows.items():
            if (s >> p) & 1:
                s ^= bs
                t ^= bt
        return None if s else t

    def extend(self, g: int, h: int) -> bool:
        """Add generator ``g -> h``; False on an inconsistency."""
        self.gens.append((g, h))
        pending = [(s, t, [(g, h)]) for s, t in self.rows.values()]
        res = self._insert(g, h)
        if res == "conflict":
            return False
        if res == "new":
            pending.append((g, h, list(self.gens)))
        while pending:
            s, t, gs = pending.pop()
            for x, y in gs:
                s2, t2 = self.src_mul(s, x), self.tgt_mul(t, y)
                res = self._insert(s2, t2)
                if res == "conflict":
                    return False
                if res == "new":
                    pending.append((s2, t2, list(self.gens)))
        return True

    def domain_dim(self) -> int:
        return len(self.rows)

    def target_rank(self) -> int:
        return rank(t for _, t in self.rows.values())

    def domain(self, n: int) -> GF2Subspace:
        return GF2Subspace.span(n, (s for s, _ in self.rows.values()))

    def codomain(self, n: int) -> GF2Subspace:
        return GF2Subspace.span(n, (t for _, t in self.rows.values()))


def _vectors_by_weight(n: int) -> Iterator[int]:
    yield 0
    for w in range(1, n + 1):
        for combo in itertools.combinations(range(n), w):
            yield sum(1 << i for i in combo)


def _filtration_consistent(hom: PartialHom, p: Phase, q: Phase) -> bool:
    dom, cod = hom.domain(p.dim), hom.codomain(q.dim)
    for k in range(1, max(len(p.filtration), len(q.filtration))):
        src = dom & p.layer(k)
        for v in src.basis:
            img = hom.image(v)
            if img is None or img not in q.layer(k):
                return False
        if (cod & q.layer(k)).dim != src.dim:
            return False
    return True


@dataclass(frozen=True)
class IsoSearchResult:
    status: str  # "yes" | "no" | "unknown"
    map: PhaseMap | None = None
    steps: int = 0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "yes"


def iso_search(p: Phase, q: Phase, budget: int = 10**6) -> IsoSearchResult:
    """Look for a filtration-preserving isomorphism ``p -> q``.

    Generators of ``p`` are sent, one at a time, to candidate vectors of ``q``
    with the same defect degree, lightest first.  Each partial assignment is
    closed under products and pruned on consistency, injectivity and layer
    dimensions.  Exhausting the budget answers ``unknown``, never ``no``.
    """
    ip, iq = phase_invariants(p), phase_invariants(q)
    if ip != iq:
        diff = sorted(k for k in ip if ip[k] != iq[k])
        return IsoSearchResult("no", reason=f"invariants differ: {', '.join(diff)}")
    if budget <= 0:
        return IsoSearchResult("unknown", reason="budget is zero")
    gens = algebra_generators(p)
    degrees = [defect_degree(p, g) for g in gens]
    used = 0

    def candidates(deg) -> Iterator[int]:
        for v in _vectors_by_weight(q.dim):
            if v and defect_degree(q, v) == deg:
                yield v

    def dfs(hom: PartialHom, idx: int) -> PartialHom | None:
        nonlocal used
        if idx == len(gens):
            return hom
        g = gens[idx]
        for h in candidates(degrees[idx]):
            used += 1
            if used > budget:
                raise BudgetExceeded
            trial = hom.copy()
            ok = trial.extend(g, h)
            used += trial.steps
            if not ok or trial.target_rank() != trial.domain_dim():
                continue
            if not _filtration_consistent(trial, p, q):
                continue
            found = dfs(trial, idx + 1)
            if found is not None:
                return found
        return None

    try:
        hom = dfs(PartialHom(p.mul, q.mul, p.unit, q.unit), 0)
    except BudgetExceeded:
        return IsoSearchResult("unknown", steps=used, reason="budget exhausted")
    if hom is None:
        return IsoSearchResult("no", steps=used, reason="search exhausted")
    cols = [hom.image(1 << j) for j in range(p.dim)]
    m = PhaseMap(p, q, GF2Matrix.from_columns(q.dim, cols))
    cert = iso_certify(m)
    if not cert:
        raise AssertionError(f"iso_search produced an uncertified map: {cert.reason}")
    return IsoSearchResult("yes", m, used)


# -- rigidity islands -----------------------------------------------------------------


@dataclass(frozen=True)
class IslandResult:
    status: str  # "found" | "none-within-budget"
    island: GF2Subspace | None = None
    method: str = ""


def _subgroup_closure(gt: list[list[int]], elems) -> frozenset[int]:
    out = set(elems) | {_identity(gt)}
    frontier = list(out)
    while frontier:
        a = frontier.pop()
        for b in list(out):
            for c in (gt[a][b], gt[b][a]):
                if c not in out:
                    out.add(c)
                    frontier.append(c)
    return frozenset(out)


def _identity(gt: list[list[int]]) -> int:
    return next(i for i in range(len(gt)) if gt[i][i] == i and all(gt[i][j] == j for j in range(len(gt))))


def _group_complement(p: Phase, budget: int) -> GF2Subspace | None:
    gt = p.group_table
    assert gt is not None
    e = _identity(gt)
    normal = frozenset(g for g in range(p.dim) if ((1 << g) ^ (1 << e)) in p.boundary)
    if p.dim % len(normal):
        return None
    want = p.dim // len(normal)
    steps = 0

    def covered(h: frozenset[int]) -> set[int]:
        return {gt[a][b] for a in h for b in normal}

    def dfs(h: frozenset[int]) -> frozenset[int] | None:
        nonlocal steps
        if len(h) == want:
            return h
        cov = covered(h)
        g0 = min(g for g in range(p.dim) if g not in cov)
        for x in sorted(gt[g0][b] for b in normal):
            steps += 1
            if steps > budget:
                raise BudgetExceeded
            h2 = _subgroup_closure(gt, h | {x})
            if h2 & normal != {e} or len(h2) > want:
                continue
            r = dfs(h2)
            if r is not None:
                return r
        return None

    h = dfs(frozenset({e}))
    if h is None:
        return None
    s = GF2Subspace.span(p.dim, (1 << g for g in h))
    return s if island_problem(p, s) is None else None


def _generic_island(p: Phase, budget: int) -> GF2Subspace | None:
    f = p.boundary
    reps = [1 << c for c in f.complement_coords()]
    fvecs = []
    for mask in range(1 << f.dim):
        v = 0
        for i in bits_of(mask):
            v ^= f.basis[i]
        fvecs.append(v)
    steps = 0
    for offsets in itertools.product(fvecs, repeat=len(reps)):
        steps += 1
        if steps > budget:
            raise BudgetExceeded
        s = GF2Subspace.span(p.dim, (r ^ o for r, o in zip(reps, offsets)))
        if island_problem(p, s) is None:
            return s
    return None


def rigidity_island(p: Phase, budget: int = 10**6) -> IslandResult:
    """A unital subalgebra complementing ``F[1]``."""
    if p.is_strong():
        return IslandResult("found", GF2Subspace.full(p.dim), "strong")
    if p.witness_island is not None and island_problem(p, p.witness_island) is None:
        return IslandResult("found", p.witness_island, "recorded witness")
    try:
        if p.group_table is not None:
            s = _group_complement(p, budget)
            if s is not None:
                return IslandResult("found", s, "complement subgroup")
        if p.dim <= 6:
            s = _generic_island(p, budget)
            if s is not None:
                return IslandResult("found", s, "exhaustive complement search")
    except BudgetExceeded:
        pass
    return IslandResult("none-within-budget")


def island_phase(p: Phase, s: GF2Subspace) -> tuple[Phase, PhaseMap]:
    """The island subalgebra as a strong phase, with its inclusion into ``p``."""
    why = island_problem(p, s)
    if why:
        raise ValueError(why)
    m = s.dim
    table = [[s.coords(p.mul(a, b)) for b in s.basis] for a in s.basis]
    labels = ["+".join(p.labels[j] for j in bits_of(v)) for v in s.basis]
    sub = Phase.from_table(labels, s.coords(p.unit), table)
    return sub, PhaseMap(sub, p, GF2Matrix.from_columns(p.dim, list(s.basis)))
