"""Finite phases: unital GF(2)-algebras carrying a descending chain of nilpotent ideals.

A :class:`Phase` stores structure constants on a fixed basis.  ``table[i][j]``
is the product of basis elements ``i`` and ``j`` as a coordinate bitset and
``filtration`` is ``F[0] = everything ⊇ F[1] ⊇ ... ⊇ F[d+1] = 0``.  Element
vectors are plain ints in the phase's own coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .gf2 import Echelon, GF2Matrix, GF2Subspace, bits_of, echelon, left_kernel, parity, rank, subspace_mul, weight

INF = math.inf


class PhaseError(ValueError):
    """Raised when an input cannot be turned into a valid phase."""


@dataclass(frozen=True)
class Phase:
    labels: tuple[str, ...]
    unit: int
    table: tuple[tuple[int, ...], ...]
    filtration: tuple[GF2Subspace, ...]
    witness_island: GF2Subspace | None = None
    augmentation: int | None = None

    @classmethod
    def from_table(
        cls,
        labels: Sequence[str],
        unit: int,
        table: Sequence[Sequence[int]],
        filtration: Sequence[GF2Subspace] | None = None,
        **kw,
    ) -> "Phase":
        n = len(labels)
        if filtration is None:
            filtration = trivial_filtration(n)
        return cls(tuple(labels), unit, tuple(tuple(r) for r in table), tuple(filtration), **kw)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis_vec(self, i: int) -> int:
        return 1 << i

    def mul(self, x: int, y: int) -> int:
        acc = 0
        ys = bits_of(y)
        for i in bits_of(x):
            row = self.table[i]
            for j in ys:
                acc ^= row[j]
        return acc

    def layer(self, k: int) -> GF2Subspace:
        """``F[k]``; the zero space past the end of the chain."""
        if k < len(self.filtration):
            return self.filtration[k]
        return GF2Subspace.zero(self.dim)

    @property
    def boundary(self) -> GF2Subspace:
        return self.layer(1)

    @property
    def layer_dims(self) -> list[int]:
        return [f.dim for f in self.filtration]

    @property
    def depth(self) -> int:
        return boundary_depth(self)

    def is_strong(self) -> bool:
        return self.boundary.is_zero()

    @cached_property
    def group_table(self) -> list[list[int]] | None:
        """Index table when the basis is closed under products and forms a group."""
        return _group_table(self)

    @cached_property
    def is_commutative(self) -> bool:
        n = self.dim
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i + 1, n))

    def left_matrix(self, x: int) -> GF2Matrix:
        return GF2Matrix.from_columns(self.dim, [self.mul(x, 1 << j) for j in range(self.dim)])


def trivial_filtration(n: int) -> tuple[GF2Subspace, ...]:
    return (GF2Subspace.full(n), GF2Subspace.zero(n))


def unit_algebra() -> Phase:
    """GF(2) itself: the one-dimensional strong phase."""
    return Phase.from_table(["1"], 1, [[1]], augmentation=1)


def _group_table(p: Phase) -> list[list[int]] | None:
    n = p.dim
    if weight(p.unit) != 1:
        return None
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = p.table[i][j]
            if weight(v) != 1:
                return None
            row.append(v.bit_length() - 1)
        if len(set(row)) != n:
            return None
        out.append(row)
    return out


# -- validation ---------------------------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, ok, detail))

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.__dict__ for c in self.checks]}

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.ok else "FAIL"
            lines.append(f"{mark} {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)


def _shape_problem(p: Phase) -> str | None:
    n = p.dim
    if n < 1:
        return "phase has no basis"
    if len(set(p.labels)) != n:
        return "basis labels are not unique"
    if len(p.table) != n or any(len(r) != n for r in p.table):
        return "structure table is not n x n"
    limit = 1 << n
    if not 0 <= p.unit < limit:
        return "unit does not fit the basis"
    for i, row in enumerate(p.table):
        for j, v in enumerate(row):
            if not 0 <= v < limit:
                return f"product ({i},{j}) does not fit the basis"
    if len(p.filtration) < 2:
        return "filtration needs at least F[0] and a terminal layer"
    if any(f.ambient_dim != n for f in p.filtration):
        return "filtration layer has the wrong ambient dimension"
    if p.witness_island is not None and p.witness_island.ambient_dim != n:
        return "witness island has the wrong ambient dimension"
    return None


def _associativity_counterexample(p: Phase) -> tuple[int, int, int] | None:
    n = p.dim
    t = p.table
    tb = [[bits_of(v) for v in row] for row in t]
    for i in range(n):
        ti, tbi = t[i], tb[i]
        for j in range(n):
            left_bits = tbi[j]
            tj = tb[j]
            for k in range(n):
                left = 0
                for l in left_bits:
                    left ^= t[l][k]
                right = 0
                for m in tj[k]:
                    right ^= ti[m]
                if left != right:
                    return i, j, k
    return None


def validate_phase(p: Phase) -> ValidationReport:
    """Check every structural invariant; failures carry a concrete counterexample."""
    rep = ValidationReport()
    problem = _shape_problem(p)
    rep.add("shape", problem is None, problem or "")
    if problem:
        return rep
    n = p.dim

    bad = next((j for j in range(n) if p.mul(p.unit, 1 << j) != 1 << j or p.mul(1 << j, p.unit) != 1 << j), None)
    rep.add("unit", bad is None, "" if bad is None else f"unit fails on basis element {bad} ({p.labels[bad]})")

    trip = _associativity_counterexample(p)
    rep.add("associativity", trip is None, "" if trip is None else f"(e{trip[0]} e{trip[1]}) e{trip[2]} != e{trip[0]} (e{trip[1]} e{trip[2]})")

    f = p.filtration
    chain_bad = None
    if f[0] != GF2Subspace.full(n):
        chain_bad = "F[0] is not the whole phase"
    else:
        for k in range(1, len(f)):
            if not f[k] <= f[k - 1]:
                chain_bad = f"F[{k}] is not contained in F[{k - 1}]"
                break
    rep.add("descending chain", chain_bad is None, chain_bad or "")

    rep.add("termination", f[-1].is_zero(), "" if f[-1].is_zero() else f"last layer F[{len(f) - 1}] is nonzero")

    ideal_bad = None
    for k in range(1, len(f)):
        for v in f[k].basis:
            for i in range(n):
                if p.mul(1 << i, v) not in f[k] or p.mul(v, 1 << i) not in f[k]:
                    ideal_bad = f"F[{k}] is not a two-sided ideal (basis element {i} times layer vector {v:#x})"
                    break
            if ideal_bad:
                break
        if ideal_bad:
            break
    rep.add("two-sided ideals", ideal_bad is None, ideal_bad or "")

    mult_bad = None
    d = len(f) - 1
    for a in range(1, d + 1):
        for b in range(a, d + 1):
            prod = subspace_mul(f[a], f[b], p.mul)
            prod2 = subspace_mul(f[b], f[a], p.mul)
            target = p.layer(a + b)
            if not (prod <= target and prod2 <= target):
                mult_bad = f"F[{a}]F[{b}] is not contained in F[{a + b}]"
                break
        if mult_bad:
            break
    rep.add("multiplicativity", mult_bad is None, mult_bad or "")

    unit_in = p.unit in f[1] if len(f) > 1 else False
    rep.add("unit outside boundary", not unit_in, "unit lies in F[1]" if unit_in else "")

    if p.witness_island is not None:
        why = island_problem(p, p.witness_island)
        rep.add("witness island", why is None, why or "")
    if p.augmentation is not None:
        why = augmentation_problem(p, p.augmentation)
        rep.add("augmentation", why is None, why or "")
    return rep


def island_problem(p: Phase, s: GF2Subspace) -> str | None:
    if p.unit not in s:
        return "island does not contain the unit"
    for x in s.basis:
        for y in s.basis:
            if p.mul(x, y) not in s:
                return "island is not closed under products"
    if not (s & p.boundary).is_zero():
        return "island meets F[1]"
    if (s + p.boundary).dim != p.dim:
        return "island and F[1] do not span the phase"
    return None


def augmentation_problem(p: Phase, eps: int) -> str | None:
    n = p.dim
    if eps >> n:
        return "augmentation does not fit the basis"
    if not parity(eps & p.unit):
        return "augmentation does not send the unit to 1"
    for i in range(n):
        for j in range(n):
            if parity(eps & p.table[i][j]) != ((eps >> i) & (eps >> j) & 1):
                return f"augmentation is not multiplicative on ({i},{j})"
    for v in p.boundary.basis:
        if parity(eps & v):
            return "augmentation does not vanish on F[1]"
    return None


# -- degrees and depth ----------------------------------------------------------


def defect_degree(p: Phase, x: int) -> int | float:
    """Largest ``k`` with ``x`` in ``F[k]``; ``INF`` for zero."""
    if x >> p.dim:
        raise PhaseError("element does not fit the phase")
    if x == 0:
        return INF
    k = 0
    while k + 1 < len(p.filtration) and x in p.filtration[k + 1]:
        k += 1
    return k


def boundary_depth(p: Phase) -> int:
    d = 0
    for k, f in enumerate(p.filtration):
        if not f.is_zero():
            d = k
    return d


def generator_depth(p: Phase) -> int:
    """Largest ``k`` whose layer needs generators beyond ``F[k+1]`` and products ``F[i] F[k-i]``, ``0 < i < k``."""
    f = p.filtration
    d = 0
    for k in range(1, len(f) - 1):
        rows = list(f[k + 1].basis)
        for i in range(1, k):
            rows.extend(subspace_mul(f[i], f[k - i], p.mul).basis)
        if not f[k] <= GF2Subspace.span(p.dim, rows):
            d = k
    return d


def layer_dims(p: Phase) -> list[int]:
    return p.layer_dims


# -- ideals and filtrations -----------------------------------------------------


def two_sided_ideal(p: Phase, gens: Iterable[int]) -> GF2Subspace:
    """Smallest two-sided ideal containing ``gens``."""
    ech = Echelon()
    queue = list(gens)
    n = p.dim
    while queue:
        v = queue.pop()
        if not ech.add(v):
            continue
        for i in range(n):
            queue.append(p.mul(1 << i, v))
            queue.append(p.mul(v, 1 << i))
    return GF2Subspace(n, tuple(ech.basis()))


def is_two_sided_ideal(p: Phase, s: GF2Subspace) -> bool:
    return all(p.mul(1 << i, v) in s and p.mul(v, 1 << i) in s for v in s.basis for i in range(p.dim))


def ideal_powers(p: Phase, ideal: GF2Subspace) -> list[GF2Subspace]:
    """``[I, I^2, ..., 0]``; raises if the chain never reaches zero."""
    powers = [ideal]
    cur = ideal
    for _ in range(p.dim + 1):
        if cur.is_zero():
            return powers
        nxt = subspace_mul(cur, ideal, p.mul)
        if nxt == cur:
            raise PhaseError(f"ideal is not nilpotent: power chain stalls at dimension {cur.dim}")
        powers.append(nxt)
        cur = nxt
    raise PhaseError("ideal is not nilpotent within dim steps")


def ideal_power_filtration(p: Phase, ideal: GF2Subspace) -> Phase:
    """Replace the filtration of ``p`` by the powers of ``ideal``."""
    if ideal.ambient_dim != p.dim:
        raise PhaseError("ideal lives in the wrong ambient space")
    if p.unit in ideal:
        raise PhaseError("ideal contains the unit")
    if not is_two_sided_ideal(p, ideal):
        raise PhaseError("subspace is not a two-sided ideal")
    powers = ideal_powers(p, ideal)
    chain = (GF2Subspace.full(p.dim),) + tuple(powers)
    if ideal.is_zero():
        chain = trivial_filtration(p.dim)
    island = p.witness_island
    if island is not None and island_problem(p.__class__(p.labels, p.unit, p.table, chain), island):
        island = None
    aug = p.augmentation
    if aug is not None and any(parity(aug & v) for v in ideal.basis):
        aug = None
    return Phase(p.labels, p.unit, p.table, chain, island, aug)


# -- quotients and extensions ------------------------------------------------------


def _projector(ideal: GF2Subspace):
    coords = ideal.complement_coords()
    index = {c: a for a, c in enumerate(coords)}

    def project(v: int) -> int:
        v = ideal.reduce(v)
        out = 0
        for c in bits_of(v):
            out |= 1 << index[c]
        return out

    return coords, project


def quotient(p: Phase, ideal: GF2Subspace) -> tuple[Phase, "PhaseMap"]:
    """``p / ideal`` on the standard complement basis, with the projection."""
    from .maps import PhaseMap

    if not is_two_sided_ideal(p, ideal):
        raise PhaseError("cannot quotient by a non-ideal")
    coords, project = _projector(ideal)
    m = len(coords)
    table = [[project(p.table[a][b]) for b in coords] for a in coords]
    layers = []
    for f in p.filtration:
        layers.append(GF2Subspace.span(m, (project(v) for v in f.basis)))
    while len(layers) > 2 and layers[-2].is_zero():
        layers.pop()
    aug = p.augmentation
    if aug is not None and any(parity(aug & v) for v in ideal.basis):
        aug = None
    elif aug is not None:
        aug = sum(((aug >> c) & 1) << a for a, c in enumerate(coords))
    q = Phase(tuple(p.labels[c] for c in coords), project(p.unit), tuple(tuple(r) for r in table), tuple(layers), None, aug)
    proj = PhaseMap(p, q, GF2Matrix.from_columns(m, [project(1 << j) for j in range(p.dim)]))
    return q, proj


def boundary_quotient(p: Phase) -> tuple[Phase, "PhaseMap"]:
    """The strong phase ``p / F[1]`` and the projection onto it."""
    return quotient(p, p.boundary)


def default_augmentation(p: Phase) -> int | None:
    if p.augmentation is not None:
        return p.augmentation
    if p.group_table is not None:
        return (1 << p.dim) - 1
    return None


def square_zero_extend(p: Phase, b_dim: int, augmentation: int | None = None) -> Phase:
    """Adjoin a central square-zero block ``B`` of dimension ``b_dim``.

    Mixed products are ``a*b = b*a = eps(a) b`` for an augmentation ``eps``
    vanishing on ``F[1]``.  The new chain is ``F[k] + B`` up to
    ``max(depth, 1)`` and zero after that.
    """
    if b_dim < 1:
        raise PhaseError("b_dim must be at least 1")
    eps = augmentation if augmentation is not None else default_augmentation(p)
    if eps is None:
        raise PhaseError("no augmentation available; pass one explicitly")
    why = augmentation_problem(p, eps)
    if why:
        raise PhaseError(why)
    n = p.dim
    total = n + b_dim
    table = []
    for i in range(n):
        row = list(p.table[i])
        e = (eps >> i) & 1
        row += [(1 << (n + t)) if e else 0 for t in range(b_dim)]
        table.append(row)
    for t in range(b_dim):
        row = [(1 << (n + t)) if (eps >> j) & 1 else 0 for j in range(n)] + [0] * b_dim
        table.append(row)
    b_block = [1 << (n + t) for t in range(b_dim)]
    top = max(boundary_depth(p), 1)
    chain = [GF2Subspace.full(total)]
    for k in range(1, top + 1):
        chain.append(GF2Subspace.span(total, list(p.layer(k).basis) + b_block))
    chain.append(GF2Subspace.zero(total))
    labels = list(p.labels)
    for t in range(b_dim):
        name = f"b{n + t}"
        while name in labels:
            name += "'"
        labels.append(name)
    if p.is_strong():
        island = GF2Subspace.full(n)
    else:
        island = p.witness_island
    if island is not None:
        island = GF2Subspace(total, island.basis)
    return Phase(tuple(labels), p.unit, tuple(tuple(r) for r in table), tuple(chain), island, eps)


def dual_numbers() -> Phase:
    """GF(2)[e]/(e^2), the smallest weak phase."""
    return square_zero_extend(unit_algebra(), 1)


def extension_inclusion(p: Phase, ext: Phase) -> "PhaseMap":
    """The coordinate embedding of ``p`` into ``square_zero_extend(p, ...)``."""
    from .maps import PhaseMap

    return PhaseMap(p, ext, GF2Matrix.from_columns(ext.dim, [1 << j for j in range(p.dim)]))


def relabel(p: Phase, perm: Sequence[int]) -> tuple[Phase, "PhaseMap"]:
    """Move basis element ``i`` to position ``perm[i]``; returns the isomorphism."""
    from .maps import PhaseMap

    n = p.dim
    if sorted(perm) != list(range(n)):
        raise PhaseError("not a permutation")

    def move(v: int) -> int:
        return sum(1 << perm[i] for i in bits_of(v))

    inv = [0] * n
    for i, j in enumerate(perm):
        inv[j] = i
    labels = tuple(p.labels[inv[j]] for j in range(n))
    table = tuple(tuple(move(p.table[inv[a]][inv[b]]) for b in range(n)) for a in range(n))
    layers = tuple(GF2Subspace.span(n, (move(v) for v in f.basis)) for f in p.filtration)
    island = None if p.witness_island is None else GF2Subspace.span(n, (move(v) for v in p.witness_island.basis))
    aug = None if p.augmentation is None else move(p.augmentation)
    q = Phase(labels, move(p.unit), table, layers, island, aug)
    return q, PhaseMap(p, q, GF2Matrix.from_columns(n, [1 << perm[i] for i in range(n)]))


# -- generators, obstruction, induction ---------------------------------------------


def _layer_reps(upper: GF2Subspace, lower: GF2Subspace) -> list[int]:
    return echelon(lower.reduce(v) for v in upper.basis)


def canonical_generators_by_layer(p: Phase) -> list[list[int]]:
    """Per layer ``k``, reduced lifts of a basis of ``F[k]/F[k+1]``.

    Coordinates are ordered by label before reducing, so the choice depends
    only on the labelled structure and not on the storage order of the basis.
    """
    n = p.dim
    order = sorted(range(n), key=lambda i: p.labels[i])
    pos = {c: a for a, c in enumerate(order)}

    def fwd(v: int) -> int:
        return sum(1 << pos[c] for c in bits_of(v))

    def back(v: int) -> int:
        return sum(1 << order[a] for a in bits_of(v))

    layers = [GF2Subspace.span(n, (fwd(v) for v in f.basis)) for f in p.filtration]
    out = []
    for k in range(len(layers) - 1):
        reps = _layer_reps(layers[k], layers[k + 1])
        if reps:
            out.append(sorted(back(v) for v in reps))
    return out


def canonical_generators(p: Phase) -> list[int]:
    return [v for layer in canonical_generators_by_layer(p) for v in layer]


def generated_subalgebra(p: Phase, gens: Iterable[int]) -> GF2Subspace:
    """Span of all words in ``gens`` (including the empty word)."""
    gens = list(gens)
    ech = Echelon([p.unit])
    queue = [p.unit]
    while queue:
        v = queue.pop()
        for g in gens:
            w = p.mul(v, g)
            if ech.add(w):
                queue.append(w)
    return GF2Subspace(p.dim, tuple(ech.basis()))


def algebra_generators(p: Phase) -> list[int]:
    """Greedy subset of :func:`canonical_generators` that still generates ``p``."""
    kept: list[int] = []
    sub = generated_subalgebra(p, kept)
    for g in canonical_generators(p):
        if sub.dim == p.dim:
            break
        if g not in sub:
            kept.append(g)
            sub = generated_subalgebra(p, kept)
    if sub.dim != p.dim:
        raise PhaseError("canonical generators do not generate the phase")
    return kept


@dataclass(frozen=True)
class ObstructionObject:
    """First nonzero layer quotient ``F[k]/F[k+1]`` as a bimodule."""

    layer: int | None
    dim: int
    basis: tuple[int, ...]
    left: tuple[GF2Matrix, ...]
    right: tuple[GF2Matrix, ...]

    def is_zero(self) -> bool:
        return self.dim == 0


def obstruction_object(p: Phase) -> ObstructionObject:
    k = next((k for k in range(1, len(p.filtration)) if not p.filtration[k].is_zero()), None)
    if k is None:
        obj = ObstructionObject(None, 0, (), (), ())
    else:
        lower = p.layer(k + 1)
        reps = GF2Subspace(p.dim, tuple(_layer_reps(p.layer(k), lower)))

        def coords(v: int) -> int:
            return reps.coords(lower.reduce(v))

        left = tuple(
            GF2Matrix.from_columns(reps.dim, [coords(p.mul(1 << i, r)) for r in reps.basis]) for i in range(p.dim)
        )
        right = tuple(
            GF2Matrix.from_columns(reps.dim, [coords(p.mul(r, 1 << i)) for r in reps.basis]) for i in range(p.dim)
        )
        obj = ObstructionObject(k, reps.dim, reps.basis, left, right)
    return obj


def induce_phase(p: Phase, *, subgroup: Sequence[int] | None = None, ideal: GF2Subspace | None = None) -> Phase:
    """Filter an algebra by the powers of a hinted nilpotent ideal.

    ``subgroup`` lists basis indices of group elements (the basis must be a
    group); the ideal is generated by ``g - 1`` for those elements.  ``ideal``
    is taken as given and checked.
    """
    if (subgroup is None) == (ideal is None):
        raise PhaseError("give exactly one of subgroup= or ideal=")
    if subgroup is not None:
        if p.group_table is None:
            raise PhaseError("subgroup hint needs a group basis")
        ideal = two_sided_ideal(p, [(1 << g) ^ p.unit for g in subgroup])
    assert ideal is not None
    out = ideal_power_filtration(p, ideal)
    rep = validate_phase(out)
    if not rep.ok:
        raise PhaseError(f"induced phase fails validation: {rep.first_failure}")
    return out


def center(p: Phase) -> GF2Subspace:
    n = p.dim
    rows = []
    for j in range(n):
        r = 0
        for i in range(n):
            r |= (p.table[j][i] ^ p.table[i][j]) << (i * n)
        rows.append(r)
    return GF2Subspace.span(n, left_kernel(rows, n * n))


def phase_invariants(p: Phase) -> dict:
    """Cheap isomorphism invariants used to rule out equivalence quickly."""
    z = center(p)
    square_rank = rank(p.mul(c, c) for c in z.basis)
    comm = rank(p.table[i][j] ^ p.table[j][i] for i in range(p.dim) for j in range(i + 1, p.dim))
    return {
        "dim": p.dim,
        "layer_dims": p.layer_dims,
        "commutative": p.is_commutative,
        "center_dim": z.dim,
        "center_square_zero_dim": z.dim - square_rank,
        "commutator_span_dim": comm,
    }
