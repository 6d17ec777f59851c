"""Filtered representations, the evaluation map into operators, and testing objects.

A representation acts by column-vector matrices, one per basis element of
the phase, on ``GF(2)^mdim`` with a descending filtration
``V = G[0] ⊇ ... ⊇ G[N+1] = 0``.  Elements of defect degree ``k`` must move
``G[i]`` into ``G[i+k]``.  At the ``terminating`` level the boundary ideal
``F[1]`` must act as zero as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .gf2 import Echelon, GF2Matrix, GF2Subspace, bits_of, echelon, left_kernel, pivot
from .maps import BudgetExceeded, PartialHom, PhaseMap, iso_certify
from .phase import Phase, ValidationReport, algebra_generators, boundary_quotient

LEVELS = ("weak", "terminating")


@dataclass(frozen=True)
class FilteredRep:
    phase: Phase
    mdim: int
    action: tuple[GF2Matrix, ...]
    vfilt: tuple[GF2Subspace, ...]
    level: str = "terminating"

    def act(self, x: int) -> GF2Matrix:
        acc = GF2Matrix.zeros(self.mdim, self.mdim)
        for j in bits_of(x):
            acc = acc + self.action[j]
        return acc

    def vlayer(self, i: int) -> GF2Subspace:
        if i < len(self.vfilt):
            return self.vfilt[i]
        return GF2Subspace.zero(self.mdim)

    @property
    def length(self) -> int:
        """``N`` with ``G[N+1] = 0``."""
        return len(self.vfilt) - 2


def trivial_vfilt(m: int) -> tuple[GF2Subspace, ...]:
    return (GF2Subspace.full(m), GF2Subspace.zero(m))


def _maps_into(op: GF2Matrix, src: GF2Subspace, dst: GF2Subspace) -> bool:
    return all(op.apply(v) in dst for v in src.basis)


def rep_validate(r: FilteredRep) -> ValidationReport:
    rep = ValidationReport()
    p, m = r.phase, r.mdim
    shape = None
    if r.level not in LEVELS:
        shape = f"unknown level {r.level!r}"
    elif len(r.action) != p.dim:
        shape = "need one action matrix per basis element"
    elif any((a.rows, a.cols) != (m, m) for a in r.action):
        shape = "action matrix has the wrong shape"
    elif len(r.vfilt) < 2 or any(g.ambient_dim != m for g in r.vfilt):
        shape = "module filtration is malformed"
    rep.add("shape", shape is None, shape or "")
    if shape:
        return rep

    chain = None
    if r.vfilt[0] != GF2Subspace.full(m):
        chain = "G[0] is not the whole module"
    elif not r.vfilt[-1].is_zero():
        chain = "module filtration does not end at zero"
    else:
        for i in range(1, len(r.vfilt)):
            if not r.vfilt[i] <= r.vfilt[i - 1]:
                chain = f"G[{i}] is not contained in G[{i - 1}]"
                break
    rep.add("module chain", chain is None, chain or "")

    hom = None
    if r.act(p.unit) != GF2Matrix.identity(m):
        hom = "unit does not act as the identity"
    else:
        for i in range(p.dim):
            for j in range(p.dim):
                if r.action[i] @ r.action[j] != r.act(p.table[i][j]):
                    hom = f"action is not multiplicative on ({i},{j})"
                    break
            if hom:
                break
    rep.add("homomorphism", hom is None, hom or "")

    compat = None
    for k in range(len(p.filtration) - 1):
        for x in p.layer(k).basis:
            op = r.act(x)
            for i in range(len(r.vfilt)):
                if not _maps_into(op, r.vlayer(i), r.vlayer(i + k)):
                    compat = f"element {x:#x} of F[{k}] does not move G[{i}] into G[{i + k}]"
                    break
            if compat:
                break
        if compat:
            break
    rep.add("filtration compatibility", compat is None, compat or "")

    if r.level == "terminating":
        bad = next((x for x in p.boundary.basis if not r.act(x).is_zero()), None)
        rep.add("boundary acts as zero", bad is None, "" if bad is None else f"boundary generator {bad:#x} acts nontrivially")
    return rep


def regular_rep(p: Phase) -> FilteredRep:
    """Left regular module of ``p / F[1]``, pulled back along the projection."""
    q, proj = boundary_quotient(p)
    lq = [q.left_matrix(1 << a) for a in range(q.dim)]
    action = []
    for j in range(p.dim):
        acc = GF2Matrix.zeros(q.dim, q.dim)
        for a in bits_of(proj(1 << j)):
            acc = acc + lq[a]
        action.append(acc)
    return FilteredRep(p, q.dim, tuple(action), trivial_vfilt(q.dim), "terminating")


def left_regular_rep(p: Phase) -> FilteredRep:
    """``p`` acting on itself, filtered by its own layers (weak level)."""
    action = tuple(p.left_matrix(1 << j) for j in range(p.dim))
    return FilteredRep(p, p.dim, action, tuple(p.filtration), "weak")


def pullback(r: FilteredRep, m: PhaseMap) -> FilteredRep:
    """Restrict ``r`` along a phase map ``m: source -> r.phase``."""
    if m.target is not r.phase and m.target != r.phase:
        raise ValueError("map does not land in the represented phase")
    action = tuple(r.act(m(1 << j)) for j in range(m.source.dim))
    return FilteredRep(m.source, r.mdim, action, r.vfilt, r.level)


def subrep(r: FilteredRep, u: GF2Subspace) -> FilteredRep:
    """The representation on an invariant subspace, in the coordinates of its basis."""
    action = []
    for a in r.action:
        cols = [u.coords(a.apply(v)) for v in u.basis]
        action.append(GF2Matrix.from_columns(u.dim, cols))
    layers = []
    for g in r.vfilt:
        layers.append(GF2Subspace.span(u.dim, (u.coords(v) for v in (g & u).basis)))
    while len(layers) > 2 and layers[-2].is_zero():
        layers.pop()
    return FilteredRep(r.phase, u.dim, tuple(action), tuple(layers), r.level)


# -- evaluation map ---------------------------------------------------------------------


@dataclass(frozen=True)
class PhiMap:
    """Evaluation of the phase into the product of the reps' operator spaces."""

    phase: Phase
    reps: tuple[FilteredRep, ...]
    rows: tuple[int, ...]  # rows[j] = flattened operators of basis element j
    width: int

    def evaluate(self, x: int) -> int:
        acc = 0
        for j in bits_of(x):
            acc ^= self.rows[j]
        return acc

    def split(self, flat: int) -> list[GF2Matrix]:
        out, off = [], 0
        for r in self.reps:
            size = r.mdim * r.mdim
            out.append(GF2Matrix.from_flat((flat >> off) & ((1 << size) - 1), r.mdim, r.mdim))
            off += size
        return out

    def join(self, mats: Sequence[GF2Matrix]) -> int:
        out, off = 0, 0
        for a in mats:
            out |= a.flat() << off
            off += a.rows * a.cols
        return out


def phi_assemble(p: Phase, reps: Sequence[FilteredRep]) -> tuple[PhiMap, GF2Subspace]:
    """Stack the actions of ``reps``; returns the map and its kernel."""
    for r in reps:
        if r.phase is not p and r.phase != p:
            raise ValueError("representation over a different phase")
        if r.level != "terminating":
            raise ValueError("only terminating representations enter the evaluation map")
    width = sum(r.mdim * r.mdim for r in reps)
    rows = []
    for j in range(p.dim):
        flat, off = 0, 0
        for r in reps:
            flat |= r.action[j].flat() << off
            off += r.mdim * r.mdim
        rows.append(flat)
    phi = PhiMap(p, tuple(reps), tuple(rows), width)
    kernel = GF2Subspace(p.dim, tuple(left_kernel(rows, width)))
    if not p.boundary <= kernel:
        raise ValueError("boundary ideal acts nontrivially; representations are not terminating")
    return phi, kernel


def operator_algebra(gens: Sequence[int], unit: int, mul, labels_prefix: str = "op", budget: int = 10**6) -> tuple[Phase, list[int]]:
    """Algebra spanned by words in ``gens``; returns it and its flat basis."""
    ech = Echelon([unit])
    queue = [unit]
    steps = 0
    while queue:
        v = queue.pop()
        for g in gens:
            steps += 1
            if steps > budget:
                raise BudgetExceeded("operator closure did not stabilise within budget")
            w = mul(v, g)
            if ech.add(w):
                queue.append(w)
    basis = ech.basis()
    table = [[coords_in(basis, mul(a, b)) for b in basis] for a in basis]
    labels = [f"{labels_prefix}{i}" for i in range(len(basis))]
    return Phase.from_table(labels, coords_in(basis, unit), table), basis


def coords_in(basis: Sequence[int], v: int) -> int:
    """Coordinates of ``v`` in a reduced echelon basis."""
    out = 0
    for i, b in enumerate(basis):
        if (v >> pivot(b)) & 1:
            v ^= b
            out |= 1 << i
    if v:
        raise ValueError("vector left the span")
    return out


def image_algebra(phi: PhiMap) -> tuple[Phase, PhaseMap]:
    """Operator algebra spanned by the image, and the induced map from ``p / F[1]``."""
    p = phi.phase
    q, proj = boundary_quotient(p)
    rows = echelon(phi.rows)
    if not rows:
        raise ValueError("empty image")

    def mul(a: int, b: int) -> int:
        return phi.join([x @ y for x, y in zip(phi.split(a), phi.split(b))])

    unit = phi.evaluate(p.unit)
    img, basis = operator_algebra(rows, unit, mul)
    if len(basis) != len(rows):
        raise ValueError("image is not closed under products; upstream homomorphism violated")

    cols = [coords_in(basis, phi.rows[c]) for c in boundary_quotient_coords(p)]
    m = PhaseMap(q, img, GF2Matrix.from_columns(img.dim, cols))
    cert = iso_certify(m)
    if not cert:
        raise ValueError(f"induced map from the boundary quotient is not an isomorphism: {cert.reason}")
    return img, m


def boundary_quotient_coords(p: Phase) -> list[int]:
    """Coordinates of ``p`` that index the basis of ``p / F[1]``."""
    return p.boundary.complement_coords()


# -- enumeration -----------------------------------------------------------------------


def _mat_mul_flat(m: int):
    mask = (1 << m) - 1

    def mul(a: int, b: int) -> int:
        brow = [(b >> (i * m)) & mask for i in range(m)]
        out = 0
        for i in range(m):
            row = (a >> (i * m)) & mask
            acc = 0
            for k in bits_of(row):
                acc ^= brow[k]
            out |= acc << (i * m)
        return out

    return mul


def enumerate_reps(p: Phase, mdim_max: int, budget: int = 10**6) -> list[FilteredRep]:
    """All unital maps ``p / F[1] -> M_m(GF(2))`` for ``1 <= m <= mdim_max``, lifted to ``p``.

    Generator images are tried in increasing bit order; the list is ordered by
    ``m`` and then lexicographically by those images.
    """
    if mdim_max > 3:
        raise ValueError("mdim_max above 3 is out of range for exhaustive enumeration")
    q, proj = boundary_quotient(p)
    gens = algebra_generators(q)
    out: list[FilteredRep] = []
    steps = 0
    for m in range(1, mdim_max + 1):
        mul = _mat_mul_flat(m)
        ident = GF2Matrix.identity(m).flat()
        space = 1 << (m * m)
        bound = space ** len(gens)

        def dfs(hom: PartialHom, idx: int):
            nonlocal steps
            if idx == len(gens):
                yield hom
                return
            for h in range(space):
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(
                        f"enumeration budget {budget} exceeded at m={m}; naive bound is {bound} candidate tuples"
                    )
                trial = hom.copy()
                ok = trial.extend(gens[idx], h)
                steps += trial.steps
                if ok:
                    yield from dfs(trial, idx + 1)

        for hom in dfs(PartialHom(q.mul, mul, q.unit, ident), 0):
            if hom.domain_dim() != q.dim:
                raise AssertionError("generators failed to span the quotient")
            imgs = [GF2Matrix.from_flat(hom.image(1 << a), m, m) for a in range(q.dim)]
            action = []
            for j in range(p.dim):
                acc = GF2Matrix.zeros(m, m)
                for a in bits_of(proj(1 << j)):
                    acc = acc + imgs[a]
                action.append(acc)
            out.append(FilteredRep(p, m, tuple(action), trivial_vfilt(m), "terminating"))
    return out


def rep_counts(reps: Sequence[FilteredRep]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for r in reps:
        counts[r.mdim] = counts.get(r.mdim, 0) + 1
    return counts


def restriction_bijection(big: Sequence[FilteredRep], small: Sequence[FilteredRep], inclusion: PhaseMap) -> list[int]:
    """Index map sending ``big[i]`` restricted along ``inclusion`` to its position in ``small``.

    Raises unless restriction is a bijection between the two lists.
    """
    index = {(r.mdim, tuple(a.data for a in r.action)): i for i, r in enumerate(small)}
    out = []
    for r in big:
        key = (r.mdim, tuple(a.data for a in pullback(r, inclusion).action))
        if key not in index:
            raise ValueError("restricted representation is missing from the smaller list")
        out.append(index[key])
    if sorted(out) != list(range(len(small))) or len(big) != len(small):
        raise ValueError("restriction is not a bijection")
    return out


# -- submodules and testing objects ----------------------------------------------------------


def cyclic_submodule(r: FilteredRep, v: int) -> GF2Subspace:
    ops = {a.data: a for a in r.action}.values()
    queue = [v]
    ech = Echelon()
    while queue:
        w = queue.pop()
        if ech.add(w):
            for a in ops:
                queue.append(a.apply(w))
    return GF2Subspace(r.mdim, tuple(ech.basis()))


def subrep_lattice(r: FilteredRep, budget: int = 10**5) -> list[GF2Subspace]:
    """Every invariant subspace, as sums of cyclic submodules, in canonical order."""
    if r.mdim > 12:
        raise BudgetExceeded("module too large for exhaustive submodule search")
    cyclic = {cyclic_submodule(r, v) for v in range(1, 1 << r.mdim)}
    lattice = {GF2Subspace.zero(r.mdim)}
    for c in sorted(cyclic, key=lambda s: (s.dim, s.basis)):
        new = {s + c for s in lattice}
        lattice |= new
        if len(lattice) > budget:
            raise BudgetExceeded(f"more than {budget} submodules")
    return sorted(lattice, key=lambda s: (s.dim, s.basis))


def separates(p: Phase, reps: Sequence[FilteredRep]) -> bool:
    """T1: joint action distinguishes elements exactly modulo ``F[1]``."""
    if not reps:
        return p.boundary.dim == p.dim
    _, kernel = phi_assemble(p, reps)
    return kernel == p.boundary


@dataclass
class MinimalityCertificate:
    certified: bool
    maximal_subreps: list[dict] = field(default_factory=list)
    descent: list[int] = field(default_factory=list)
    lattice_size: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "certified": self.certified,
            "maximal_subreps": self.maximal_subreps,
            "descent": self.descent,
            "lattice_size": self.lattice_size,
            "note": self.note,
        }


def _maximal_proper(lattice: list[GF2Subspace], full: GF2Subspace) -> list[GF2Subspace]:
    proper = [s for s in lattice if s != full]
    return [s for s in proper if not any(s < t for t in proper)]


def testing_object_search(p: Phase, budget: int = 10**5) -> tuple[FilteredRep, MinimalityCertificate]:
    """Descend from the boundary-quotient regular module to a T1-minimal subrepresentation."""
    t = regular_rep(p)
    descent = [t.mdim]
    while True:
        try:
            lattice = subrep_lattice(t, budget)
        except BudgetExceeded as exc:
            return t, MinimalityCertificate(False, descent=descent, note=str(exc))
        full = GF2Subspace.full(t.mdim)
        maximal = _maximal_proper(lattice, full)
        entries = []
        smaller = None
        for u in maximal:
            s = subrep(t, u)
            if s.mdim and separates(p, [s]):
                smaller = s
                break
            kdim = p.dim if not s.mdim else phi_assemble(p, [s])[1].dim
            entries.append({"subspace": [list(map(int, format(b, f"0{t.mdim}b")[::-1])) for b in u.basis], "kernel_dim": kdim})
        if smaller is None:
            return t, MinimalityCertificate(True, entries, descent, len(lattice))
        t = smaller
        descent.append(t.mdim)


def removal_enlarges_kernel(p: Phase, t: FilteredRep, family: Sequence[FilteredRep]) -> bool:
    """True iff dropping ``t`` from ``family + [t]`` strictly enlarges the kernel."""
    fam = [r for r in family if r is not t and r != t]
    _, with_t = phi_assemble(p, fam + [t])
    if fam:
        _, without = phi_assemble(p, fam)
    else:
        without = GF2Subspace.full(p.dim)
    return with_t < without
