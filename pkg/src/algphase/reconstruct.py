"""Rebuild phases from operator data and compare phases through their representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .filtrep import (
    FilteredRep,
    testing_object_search,
    coords_in,
    enumerate_reps,
    image_algebra,
    operator_algebra,
    phi_assemble,
    regular_rep,
    rep_counts,
)
from .gf2 import GF2Matrix, GF2Subspace, left_kernel
from .maps import BudgetExceeded, IsoSearchResult, PhaseMap, island_phase, iso_search, rigidity_island
from .phase import INF, Phase, boundary_quotient, obstruction_object, quotient


@dataclass(frozen=True)
class RawRep:
    """Operators on ``GF(2)^m`` with a descending filtration, no phase attached."""

    matrices: tuple[GF2Matrix, ...]
    vfilt: tuple[GF2Subspace, ...]

    @classmethod
    def of(cls, r: FilteredRep) -> "RawRep":
        return cls(r.action, r.vfilt)

    @property
    def mdim(self) -> int:
        return self.vfilt[0].ambient_dim


def _layer(vfilt: Sequence[GF2Subspace], i: int) -> GF2Subspace:
    return vfilt[i] if i < len(vfilt) else GF2Subspace.zero(vfilt[0].ambient_dim)


def _shifts_by(op: GF2Matrix, vfilt: Sequence[GF2Subspace], k: int) -> bool:
    return all(op.apply(v) in _layer(vfilt, i + k) for i in range(len(vfilt)) for v in vfilt[i].basis)


def operator_defect_degree(op: GF2Matrix, vfilt: Sequence[GF2Subspace]) -> int | float:
    """Largest ``k`` with ``op G[i] ⊆ G[i+k]`` for all ``i``.

    ``INF`` for the zero operator and ``-1`` when ``op`` does not even
    preserve the filtration.
    """
    m = vfilt[0].ambient_dim
    if (op.rows, op.cols) != (m, m):
        raise ValueError("operator and filtration disagree on the module dimension")
    if op.is_zero():
        return INF
    k = -1
    while k + 1 <= len(vfilt) and _shifts_by(op, vfilt, k + 1):
        k += 1
    return k


def _stratum(basis: Sequence[int], blocks: Sequence[RawRep], offsets: Sequence[int], k: int) -> list[int]:
    """Coordinates (in ``basis``) of the operators shifting every block by at least ``k``."""
    rows = []
    width = 0
    for b in basis:
        viol, off = 0, 0
        for rr, o in zip(blocks, offsets):
            m = rr.mdim
            op = GF2Matrix.from_flat((b >> o) & ((1 << (m * m)) - 1), m, m)
            for i, g in enumerate(rr.vfilt):
                target = _layer(rr.vfilt, i + k)
                for v in g.basis:
                    viol |= target.reduce(op.apply(v)) << off
                    off += m
        rows.append(viol)
        width = max(width, off)
    return left_kernel(rows, width)


def reconstruct_phase(
    reps: Sequence[Union[RawRep, FilteredRep]],
    budget: int = 10**6,
    keep_boundary: bool = False,
) -> Phase:
    """The phase generated by the given operators, read off their filtrations.

    Operators of matching index across ``reps`` are treated as one element
    acting block-diagonally.  The generated algebra is filtered by the ideals
    of operators shifting every filtration by at least ``k``; by default the
    degree >= 1 part is then collapsed and the strong quotient returned.
    """
    blocks = [RawRep.of(r) if isinstance(r, FilteredRep) else r for r in reps]
    if not blocks:
        raise ValueError("need at least one representation")
    count = len(blocks[0].matrices)
    if any(len(b.matrices) != count for b in blocks):
        raise ValueError("representations disagree on the number of operators")
    for b in blocks:
        for a in b.matrices:
            if operator_defect_degree(a, b.vfilt) == -1:
                raise ValueError("an input operator does not preserve its filtration")
    offsets, off = [], 0
    for b in blocks:
        offsets.append(off)
        off += b.mdim * b.mdim
    gens = []
    for i in range(count):
        gens.append(sum(b.matrices[i].flat() << o for b, o in zip(blocks, offsets)))
    unit = sum(GF2Matrix.identity(b.mdim).flat() << o for b, o in zip(blocks, offsets))

    def mul(x: int, y: int) -> int:
        out = 0
        for b, o in zip(blocks, offsets):
            m = b.mdim
            mask = (1 << (m * m)) - 1
            a1 = GF2Matrix.from_flat((x >> o) & mask, m, m)
            a2 = GF2Matrix.from_flat((y >> o) & mask, m, m)
            out |= (a1 @ a2).flat() << o
        return out

    alg, basis = operator_algebra(gens, unit, mul, budget=budget)
    n = alg.dim
    layers = [GF2Subspace.full(n)]
    k = 1
    while True:
        s = GF2Subspace.span(n, _stratum(basis, blocks, offsets, k))
        layers.append(s)
        if s.is_zero():
            break
        k += 1
    filtered = Phase(alg.labels, alg.unit, alg.table, tuple(layers))
    if keep_boundary:
        return filtered
    q, _ = quotient(filtered, filtered.boundary)
    return q


# -- verdicts ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Strong:
    def __str__(self) -> str:
        return "Strong"


@dataclass(frozen=True)
class Weak:
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("a weak phase has depth at least 1")

    def __str__(self) -> str:
        return f"Weak({self.depth})"


Dichotomy = Union[Strong, Weak]


def dichotomy_classify(p: Phase) -> Dichotomy:
    if p.boundary.is_zero():
        return Strong()
    return Weak(p.depth)


@dataclass
class LocalReconstruction:
    island_status: str
    method: str = ""
    island_dim: int = 0
    island_kernel_dim: int | None = None
    global_kernel_dim: int | None = None
    iso_status: str = "unknown"
    iso_matrix: GF2Matrix | None = None

    @property
    def exact(self) -> bool:
        return self.island_status == "found" and self.island_kernel_dim == 0 and self.iso_status == "yes"

    def to_dict(self) -> dict:
        return {
            "island": self.island_status,
            "method": self.method,
            "island_dim": self.island_dim,
            "island_kernel_dim": self.island_kernel_dim,
            "global_kernel_dim": self.global_kernel_dim,
            "iso": self.iso_status,
            "exact": self.exact,
        }


def local_reconstruction_check(p: Phase, budget: int = 10**6) -> LocalReconstruction:
    """Reconstruct the rigidity island from its own regular module and certify the result."""
    found = rigidity_island(p, budget)
    _, gk = phi_assemble(p, [regular_rep(p)])
    if found.status != "found":
        return LocalReconstruction("island unknown", global_kernel_dim=gk.dim)
    sub, _ = island_phase(p, found.island)
    reg = regular_rep(sub)
    _, kernel = phi_assemble(sub, [reg])
    try:
        iso = iso_search(reconstruct_phase([reg], budget), sub, budget)
    except BudgetExceeded as exc:
        iso = IsoSearchResult("unknown", reason=str(exc))
    return LocalReconstruction(
        "found",
        found.method,
        sub.dim,
        kernel.dim,
        gk.dim,
        iso.status,
        iso.map.matrix if iso.map else None,
    )


@dataclass
class HiddenStructureVerdict:
    verdict: str  # "equivalent" | "distinguished" | "unknown"
    invariant: str = ""
    witness: IsoSearchResult | None = None
    details: dict = field(default_factory=dict)


def _rep_side(p: Phase, mdim_max: int, budget: int) -> tuple[dict | None, Phase]:
    try:
        counts = rep_counts(enumerate_reps(p, mdim_max, budget))
    except BudgetExceeded:
        counts = None
    img, _ = image_algebra(phi_assemble(p, [regular_rep(p)])[0])
    return counts, img


def no_hidden_structure_check(p: Phase, q: Phase, budget: int = 10**6, mdim_max: int = 2) -> HiddenStructureVerdict:
    """Compare representation-side and boundary-side invariants, then search for an equivalence."""
    if p == q:
        return HiddenStructureVerdict("equivalent", "", IsoSearchResult("yes", PhaseMap.identity(p)), {"identical": True})
    cp, ip = _rep_side(p, mdim_max, budget)
    cq, iq = _rep_side(q, mdim_max, budget)
    image_iso = iso_search(ip, iq, budget)
    details = {
        "rep_counts": [cp, cq],
        "image_iso": image_iso.status,
        "layer_dims": [p.layer_dims, q.layer_dims],
    }
    differing = []
    if cp is not None and cq is not None and cp != cq:
        differing.append("rep counts")
    if image_iso.status == "no":
        differing.append("image algebra")
    if p.layer_dims != q.layer_dims:
        differing.append("boundary layer dimensions")
    if differing:
        details["differing"] = differing
        return HiddenStructureVerdict("distinguished", differing[0] if len(differing) == 1 else ", ".join(differing), None, details)
    found = iso_search(p, q, budget)
    if found.status == "yes":
        return HiddenStructureVerdict("equivalent", "", found, details)
    if found.status == "no":
        return HiddenStructureVerdict("distinguished", f"isomorphism search: {found.reason}", found, details)
    return HiddenStructureVerdict("unknown", found.reason, found, details)


def kernel_gap(base: Phase, ext: Phase) -> int:
    """``dim ker Φ(ext) - dim ker Φ(base)`` with the regular modules as probes."""
    _, kb = phi_assemble(base, [regular_rep(base)])
    _, ke = phi_assemble(ext, [regular_rep(ext)])
    return ke.dim - kb.dim


def obstruction_vanishes(p: Phase) -> bool:
    return obstruction_object(p).is_zero()


# -- reports -----------------------------------------------------------------------------

SCOPE_NOTE = (
    "round-trip and dichotomy are checked on this instance only; "
    "no statement quantified over all reconstruction procedures is verified"
)


@dataclass
class ReconstructionReport:
    """Everything learned about one phase, with certificates inline."""

    input: dict
    kernels: dict
    reconstructed: Phase | None
    quotient_iso: IsoSearchResult
    dichotomy: Dichotomy
    island: LocalReconstruction
    testing_objects: list[dict]
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.quotient_iso.status == "yes" and not any(t.get("t1") is False for t in self.testing_objects)

    def to_dict(self) -> dict:
        from .io import SCHEMA, map_to_json, phase_to_json

        iso = {"status": self.quotient_iso.status, "reason": self.quotient_iso.reason}
        if self.quotient_iso.map is not None:
            iso["certificate"] = map_to_json(self.quotient_iso.map)
        return {
            "schema": SCHEMA,
            "kind": "reconstruction",
            "scope": SCOPE_NOTE,
            "input": self.input,
            "kernels": self.kernels,
            "reconstructed": None if self.reconstructed is None else phase_to_json(self.reconstructed),
            "quotient_iso": iso,
            "dichotomy": str(self.dichotomy),
            "island": self.island.to_dict(),
            "testing_objects": self.testing_objects,
            "warnings": self.warnings,
        }


def reconstruction_report(p: Phase, budget: int = 10**6) -> ReconstructionReport:
    """Kernel of the regular evaluation, round-trip reconstruction, testing object and island."""
    warnings = []
    _, kernel = phi_assemble(p, [regular_rep(p)])
    kernels = {"boundary": p.boundary.dim, "regular": kernel.dim, "regular_equals_boundary": kernel == p.boundary}
    q, _ = boundary_quotient(p)
    try:
        rebuilt = reconstruct_phase([regular_rep(p)], budget)
        iso = iso_search(rebuilt, q, budget)
    except BudgetExceeded as exc:
        rebuilt, iso = None, IsoSearchResult("unknown", reason=str(exc) or "budget exhausted")
    if iso.status != "yes":
        warnings.append(f"reconstruction iso: {iso.status}")
    t, cert = testing_object_search(p, budget)
    tk = phi_assemble(p, [t])[1]
    tests = [{"mdim": t.mdim, "kernel_dim": tk.dim, "t1": tk == p.boundary, "minimality": cert.to_dict()}]
    kernels["testing_object"] = tk.dim
    if not cert.certified:
        warnings.append("testing object minimality: unknown")
    island = local_reconstruction_check(p, budget)
    if not island.exact:
        warnings.append(f"island: {island.island_status}, iso {island.iso_status}")
    summary = {"dim": p.dim, "layer_dims": p.layer_dims, "depth": p.depth, "commutative": p.is_commutative}
    return ReconstructionReport(summary, kernels, rebuilt, iso, dichotomy_classify(p), island, tests, warnings)


__all__ = [
    "ReconstructionReport",
    "reconstruction_report",
    "RawRep",
    "operator_defect_degree",
    "reconstruct_phase",
    "Strong",
    "Weak",
    "Dichotomy",
    "dichotomy_classify",
    "LocalReconstruction",
    "local_reconstruction_check",
    "HiddenStructureVerdict",
    "no_hidden_structure_check",
    "kernel_gap",
    "obstruction_vanishes",
    "coords_in",
]
