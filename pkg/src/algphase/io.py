"""JSON file formats for phases, representations, maps and reports.

Vectors are written as lists of 0/1 of the ambient length, coordinate 0
first; matrices as lists of such rows.  Output is key-sorted and compact
so identical objects serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .filtrep import FilteredRep
from .gf2 import GF2Matrix, GF2Subspace, list_to_vec, vec_to_list
from .maps import PhaseMap
from .phase import Phase, PhaseError

SCHEMA = "algphase/1"


class FormatError(ValueError):
    """A file does not match the expected layout."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _bits(v: int, n: int) -> list[int]:
    return vec_to_list(v, n)


def _vec(bits: Any, n: int, what: str) -> int:
    if not isinstance(bits, list) or len(bits) != n or any(b not in (0, 1) or isinstance(b, bool) for b in bits):
        raise FormatError(f"{what}: expected a list of {n} zeros and ones")
    return list_to_vec(bits)


def _space(rows: Any, n: int, what: str) -> GF2Subspace:
    if not isinstance(rows, list):
        raise FormatError(f"{what}: expected a list of rows")
    vecs = [_vec(r, n, what) for r in rows]
    s = GF2Subspace.span(n, vecs)
    if list(s.basis) != vecs:
        raise FormatError(f"{what}: rows are not in canonical reduced echelon form")
    return s


def _matrix_to_json(m: GF2Matrix) -> list[list[int]]:
    return m.to_lists()


def _matrix(rows: Any, r: int, c: int, what: str) -> GF2Matrix:
    if not isinstance(rows, list) or len(rows) != r:
        raise FormatError(f"{what}: expected {r} rows")
    for row in rows:
        _vec(row, c, what)
    return GF2Matrix.from_lists(rows, c)


# -- phases ------------------------------------------------------------------------------


def phase_to_json(p: Phase) -> dict:
    n = p.dim
    mul = [[i, j, _bits(p.table[i][j], n)] for i in range(n) for j in range(n) if p.table[i][j]]
    out: dict[str, Any] = {
        "dim": n,
        "labels": list(p.labels),
        "unit": _bits(p.unit, n),
        "mul": mul,
        "filtration": [[_bits(v, n) for v in layer.basis] for layer in p.filtration],
    }
    if p.witness_island is not None:
        out["witness_island"] = [_bits(v, n) for v in p.witness_island.basis]
    if p.augmentation is not None:
        out["augmentation"] = _bits(p.augmentation, n)
    return out


def phase_from_json(d: Any) -> Phase:
    """Parse and shape-check; axioms are left to ``validate_phase``."""
    if not isinstance(d, dict):
        raise FormatError("phase: expected an object")
    for key in ("dim", "labels", "unit", "mul", "filtration"):
        if key not in d:
            raise FormatError(f"phase: missing key {key!r}")
    n = d["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError("phase: dim must be a positive integer")
    labels = d["labels"]
    if not isinstance(labels, list) or len(labels) != n or not all(isinstance(x, str) for x in labels):
        raise FormatError(f"phase: labels must be {n} strings")
    unit = _vec(d["unit"], n, "unit")
    table = [[0] * n for _ in range(n)]
    last = None
    for entry in d["mul"]:
        if not (isinstance(entry, list) and len(entry) == 3 and all(isinstance(x, int) for x in entry[:2])):
            raise FormatError("mul: entries must be [i, j, bits]")
        i, j, bits = entry
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"mul: index ({i},{j}) out of range")
        if last is not None and (i, j) <= last:
            raise FormatError("mul: entries must be strictly sorted by (i, j)")
        last = (i, j)
        table[i][j] = _vec(bits, n, f"mul[{i},{j}]")
    layers = tuple(_space(layer, n, f"filtration[{k}]") for k, layer in enumerate(d["filtration"]))
    island = _space(d["witness_island"], n, "witness_island") if d.get("witness_island") is not None else None
    aug = _vec(d["augmentation"], n, "augmentation") if d.get("augmentation") is not None else None
    try:
        return Phase(tuple(labels), unit, tuple(tuple(r) for r in table), layers, island, aug)
    except (PhaseError, ValueError) as exc:
        raise FormatError(f"phase: {exc}") from exc


# -- representations ------------------------------------------------------------------------


def rep_to_json(r: FilteredRep, phase_ref: str | None = None) -> dict:
    return {
        "phase": phase_ref if phase_ref is not None else phase_to_json(r.phase),
        "mdim": r.mdim,
        "action": [_matrix_to_json(a) for a in r.action],
        "vfilt": [[_bits(v, r.mdim) for v in g.basis] for g in r.vfilt],
        "level": r.level,
    }


def rep_from_json(d: Any, base: Path | None = None, phase: Phase | None = None) -> FilteredRep:
    if not isinstance(d, dict):
        raise FormatError("rep: expected an object")
    for key in ("phase", "mdim", "action", "vfilt", "level"):
        if key not in d:
            raise FormatError(f"rep: missing key {key!r}")
    if phase is None:
        ref = d["phase"]
        if isinstance(ref, str):
            path = Path(ref) if base is None or Path(ref).is_absolute() else base / ref
            phase = load_phase(path)
        else:
            phase = phase_from_json(ref)
    m = d["mdim"]
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise FormatError("rep: mdim must be a positive integer")
    if not isinstance(d["action"], list) or len(d["action"]) != phase.dim:
        raise FormatError(f"rep: need {phase.dim} action matrices")
    action = tuple(_matrix(a, m, m, "action") for a in d["action"])
    vfilt = tuple(_space(g, m, f"vfilt[{i}]") for i, g in enumerate(d["vfilt"]))
    if d["level"] not in ("weak", "terminating"):
        raise FormatError("rep: level must be 'weak' or 'terminating'")
    return FilteredRep(phase, m, action, vfilt, d["level"])


# -- maps ------------------------------------------------------------------------------------


def map_to_json(m: PhaseMap) -> dict:
    """Self-contained: both phases inline so ``iso_certify`` can be rerun from the file alone."""
    return {"source": phase_to_json(m.source), "target": phase_to_json(m.target), "matrix": _matrix_to_json(m.matrix)}


def map_from_json(d: Any) -> PhaseMap:
    if not isinstance(d, dict) or not {"source", "target", "matrix"} <= set(d):
        raise FormatError("map: expected source, target and matrix")
    s, t = phase_from_json(d["source"]), phase_from_json(d["target"])
    return PhaseMap(s, t, _matrix(d["matrix"], t.dim, s.dim, "matrix"))


# -- files -----------------------------------------------------------------------------------


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def load_phase(path: str | Path) -> Phase:
    return phase_from_json(read_json(path))


def save_phase(path: str | Path, p: Phase) -> None:
    write_json(path, phase_to_json(p))


def load_rep(path: str | Path, phase: Phase | None = None) -> FilteredRep:
    return rep_from_json(read_json(path), Path(path).parent, phase)


def save_rep(path: str | Path, r: FilteredRep, phase_ref: str | None = None) -> None:
    write_json(path, rep_to_json(r, phase_ref))


def load_map(path: str | Path) -> PhaseMap:
    return map_from_json(read_json(path))


def save_map(path: str | Path, m: PhaseMap) -> None:
    write_json(path, map_to_json(m))
