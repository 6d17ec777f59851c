"""Built-in phases used by the checks and the CLI, in a fixed order."""

from __future__ import annotations

from functools import lru_cache

from .heisenberg import HeisenbergSpec, heisenberg_phase
from .phase import Phase, PhaseError, dual_numbers, square_zero_extend, unit_algebra

BASE_NAMES = ("unit", "dual")


def build(name: str) -> Phase:
    """Resolve a phase name: ``unit``, ``dual`` or a ``heisenberg:`` spec string."""
    if name == "unit":
        return unit_algebra()
    if name == "dual":
        return dual_numbers()
    if name.startswith("heisenberg:"):
        return heisenberg_phase(HeisenbergSpec.parse(name))
    raise PhaseError(f"unknown phase {name!r}; expected unit, dual or heisenberg:n=..,k=..")


@lru_cache(maxsize=None)
def _corpus() -> tuple[tuple[str, Phase], ...]:
    r = heisenberg_phase(HeisenbergSpec(1, 1))
    p = heisenberg_phase(HeisenbergSpec(1, 2))
    out = [
        ("unit", unit_algebra()),
        ("dual", dual_numbers()),
        ("R", r),
        ("P", p),
    ]
    for b in (1, 2):
        out.append((f"R_ext{b}", square_zero_extend(r, b)))
        out.append((f"P_ext{b}", square_zero_extend(p, b)))
    out.append(("R_pol", heisenberg_phase(HeisenbergSpec(1, 1, "polarized"))))
    out.append(("P_pol", heisenberg_phase(HeisenbergSpec(1, 2, "polarized"))))
    return tuple(out)


def corpus() -> list[tuple[str, Phase]]:
    """Named phases: unit, dual numbers, flagships for ``k = 1, 2``, their extensions, polarized variants."""
    return list(_corpus())


def corpus_phase(name: str) -> Phase:
    for n, p in _corpus():
        if n == name:
            return p
    raise KeyError(name)
