"""Finite filtered algebras over GF(2), their filtered representations and reconstruction."""

from .filtrep import (
    FilteredRep,
    MinimalityCertificate,
    PhiMap,
    enumerate_reps,
    image_algebra,
    left_regular_rep,
    phi_assemble,
    regular_rep,
    rep_validate,
    subrep_lattice,
    testing_object_search,
)
from .gf2 import GF2Matrix, GF2Subspace, NilRingElem
from .heisenberg import HeisenbergSpec, PhasePoint, flagship, flagship_suite, heisenberg_phase
from .maps import BudgetExceeded, PhaseMap, iso_certify, iso_search, morphism_certify, rigidity_island
from .phase import (
    INF,
    Phase,
    PhaseError,
    boundary_depth,
    boundary_quotient,
    defect_degree,
    dual_numbers,
    generator_depth,
    obstruction_object,
    square_zero_extend,
    unit_algebra,
    validate_phase,
)
from .reconstruct import (
    ReconstructionReport,
    Strong,
    Weak,
    dichotomy_classify,
    local_reconstruction_check,
    no_hidden_structure_check,
    operator_defect_degree,
    reconstruct_phase,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
