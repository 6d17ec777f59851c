import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from algphase import io
from algphase.filtrep import left_regular_rep, regular_rep
from algphase.gf2 import GF2Matrix, GF2Subspace
from algphase.heisenberg import flagship
from algphase.maps import BudgetExceeded, iso_certify, iso_search
from algphase.phase import INF, boundary_quotient, dual_numbers, relabel, square_zero_extend, unit_algebra
from algphase.reconstruct import (
    RawRep,
    Strong,
    Weak,
    dichotomy_classify,
    kernel_gap,
    local_reconstruction_check,
    no_hidden_structure_check,
    operator_defect_degree,
    reconstruct_phase,
    reconstruction_report,
)

M = 5


def _flag(m=M):
    return tuple(GF2Subspace.span(m, [1 << j for j in range(i, m)]) for i in range(m + 1))


def shifted_ops(m=M):
    """Matrices sending coordinate ``j`` into coordinates ``>= j + s``."""

    def build(s, bits):
        cols = []
        for j in range(m):
            lo = j + s
            mask = ((1 << m) - 1) ^ ((1 << lo) - 1) if lo < m else 0
            cols.append((bits >> (j * m)) & mask)
        return GF2Matrix.from_columns(m, cols)

    return st.builds(build, st.integers(0, 2), st.integers(0, (1 << (m * m)) - 1))


def test_defect_degree_examples():
    flag = _flag()
    assert operator_defect_degree(GF2Matrix.identity(M), flag) == 0
    assert operator_defect_degree(GF2Matrix.zeros(M, M), flag) == INF
    vl = (GF2Subspace.full(2), GF2Subspace.span(2, [0b10]), GF2Subspace.zero(2))
    assert operator_defect_degree(GF2Matrix.from_columns(2, [0b10, 0]), vl) == 1
    assert operator_defect_degree(GF2Matrix.from_columns(2, [0b01, 0b01]), vl) == -1
    with pytest.raises(ValueError):
        operator_defect_degree(GF2Matrix.identity(3), vl)


@given(shifted_ops(), shifted_ops())
def test_defect_degree_is_subadditive_under_composition(f, g):
    flag = _flag()
    fg = f @ g
    if not fg.is_zero():
        assert operator_defect_degree(fg, flag) >= operator_defect_degree(f, flag) + operator_defect_degree(g, flag)


def test_identity_only_gives_unit_phase():
    raw = RawRep((GF2Matrix.identity(3),), _flag(3))
    p = reconstruct_phase([raw])
    assert p.dim == 1 and p.is_strong()


def test_round_trip_to_boundary_quotient(corpus):
    for name, p in corpus:
        rebuilt = reconstruct_phase([regular_rep(p)])
        q, _ = boundary_quotient(p)
        res = iso_search(rebuilt, q)
        assert res.status == "yes" and iso_certify(res.map), name
        if p.is_strong():
            assert iso_search(rebuilt, p).status == "yes"


def test_weak_input_keeps_or_collapses_boundary():
    d = dual_numbers()
    kept = reconstruct_phase([left_regular_rep(d)], keep_boundary=True)
    assert kept.layer_dims == [2, 1, 0]
    assert reconstruct_phase([left_regular_rep(d)]).dim == 1
    p = flagship(1, 2)
    kept = reconstruct_phase([left_regular_rep(p)], keep_boundary=True)
    assert iso_search(kept, p).status == "yes"


def test_block_diagonal_inputs(suite):
    reps = [regular_rep(suite.P_weak), regular_rep(suite.P_weak)]
    assert reconstruct_phase(reps).dim == 8


def test_reconstruct_errors():
    flag = _flag(2)
    with pytest.raises(ValueError):
        reconstruct_phase([])
    with pytest.raises(ValueError):
        reconstruct_phase([RawRep((GF2Matrix.identity(2),), flag), RawRep((), flag)])
    swap = GF2Matrix.from_columns(2, [0b10, 0b01])
    with pytest.raises(ValueError):
        reconstruct_phase([RawRep((swap,), flag)])
    with pytest.raises(BudgetExceeded):
        reconstruct_phase([regular_rep(flagship(1, 1))], budget=2)


def test_dichotomy(suite):
    assert dichotomy_classify(flagship(1, 1)) == Strong()
    assert dichotomy_classify(dual_numbers()) == Weak(1)
    assert dichotomy_classify(suite.P_weak) == Weak(2)
    assert str(Weak(2)) == "Weak(2)"
    with pytest.raises(ValueError):
        Weak(0)


def test_local_reconstruction(suite):
    s = local_reconstruction_check(suite.R_strong)
    assert s.exact and s.method == "strong" and s.island_dim == 8
    e = local_reconstruction_check(square_zero_extend(suite.R_strong, 1))
    assert e.exact and e.island_kernel_dim == 0 and e.method == "recorded witness"
    f = local_reconstruction_check(suite.P_weak)
    assert f.exact and f.global_kernel_dim == 24 and f.island_dim == 8


def test_island_of_flagship_is_a_subgroup(suite):
    from algphase.maps import rigidity_island

    island = rigidity_island(suite.P_weak).island
    assert all(v & (v - 1) == 0 for v in island.basis)


def test_no_hidden_structure(suite):
    same = no_hidden_structure_check(suite.P_weak, suite.P_weak)
    assert same.verdict == "equivalent" and iso_certify(same.witness.map)
    assert same.witness.map.matrix == GF2Matrix.identity(32)
    v = no_hidden_structure_check(suite.P_weak, suite.P_ext)
    assert v.verdict == "distinguished" and v.invariant == "boundary layer dimensions"
    assert v.details["rep_counts"][0] == v.details["rep_counts"][1]
    perm = list(range(32))
    random.Random(2).shuffle(perm)
    twin, _ = relabel(flagship(1, 2), perm)
    eq = no_hidden_structure_check(flagship(1, 2), twin)
    assert eq.verdict == "equivalent" and iso_certify(eq.witness.map)


def test_verdicts_agree_with_search(corpus):
    small = [p for _, p in corpus if p.dim <= 10]
    for a in small:
        for b in small:
            v = no_hidden_structure_check(a, b)
            res = iso_search(a, b)
            if v.verdict == "distinguished":
                assert res.status != "yes"
            if v.verdict == "equivalent":
                assert iso_certify(v.witness.map)


def test_kernel_gap(suite):
    assert kernel_gap(suite.P_weak, suite.P_ext) == 1
    assert kernel_gap(suite.P_weak, square_zero_extend(suite.P_weak, 2)) == 2


def test_report_certificates_reverify(suite):
    rep = reconstruction_report(suite.P_weak)
    d = json.loads(io.dumps(rep.to_dict()))
    assert d["dichotomy"] == "Weak(2)"
    assert d["kernels"]["regular"] == 24 and d["kernels"]["regular_equals_boundary"]
    assert iso_certify(io.map_from_json(d["quotient_iso"]["certificate"]))
    assert d["testing_objects"][0]["minimality"]["certified"]
    assert rep.ok and not rep.warnings


def test_report_unknown_under_zero_budget():
    rep = reconstruction_report(unit_algebra(), budget=0)
    assert rep.quotient_iso.status == "unknown" and rep.warnings
