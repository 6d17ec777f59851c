import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algphase.gf2 import GF2Subspace
from algphase.heisenberg import flagship
from algphase.maps import iso_certify
from algphase.phase import (
    INF,
    Phase,
    PhaseError,
    algebra_generators,
    boundary_quotient,
    canonical_generators,
    center,
    defect_degree,
    dual_numbers,
    generated_subalgebra,
    generator_depth,
    ideal_power_filtration,
    induce_phase,
    obstruction_object,
    phase_invariants,
    quotient,
    relabel,
    square_zero_extend,
    two_sided_ideal,
    unit_algebra,
    validate_phase,
)
from randgen import flip_product_bit, random_extension


def test_unit_algebra_is_strong():
    u = unit_algebra()
    assert validate_phase(u).ok
    assert u.dim == 1 and u.is_strong() and u.depth == 0


def test_dual_numbers():
    d = dual_numbers()
    assert validate_phase(d).ok
    assert d.layer_dims == [2, 1, 0]
    assert d.mul(2, 2) == 0
    assert defect_degree(d, 1) == 0
    assert defect_degree(d, 2) == 1
    assert defect_degree(d, 0) == INF


def test_corpus_validates(corpus):
    for name, p in corpus:
        rep = validate_phase(p)
        assert rep.ok, (name, rep.first_failure)


def test_mutations_are_cited(corpus):
    rng = random.Random(7)
    for name, p in corpus:
        for _ in range(10):
            q, where = flip_product_bit(p, rng)
            rep = validate_phase(q)
            assert not rep.ok, (name, where)
            assert rep.first_failure.detail


def test_non_associative_table_names_a_triple():
    d = dual_numbers()
    bad = Phase(d.labels, 1, ((1, 2), (2, 3)), d.filtration)
    rep = validate_phase(bad)
    assert not rep.ok
    names = {c.name for c in rep.checks if not c.ok}
    assert "two-sided ideals" in names or "associativity" in names


def test_extension_layers(suite):
    assert suite.P_ext.layer_dims == [33, 25, 9, 0]
    assert suite.R_ext.layer_dims == [9, 1, 0]
    assert square_zero_extend(suite.P_weak, 2).layer_dims == [34, 26, 10, 0]


def test_extension_mixed_products_follow_augmentation():
    d = dual_numbers()
    e = square_zero_extend(d, 1)
    b = 1 << 2
    assert e.mul(e.unit, b) == b and e.mul(b, e.unit) == b
    assert e.mul(2, b) == 0
    assert e.mul(b, b) == 0


def test_extension_needs_augmentation():
    p = replace(dual_numbers(), augmentation=None)
    with pytest.raises(PhaseError):
        square_zero_extend(p, 1)
    assert validate_phase(square_zero_extend(p, 1, augmentation=1)).ok
    with pytest.raises(PhaseError):
        square_zero_extend(p, 1, augmentation=0b11)


def test_boundary_quotient_of_flagship(suite):
    q, proj = boundary_quotient(suite.P_weak)
    assert q.dim == 8 and q.is_strong()
    assert validate_phase(q).ok
    for v in suite.P_weak.boundary.basis:
        assert proj(v) == 0


def test_quotient_rejects_non_ideal():
    d = dual_numbers()
    with pytest.raises(PhaseError):
        quotient(d, GF2Subspace.span(2, [0b01]))


def test_ideal_power_filtration_errors():
    d = dual_numbers()
    with pytest.raises(PhaseError):
        ideal_power_filtration(d, GF2Subspace.full(2))
    with pytest.raises(PhaseError):
        induce_phase(d)


def test_two_sided_ideal_of_flagship(suite):
    p = suite.P_weak
    assert two_sided_ideal(p, p.boundary.basis[:1]) <= p.boundary


def test_relabel_gives_certified_iso():
    p = flagship(1, 2)
    perm = list(range(p.dim))
    random.Random(3).shuffle(perm)
    q, m = relabel(p, perm)
    assert validate_phase(q).ok
    assert iso_certify(m)
    assert phase_invariants(p) == phase_invariants(q)


def test_canonical_generators_follow_labels():
    p = flagship(1, 2)
    perm = list(range(p.dim))
    random.Random(11).shuffle(perm)
    q, m = relabel(p, perm)
    assert sorted(m(g) for g in canonical_generators(p)) == sorted(canonical_generators(q))


def test_algebra_generators_generate(corpus):
    for _, p in corpus:
        assert generated_subalgebra(p, algebra_generators(p)).dim == p.dim


def test_obstruction_vanishes_exactly_on_strong(corpus):
    for _, p in corpus:
        assert obstruction_object(p).is_zero() == p.is_strong()
    obj = obstruction_object(flagship(1, 2))
    assert obj.layer == 1 and obj.dim == 16


def test_center_of_commutative_flagship_is_everything():
    p = flagship(1, 2)
    assert center(p).dim == p.dim
    pol = flagship(1, 1, "polarized")
    assert center(pol).dim < pol.dim


@settings(max_examples=60)
@given(st.integers(1, (1 << 32) - 1), st.integers(1, (1 << 32) - 1))
def test_defect_degree_is_superadditive(x, y):
    p = _flagship()
    xy = p.mul(x, y)
    if xy:
        assert defect_degree(p, xy) >= defect_degree(p, x) + defect_degree(p, y)


_CACHE = {}


def _flagship():
    if "p" not in _CACHE:
        _CACHE["p"] = flagship(1, 2)
    return _CACHE["p"]


def test_generator_depth_counts_only_new_generators(suite):
    assert generator_depth(suite.P_weak) == 1
    assert generator_depth(suite.P_ext) == 2
    assert generator_depth(suite.R_strong) == 0


@settings(max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_generator_depth_is_bounded_by_depth(corpus, seed):
    _, p = random_extension(corpus, random.Random(seed))
    g = generator_depth(p)
    assert g <= p.depth
    assert (g == 0) == (p.depth == 0)
