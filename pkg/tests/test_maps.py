import random

from algphase.gf2 import GF2Matrix
from algphase.heisenberg import flagship
from algphase.maps import PhaseMap, island_phase, iso_certify, iso_search, morphism_certify, rigidity_island
from algphase.phase import boundary_quotient, dual_numbers, relabel, square_zero_extend, unit_algebra
from algphase.phase import Phase, phase_invariants, validate_phase
from algphase.gf2 import GF2Subspace


def test_identity_is_certified(corpus):
    for _, p in corpus:
        assert iso_certify(PhaseMap.identity(p))


def test_certify_rejects_broken_maps():
    d = dual_numbers()
    swap = PhaseMap(d, d, GF2Matrix.from_columns(2, [2, 1]))
    assert not iso_certify(swap)
    zero_e = PhaseMap(d, d, GF2Matrix.from_columns(2, [1, 0]))
    c = iso_certify(zero_e)
    assert not c and c.reason == "not bijective"
    assert morphism_certify(zero_e)


def test_search_finds_relabelled_copy():
    p = flagship(1, 2)
    perm = list(range(p.dim))
    random.Random(5).shuffle(perm)
    q, _ = relabel(p, perm)
    res = iso_search(p, q)
    assert res.status == "yes" and iso_certify(res.map)


def test_search_says_no_on_invariant_mismatch(suite):
    res = iso_search(suite.P_weak, suite.P_ext)
    assert res.status == "no" and "dim" in res.reason


def _local(products):
    """Commutative local algebra on ``1, r1, r2, r3`` with radical products given by index."""
    table = [[0] * 4 for _ in range(4)]
    for i in range(4):
        table[0][i] = table[i][0] = 1 << i
    for (i, j), k in products.items():
        table[i][j] = table[j][i] = 1 << k
    chain = [GF2Subspace.full(4), GF2Subspace.span(4, [2, 4, 8]), GF2Subspace.span(4, [8]), GF2Subspace.zero(4)]
    return Phase.from_table(["1", "a", "b", "c"], 1, table, chain)


def test_search_says_no_after_exhaustion():
    tensor = _local({(1, 2): 3})
    flat = _local({})
    assert validate_phase(tensor).ok and validate_phase(flat).ok
    assert phase_invariants(tensor) == phase_invariants(flat)
    res = iso_search(tensor, flat)
    assert res.status == "no" and res.reason == "search exhausted"
    assert iso_search(tensor, tensor).status == "yes"


def test_zero_budget_is_unknown():
    p = flagship(1, 1)
    assert iso_search(p, p, budget=0).status == "unknown"
    assert iso_search(p, p, budget=3).status in ("unknown", "yes")


def test_quotient_iso(suite):
    q, _ = boundary_quotient(suite.P_weak)
    assert iso_search(q, suite.R_strong).status == "yes"
    assert iso_search(q, flagship(1, 1, "polarized")).status == "no"


def test_islands(suite):
    r = rigidity_island(suite.R_strong)
    assert r.method == "strong" and r.island.dim == 8
    p = rigidity_island(suite.P_weak)
    assert p.status == "found" and p.island.dim == 8
    e = rigidity_island(suite.R_ext)
    assert e.status == "found" and e.island.dim == 8
    sub, inc = island_phase(suite.P_weak, p.island)
    assert validate_phase(sub).ok and sub.is_strong()
    assert morphism_certify(inc)
    assert iso_search(sub, suite.R_strong).status == "yes"


def test_generic_island_search_on_small_phase():
    d = dual_numbers()
    from dataclasses import replace

    res = rigidity_island(replace(d, witness_island=None))
    assert res.status == "found" and res.island.dim == 1
