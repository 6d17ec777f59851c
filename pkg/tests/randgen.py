"""Seeded generators: corrupted phases, random extensions and random weak representations."""

import random
from dataclasses import replace


def flip_product_bit(p, rng: random.Random):
    n = p.dim
    i, j, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
    table = [list(r) for r in p.table]
    table[i][j] ^= 1 << c
    return replace(p, table=tuple(tuple(r) for r in table)), (i, j, c)


def random_extension(corpus, rng: random.Random):
    from algphase.phase import relabel, square_zero_extend

    name, p = corpus[rng.randrange(len(corpus))]
    for _ in range(rng.randint(1, 2)):
        p = square_zero_extend(p, rng.randint(1, 3))
        name += "+ext"
    perm = list(range(p.dim))
    rng.shuffle(perm)
    return name, relabel(p, perm)[0]


def stretch(vfilt, s: int):
    """``G'[j] = G[ceil(j / s)]``; still compatible, just longer."""
    n_layers = len(vfilt)
    out = []
    j = 0
    while True:
        i = -(-j // s)
        if i >= n_layers:
            break
        out.append(vfilt[i])
        j += 1
    return tuple(out)


def random_weak_rep(corpus, rng: random.Random):
    """A weak-level representation: left regular, optionally cut to a cyclic submodule and stretched."""
    from algphase.filtrep import FilteredRep, cyclic_submodule, left_regular_rep, subrep

    name, p = corpus[rng.randrange(len(corpus))]
    r = left_regular_rep(p)
    if rng.random() < 0.5:
        u = cyclic_submodule(r, rng.randrange(1, 1 << p.dim))
        r = subrep(r, u)
    s = rng.randint(1, 3)
    if s > 1:
        r = FilteredRep(r.phase, r.mdim, r.action, stretch(r.vfilt, s), "weak")
    return name, r


def random_element(p, layer: int, rng: random.Random) -> int:
    basis = p.layer(layer).basis
    x = 0
    while not x and basis:
        x = 0
        for b in basis:
            if rng.random() < 0.5:
                x ^= b
    return x
