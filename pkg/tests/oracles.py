"""Independent reference computations.

Nothing here imports the package.  Vectors are plain lists of 0/1 and the
Heisenberg groups are built from polynomial coefficient tuples, so agreement
with the library is evidence rather than tautology.
"""

from __future__ import annotations

import itertools


def dense_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                m[i] = [a ^ b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def dense_basis(rows: list[list[int]]) -> list[list[int]]:
    out: list[list[int]] = []
    for r in rows:
        if dense_rank(out + [r]) > len(out):
            out.append(list(r))
    return out


def dense_nullity(rows: list[list[int]], n: int) -> int:
    return n - dense_rank(rows) if rows else n


# -- truncated polynomial rings and Heisenberg groups -----------------------------


def poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    k = len(a)
    out = [0] * k
    for i in range(k):
        for j in range(k - i):
            out[i + j] ^= a[i] & b[j]
    return tuple(out)


def poly_add(a, b):
    return tuple(x ^ y for x, y in zip(a, b))


def heisenberg_group(n: int, k: int, cocycle: str = "alternating"):
    """Elements ``(z, x, xi)`` with the twisted product; returns (elements, mul, identity)."""
    ring = list(itertools.product((0, 1), repeat=k))
    vecs = list(itertools.product(ring, repeat=n))
    elems = [(z, x, xi) for z in (0, 1) for x in vecs for xi in vecs]
    zero = tuple([0] * k)

    def dot(a, b):
        acc = zero
        for s, t in zip(a, b):
            acc = poly_add(acc, poly_mul(s, t))
        return acc

    def twist(w1, w2):
        x1, xi1 = w1
        x2, xi2 = w2
        form = dot(xi1, x2) if cocycle == "polarized" else poly_add(dot(xi1, x2), dot(xi2, x1))
        return form[k - 1]

    def mul(g, h):
        z = g[0] ^ h[0] ^ twist((g[1], g[2]), (h[1], h[2]))
        x = tuple(poly_add(a, b) for a, b in zip(g[1], h[1]))
        xi = tuple(poly_add(a, b) for a, b in zip(g[2], h[2]))
        return (z, x, xi)

    ident = (0, tuple([zero] * n), tuple([zero] * n))
    return elems, mul, ident


def group_algebra(elems, mul):
    """Dense product on the group algebra: returns ``prod(u, v)`` on 0/1 lists."""
    index = {g: i for i, g in enumerate(elems)}
    table = [[index[mul(g, h)] for h in elems] for g in elems]

    def prod(u, v):
        out = [0] * len(elems)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        out[table[i][j]] ^= 1
        return out

    return index, prod


def heisenberg_layer_dims(n: int, k: int, cocycle: str = "alternating") -> list[int]:
    """Dimensions of the powers of the ideal generated by ``D(u w) - 1``."""
    elems, mul, ident = heisenberg_group(n, k, cocycle)
    index, prod = group_algebra(elems, mul)
    size = len(elems)

    def unit_vec(g):
        v = [0] * size
        v[index[g]] = 1
        return v

    def u_times(p):
        return tuple([0] + list(p[:-1]))

    gens = []
    for _, x, xi in elems:
        g = (0, tuple(u_times(c) for c in x), tuple(u_times(c) for c in xi))
        v = unit_vec(g)
        v[index[ident]] ^= 1
        gens.append(v)
    basis_elems = [unit_vec(g) for g in elems]
    ideal = dense_basis(gens)
    changed = True
    while changed:
        changed = False
        for v in list(ideal):
            for e in basis_elems:
                for w in (prod(e, v), prod(v, e)):
                    if dense_rank(ideal + [w]) > len(ideal):
                        ideal.append(w)
                        changed = True
    dims = [size]
    power = ideal
    while power:
        dims.append(len(power))
        power = dense_basis([prod(a, b) for a in power for b in ideal])
    dims.append(0)
    return dims


# -- representations ---------------------------------------------------------------


def _mat_mul(a, b, m):
    return tuple(tuple(sum(a[i][t] & b[t][j] for t in range(m)) % 2 for j in range(m)) for i in range(m))


def general_linear(m: int) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for bits in itertools.product((0, 1), repeat=m * m):
        rows = [list(bits[i * m : (i + 1) * m]) for i in range(m)]
        if dense_rank(rows) == m:
            out.append(tuple(tuple(r) for r in rows))
    return out


def count_group_homs(elems, mul, ident, m: int) -> int:
    """Number of homomorphisms ``G -> GL_m(GF(2))`` by brute force over generator images."""
    gens: list = []
    span = {ident}
    for g in elems:
        if g not in span:
            gens.append(g)
            frontier = list(span)
            span = set(span)
            while frontier:
                a = frontier.pop()
                for s in gens:
                    c = mul(a, s)
                    if c not in span:
                        span.add(c)
                        frontier.append(c)
    eye = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    gl = general_linear(m)

    def order(g):
        o, x = 1, g
        while x != ident:
            x, o = mul(x, g), o + 1
        return o

    def mat_order_divides(a, o):
        x = eye
        for _ in range(o):
            x = _mat_mul(x, a, m)
        return x == eye

    cands = [[a for a in gl if mat_order_divides(a, order(g))] for g in gens]
    count = 0
    for images in itertools.product(*cands):
        img = {ident: eye}
        frontier = [ident]
        ok = True
        while frontier and ok:
            a = frontier.pop()
            for s, sa in zip(gens, images):
                c = mul(a, s)
                ca = _mat_mul(img[a], sa, m)
                if c in img:
                    if img[c] != ca:
                        ok = False
                        break
                else:
                    img[c] = ca
                    frontier.append(c)
        if ok and all(img[mul(a, b)] == _mat_mul(img[a], img[b], m) for a in elems for b in elems):
            count += 1
    return count
