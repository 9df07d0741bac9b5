"""Independent reference computations used to check the package.

Plain Python integers only; nothing here imports the package's own linear
algebra, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

from itertools import combinations_with_replacement


def rank_mod(rows: list[list[int]], p: int) -> int:
    """Rank of an integer matrix over F_p by schoolbook elimination."""
    m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def nullity_mod(rows: list[list[int]], ncols: int, p: int) -> int:
    return ncols - (rank_mod(rows, p) if rows else 0)


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return sorted(set(out))


def ideal_degree_dim(polys: list[dict], nvars: int, degree: int, p: int) -> int:
    """dim_k of the degree-``degree`` part of a homogeneous ideal, from monomial multiples."""
    basis = monomials(nvars, degree)
    idx = {m: i for i, m in enumerate(basis)}
    rows = []
    for f in polys:
        if not f:
            continue
        d = sum(next(iter(f)))
        if d > degree:
            continue
        for mu in monomials(nvars, degree - d):
            row = [0] * len(basis)
            for e, c in f.items():
                row[idx[tuple(a + b for a, b in zip(e, mu))]] += c
            rows.append(row)
    return rank_mod(rows, p) if rows else 0


def hilbert_values(polys: list[dict], nvars: int, upto: int, p: int) -> list[int]:
    return [len(monomials(nvars, d)) - ideal_degree_dim(polys, nvars, d, p) for d in range(upto + 1)]


def growth_dimension(values: list[int]) -> int:
    """Krull dimension read off a Hilbert function tail: 0 if it vanishes, else 1 + polynomial degree."""
    tail = values[len(values) // 2:]
    if not any(tail):
        return 0
    deg = 0
    diff = tail
    while any(diff) and len(diff) > 1:
        if len(set(diff)) == 1:
            return deg + 1
        diff = [b - a for a, b in zip(diff, diff[1:])]
        deg += 1
    return deg + 1
