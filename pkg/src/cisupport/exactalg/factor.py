"""Factorization of homogeneous forms over F_p.

Binary forms are factored completely by dehomogenizing and factoring the
univariate image over F_p.  Forms in three or more variables are split as
far as monomial content, linear factors and binary sub-forms allow; the
result carries ``exact=False`` when irreducibility of a leftover factor is not
certified.
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .polynomial import Polynomial


@dataclass
class Factorization:
    unit: int
    factors: list[tuple[Polynomial, int]]
    exact: bool

    def expand(self) -> Polynomial:
        ring = self.factors[0][0].ring if self.factors else None
        if ring is None:
            raise ValueError("empty factorization")
        out = ring.const(self.unit)
        for f, m in self.factors:
            out = out * f ** m
        return out


def _monomial_content(f: Polynomial) -> tuple[list[tuple[Polynomial, int]], Polynomial]:
    n = f.ring.n
    mins = [min(e[i] for e in f.terms) for i in range(n)]
    factors = [(f.ring.gen(i), k) for i, k in enumerate(mins) if k]
    rest = {tuple(x - m for x, m in zip(e, mins)): c for e, c in f.terms.items()}
    return factors, Polynomial(f.ring, rest, True)


def _factor_binary(f: Polynomial, a: int, b: int) -> tuple[int, list[tuple[Polynomial, int]]]:
    """Factor a form in variables a, b not divisible by b."""
    ring = f.ring
    p = ring.p
    deg = f.degree()
    coeffs = [0] * (deg + 1)  # dense in a, highest first, after b = 1
    for e, c in f.terms.items():
        coeffs[deg - e[a]] = (coeffs[deg - e[a]] + c) % p
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    lc, fl = gf_factor([ZZ(c) for c in coeffs], p, ZZ)
    out = []
    for g, m in fl:
        g = [int(x) % p for x in g]
        dg = len(g) - 1
        terms = {}
        for k, c in enumerate(g):
            if c:
                e = [0] * ring.n
                e[a] = dg - k
                e[b] = k
                terms[tuple(e)] = c
        out.append((Polynomial(ring, terms, True), m))
    return int(lc) % p, out


def factor_split(f: Polynomial) -> Factorization:
    """Split a nonzero homogeneous form into irreducible homogeneous factors."""
    if f.is_zero():
        raise ValueError("cannot factor zero")
    if not f.is_homogeneous():
        raise ValueError("factor_split expects a homogeneous polynomial")
    factors, rest = _monomial_content(f)
    exact = True
    unit = 1
    vars_ = sorted(rest.variables())
    if not vars_:
        unit = rest.lead_coeff()
    elif rest.degree() == 1:
        unit = rest.lead_coeff()
        factors.append((rest.monic(), 1))
    elif len(vars_) == 2:
        a, b = vars_
        unit, more = _factor_binary(rest, a, b)
        factors.extend(more)
    else:
        # no certified multivariate factorization over F_p; keep as one factor
        unit = rest.lead_coeff()
        factors.append((rest.monic(), 1))
        exact = False
    factors.sort(key=lambda fm: (fm[0].degree(), fm[0].ring.key(fm[0].lead_exp())), reverse=False)
    return Factorization(unit % f.ring.p, factors, exact)
