"""Buchberger's algorithm for ideals and submodules of free modules.

Internally a module element is a dict ``{(pos, exp): coeff}``; an ideal is
the rank-one case.  Coefficient tracking (expressing basis elements in terms
of the input generators) is opt-in because resolutions never need it.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .polynomial import (
    Exp, MonomialOrder, PolyRing, Polynomial, divides, lcm_exp, sub_exp,
)

Term = tuple[int, Exp]
Vec = dict  # {(pos, exp): coeff}


def _mono_mul(e: Exp, a: Exp) -> Exp:
    return tuple(x + y for x, y in zip(e, a))


class _Element:
    __slots__ = ("vec", "lead", "track")

    def __init__(self, vec: Vec, lead: Term, track):
        self.vec = vec
        self.lead = lead
        self.track = track


class _Engine:
    def __init__(self, ring: PolyRing, tkey: Callable, rank1: bool, ntrack: int = 0):
        self.ring = ring
        self.p = ring.p
        self.tkey = tkey
        self.rank1 = rank1
        self.ntrack = ntrack

    # -- vector helpers ----------------------------------------------------
    def lead(self, v: Vec) -> Term:
        return max(v, key=self.tkey)

    def shift(self, v: Vec, a: Exp, c: int) -> Vec:
        p = self.p
        return {(pos, _mono_mul(e, a)): (x * c) % p for (pos, e), x in v.items()}

    def axpy(self, target: Vec, v: Vec, a: Exp, c: int) -> None:
        """target += c * x^a * v (in place)."""
        p = self.p
        for (pos, e), x in v.items():
            t = (pos, _mono_mul(e, a))
            y = (target.get(t, 0) + x * c) % p
            if y:
                target[t] = y
            else:
                target.pop(t, None)

    def track_axpy(self, target: list, src: list, a: Exp, c: int) -> None:
        p = self.p
        for k in range(self.ntrack):
            tk = target[k]
            for e, x in src[k].items():
                m = _mono_mul(e, a)
                y = (tk.get(m, 0) + x * c) % p
                if y:
                    tk[m] = y
                else:
                    tk.pop(m, None)

    def find_reducer(self, t: Term, G: list[_Element]):
        pos, e = t
        for g in G:
            if g.lead[0] == pos and divides(g.lead[1], e):
                return g
        return None

    def reduce(self, v: Vec, G: list[_Element], track=None, full: bool = True):
        """Reduce ``v`` by ``G``; ``track`` is updated alongside (in place)."""
        v = dict(v)
        rem: Vec = {}
        p = self.p
        while v:
            t = max(v, key=self.tkey)
            c = v[t]
            g = self.find_reducer(t, G)
            if g is None:
                if not full:
                    rem.update(v)
                    return rem
                rem[t] = c
                del v[t]
                continue
            a = sub_exp(t[1], g.lead[1])
            f = (-c * pow(g.vec[g.lead], -1, p)) % p
            self.axpy(v, g.vec, a, f)
            if track is not None:
                self.track_axpy(track, g.track, a, f)
        return rem

    # -- Buchberger --------------------------------------------------------
    def run(self, inputs: list[Vec], tracks: list | None) -> list[_Element]:
        G: list[_Element] = []
        pending: set[tuple[int, int]] = set()
        heap: list = []
        counter = 0

        def add(vec: Vec, track):
            nonlocal counter
            lt = self.lead(vec)
            idx = len(G)
            G.append(_Element(vec, lt, track))
            for i in range(idx):
                if G[i].lead[0] != lt[0]:
                    continue
                L = lcm_exp(G[i].lead[1], lt[1])
                heapq.heappush(heap, (sum(L), counter, i, idx))
                counter += 1
                pending.add((i, idx))

        for k, v in enumerate(inputs):
            if v:
                add(dict(v), tracks[k] if tracks is not None else None)

        while heap:
            _, _, i, j = heapq.heappop(heap)
            pending.discard((i, j))
            gi, gj = G[i], G[j]
            L = lcm_exp(gi.lead[1], gj.lead[1])
            if self.rank1 and all(
                x == 0 or y == 0 for x, y in zip(gi.lead[1], gj.lead[1])
            ):
                continue
            if self._chain(i, j, L, G, pending):
                continue
            p = self.p
            ci = pow(gi.vec[gi.lead], -1, p)
            cj = pow(gj.vec[gj.lead], -1, p)
            ai, aj = sub_exp(L, gi.lead[1]), sub_exp(L, gj.lead[1])
            s = self.shift(gi.vec, ai, ci)
            self.axpy(s, gj.vec, aj, (-cj) % p)
            tr = None
            if gi.track is not None:
                tr = [dict() for _ in range(self.ntrack)]
                self.track_axpy(tr, gi.track, ai, ci)
                self.track_axpy(tr, gj.track, aj, (-cj) % p)
            r = self.reduce(s, G, tr, full=False)
            if r:
                r = self.reduce(r, G, tr, full=True)
                add(r, tr)
        return G

    def _chain(self, i: int, j: int, L: Exp, G: list[_Element], pending) -> bool:
        pos = G[i].lead[0]
        for k, g in enumerate(G):
            if k in (i, j) or g.lead[0] != pos or not divides(g.lead[1], L):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    def reduced(self, G: list[_Element]) -> list[_Element]:
        # drop elements whose leads are divisible by another lead
        keep: list[_Element] = []
        for idx, g in enumerate(G):
            dominated = False
            for jdx, h in enumerate(G):
                if jdx == idx or h.lead[0] != g.lead[0] or not divides(h.lead[1], g.lead[1]):
                    continue
                if h.lead != g.lead or jdx < idx:
                    dominated = True
                    break
            if not dominated:
                keep.append(g)
        out: list[_Element] = []
        p = self.p
        for idx, g in enumerate(keep):
            others = keep[:idx] + keep[idx + 1:]
            tr = [dict(t) for t in g.track] if g.track is not None else None
            v = self.reduce(g.vec, others, tr, full=True)
            inv = pow(v[g.lead], -1, p)
            v = {t: (c * inv) % p for t, c in v.items()}
            if tr is not None:
                tr = [{e: (c * inv) % p for e, c in t.items()} for t in tr]
            out.append(_Element(v, g.lead, tr))
        out.sort(key=lambda g: self.tkey(g.lead))
        return out


def _ideal_engine(ring: PolyRing, ntrack: int = 0) -> _Engine:
    key = ring.key
    return _Engine(ring, lambda t: key(t[1]), rank1=True, ntrack=ntrack)


def _to_vec(f: Polynomial) -> Vec:
    return {(0, e): c for e, c in f.terms.items()}


def _from_vec(ring: PolyRing, v: Vec, pos: int = 0) -> Polynomial:
    return Polynomial(ring, {e: c for (q, e), c in v.items() if q == pos}, True)


@dataclass
class GroebnerBasis:
    """A reduced Gröbner basis of an ideal.

    ``tracking[k]`` (when present) expresses ``polys[k]`` in terms of the
    original generators ``gens``.
    """

    ring: PolyRing
    polys: list[Polynomial]
    gens: list[Polynomial] = field(default_factory=list)
    tracking: list[list[Polynomial]] | None = None
    reduced: bool = True

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __len__(self) -> int:
        return len(self.polys)

    def is_unit(self) -> bool:
        return any(f.is_constant() and not f.is_zero() for f in self.polys)

    def is_zero(self) -> bool:
        return not self.polys

    def leads(self) -> list[Exp]:
        return [f.lead_exp() for f in self.polys]

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ring == other.ring and set(self.polys) == set(other.polys)

    def __repr__(self) -> str:
        return "GB[" + ", ".join(map(str, self.polys)) + "]"


def groebner(gens: Sequence[Polynomial], order: MonomialOrder | None = None,
             track: bool = False) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if not gens:
        raise ValueError("groebner needs at least one generator (use [0] for the zero ideal)")
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        gens = [Polynomial(ring, g.terms, True) for g in gens]
    m = len(gens)
    eng = _ideal_engine(ring, ntrack=m if track else 0)
    tracks = None
    if track:
        tracks = [[{ring.zero_exp: 1} if k == j else {} for k in range(m)] for j in range(m)]
    G = eng.reduced(eng.run([_to_vec(g) for g in gens], tracks))
    polys = [_from_vec(ring, g.vec) for g in G]
    tracking = None
    if track:
        tracking = [[Polynomial(ring, t, True) for t in g.track] for g in G]
    return GroebnerBasis(ring, polys, gens, tracking)


def _basis_elements(G: GroebnerBasis, track: bool) -> tuple[_Engine, list[_Element]]:
    n = len(G.gens) if track else 0
    eng = _ideal_engine(G.ring, ntrack=n)
    els = []
    for k, f in enumerate(G.polys):
        tr = [dict(t.terms) for t in G.tracking[k]] if track else None
        els.append(_Element(_to_vec(f), (0, f.lead_exp()), tr))
    return eng, els


def _coerce(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    if f.ring == G.ring:
        return f
    if f.ring.n != G.ring.n or f.ring.p != G.ring.p:
        raise ValueError("polynomial and basis live in different rings")
    return Polynomial(G.ring, f.terms, True)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Unique remainder of ``f`` modulo the reduced basis ``G``."""
    src_ring = f.ring
    f = _coerce(f, G)
    if not G.polys:
        return Polynomial(src_ring, f.terms, True)
    eng, els = _basis_elements(G, False)
    return Polynomial(src_ring, {e: c for (_, e), c in eng.reduce(_to_vec(f), els).items()}, True)


def division_with_quotients(f: Polynomial, G: GroebnerBasis) -> tuple[Polynomial, list[Polynomial]]:
    """``f = sum(q_j * gens_j) + r`` with ``r = normal_form(f, G)``.

    Requires a tracked basis.
    """
    if G.tracking is None:
        raise ValueError("basis was computed without coefficient tracking")
    src_ring = f.ring
    f = _coerce(f, G)
    m = len(G.gens)
    if not G.polys:
        return f, [G.ring.zero()] * m
    eng, els = _basis_elements(G, True)
    tr = [dict() for _ in range(m)]
    rem = eng.reduce(_to_vec(f), els, tr)
    # reduce() accumulates minus the quotient combination
    q = [-Polynomial(G.ring, t) for t in tr]
    r = Polynomial(src_ring, {e: c for (_, e), c in rem.items()}, True)
    return r, [Polynomial(src_ring, x.terms, True) for x in q]


def membership_with_coefficients(f: Polynomial, gens: Sequence[Polynomial],
                                 basis: GroebnerBasis | None = None) -> list[Polynomial] | None:
    """Coefficients ``c`` with ``f = sum(c_j * gens_j)``, or None if f is not in the ideal."""
    gens = list(gens)
    if basis is None:
        basis = groebner(gens, track=True)
    r, q = division_with_quotients(f, basis)
    if not r.is_zero():
        return None
    check = f.ring.zero()
    for c, g in zip(q, gens):
        check = check + c * g
    assert check == f, "membership certificate failed substitution check"
    return q


def syzygies(gens: Sequence, quotient: Sequence[Polynomial] | None = None) -> list[list[Polynomial]]:
    """Generators of ``{c : sum c_j gens_j = 0}``, optionally over ``Q/(quotient)``.

    ``gens`` are polynomials (ideal case) or equal-length sequences of
    polynomials (columns of a matrix).  The syzygy module is read off a
    Gröbner basis of the graph module ``(g_j, e_j)`` under an order that
    eliminates the first block.
    """
    gens = list(gens)
    if not gens:
        return []
    vectors = [[g] if isinstance(g, Polynomial) else list(g) for g in gens]
    R = len(vectors[0])
    ring = vectors[0][0].ring
    m = len(vectors)
    key = ring.key

    def tkey(t):
        pos, e = t
        return (1 if pos < R else 0, key(e), -pos)

    zero = ring.zero_exp
    inputs: list[Vec] = []
    for j, v in enumerate(vectors):
        vec: Vec = {}
        for r, poly in enumerate(v):
            for e, c in poly.terms.items():
                vec[(r, e)] = c
        vec[(R + j, zero)] = 1
        inputs.append(vec)
    qgb = None
    if quotient:
        qgb = groebner(list(quotient))
        for g in qgb.polys:
            for r in range(R):
                inputs.append({(r, e): c for e, c in g.terms.items()})
    eng = _Engine(ring, tkey, rank1=False)
    G = eng.reduced(eng.run(inputs, None))
    out: list[list[Polynomial]] = []
    seen = set()
    for g in G:
        if any(pos < R for pos, _ in g.vec):
            continue
        syz = [_from_vec(ring, g.vec, R + j) for j in range(m)]
        if qgb is not None:
            syz = [normal_form(s, qgb) for s in syz]
        if all(s.is_zero() for s in syz):
            continue
        sig = tuple(syz)
        if sig not in seen:
            seen.add(sig)
            out.append(syz)
    return out


def krull_dimension(G: GroebnerBasis) -> int:
    """Krull dimension of ``ring/I`` from the leading-term ideal; -1 for the unit ideal."""
    if G.is_unit():
        return -1
    n = G.ring.n
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in G.leads()]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = set(S)
            if all(not sup <= s for sup in supports):
                return size
    return 0  # pragma: no cover


def radical_membership(g: Polynomial, G: GroebnerBasis) -> bool:
    """Rabinowitsch: ``g`` is in rad(I) iff 1 is in ``(I, 1 - w g)``."""
    g = _coerce(g, G)
    if g.is_zero() or G.is_unit() or G.contains(g):
        return True
    ring = G.ring
    big = ring.extend(["_w"])
    emb = [big.gen(i) for i in range(ring.n)]
    w = big.gen(ring.n)
    gens = [f.substitute(emb) for f in G.polys]
    gens.append(big.one() - w * g.substitute(emb))
    return groebner(gens).is_unit()


def ideal_sum(I: GroebnerBasis, J: GroebnerBasis) -> GroebnerBasis:
    gens = I.polys + J.polys
    return groebner(gens or [I.ring.zero()])


def ideal_product(I: GroebnerBasis, J: GroebnerBasis) -> GroebnerBasis:
    gens = [f * g for f in I.polys for g in J.polys]
    return groebner(gens or [I.ring.zero()])


def ideal_intersection(I: GroebnerBasis, J: GroebnerBasis) -> GroebnerBasis:
    """``I ∩ J`` by eliminating s from ``s I + (1 - s) J``."""
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return groebner([ring.zero()])
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    big = ring.extend(["_s"], front=True, order=MonomialOrder("elim", 1))
    emb = [big.gen(i + 1) for i in range(ring.n)]
    s = big.gen(0)
    gens = [s * f.substitute(emb) for f in I.polys]
    gens += [(big.one() - s) * f.substitute(emb) for f in J.polys]
    G = groebner(gens)
    keep = []
    for f in G.polys:
        if all(e[0] == 0 for e in f.terms):
            keep.append(Polynomial(ring, {e[1:]: c for e, c in f.terms.items()}, True))
    return groebner(keep or [ring.zero()])


def ideal_equal(I: GroebnerBasis, J: GroebnerBasis) -> bool:
    return I == J


def hilbert_function(G: GroebnerBasis, degree: int) -> int:
    """Number of standard monomials of the given degree (for homogeneous I)."""
    leads = G.leads()
    return sum(
        1 for e in G.ring.monomials(degree) if not any(divides(l, e) for l in leads)
    )
