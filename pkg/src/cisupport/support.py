"""Support varieties in ``P^{c-1}`` and the operations on them.

Ideals live in ``T = k[t_1..t_c]`` with every ``t_j`` of degree one.  A
support ideal is the annihilator of a windowed graded ``T``-module given by
its dimensions and the matrices of each ``t_j``; it is recomputed on growing
windows until it stops changing.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .cimodule import CIRing, ModulePresentation, minimalize, residue_field
from .errors import ConstructionDegenerate, NotStabilized
from .exactalg import (
    GroebnerBasis,
    PolyRing,
    Polynomial,
    factor_split,
    groebner,
    ideal_intersection,
    ideal_sum,
    krull_dimension,
    radical_membership,
)

Exp = tuple[int, ...]


# ---------------------------------------------------------------------------
# ideals and sets
# ---------------------------------------------------------------------------

@dataclass
class TIdeal:
    """Homogeneous ideal of ``T`` with provenance flags."""

    gb: GroebnerBasis
    provisional: bool = False
    window: int | None = None
    history: list[int] = field(default_factory=list)
    exact: bool = True

    @property
    def ring(self) -> PolyRing:
        return self.gb.ring

    @property
    def gens(self) -> list[Polynomial]:
        return self.gb.polys

    @property
    def dim(self) -> int:
        """Krull dimension of ``T/J`` (-1 for the unit ideal)."""
        return krull_dimension(self.gb)

    @property
    def cx(self) -> int:
        """Complexity read off the ideal: projective dimension of ``V(J)`` plus one."""
        return max(self.dim, 0)

    def is_empty(self) -> bool:
        """``V(J)`` is empty in projective space."""
        return self.dim <= 0

    def radical_contains(self, f: Polynomial) -> bool:
        return radical_membership(f, self.gb)

    def radical_equal(self, other: TIdeal) -> bool:
        return same_variety(self, other)

    def to_strings(self) -> list[str]:
        return [g.to_str() for g in self.gens] or ["0"]

    def __repr__(self) -> str:
        tag = " provisional" if self.provisional else ""
        return f"TIdeal({self.to_strings()}{tag})"


def t_ideal(T: PolyRing, gens: Sequence[Polynomial], **kw) -> TIdeal:
    gens = [g for g in gens if not g.is_zero()]
    return TIdeal(groebner(gens or [T.zero()]), **kw)


def unit_ideal(T: PolyRing) -> TIdeal:
    return TIdeal(groebner([T.one()]))


def zero_ideal(T: PolyRing) -> TIdeal:
    return TIdeal(groebner([T.zero()]))


def _proj_contained(J: TIdeal, gens: Sequence[Polynomial]) -> bool:
    """``V(J) ⊆ V(gens)`` in projective space."""
    T = J.ring
    for g in gens:
        if radical_membership(g, J.gb):
            continue
        # off the irrelevant ideal: every g * t_l must vanish on V(J)
        if not all(radical_membership(g * t, J.gb) for t in T.gens()):
            return False
    return True


def same_variety(I: TIdeal, J: TIdeal) -> bool:
    return _proj_contained(I, J.gens) and _proj_contained(J, I.gens)


@dataclass
class AlgebraicSet:
    """A closed subset ``X = V(I_X)`` of ``P^{c-1}``."""

    ideal: TIdeal
    label: str = ""

    @classmethod
    def V(cls, T: PolyRing, polys: Sequence[Polynomial], label: str = "") -> AlgebraicSet:
        return cls(t_ideal(T, polys), label)

    @classmethod
    def empty(cls, T: PolyRing) -> AlgebraicSet:
        return cls(unit_ideal(T), "empty")

    @classmethod
    def everything(cls, T: PolyRing) -> AlgebraicSet:
        return cls(zero_ideal(T), "all")

    @classmethod
    def point(cls, T: PolyRing, a: Sequence[int]) -> AlgebraicSet:
        return cls(point_ideal(T, a), "point(" + ":".join(map(str, a)) + ")")


def point_ideal(T: PolyRing, a: Sequence[int]) -> TIdeal:
    """The homogeneous prime of a rational point ``(a_1 : ... : a_c)``."""
    a = [int(x) % T.p for x in a]
    if len(a) != T.n or not any(a):
        raise ValueError(f"not a point of P^{T.n - 1}: {a}")
    t = T.gens()
    gens = [t[j] * a[k] - t[k] * a[j] for j in range(T.n) for k in range(j + 1, T.n)]
    return t_ideal(T, gens)


def contains(X: AlgebraicSet, J: TIdeal) -> bool:
    """``V(J) ⊆ X``."""
    return _proj_contained(J, X.ideal.gens)


def variety_union(I: TIdeal, J: TIdeal) -> TIdeal:
    return TIdeal(ideal_intersection(I.gb, J.gb), provisional=I.provisional or J.provisional)


def variety_intersection(I: TIdeal, J: TIdeal) -> TIdeal:
    return TIdeal(ideal_sum(I.gb, J.gb), provisional=I.provisional or J.provisional)


def point_in(J: TIdeal, a: Sequence[int]) -> bool:
    """Whether the rational point ``a`` lies on ``V(J)``."""
    return all(g.evaluate(a) == 0 for g in J.gens)


# ---------------------------------------------------------------------------
# annihilators of windowed T-modules
# ---------------------------------------------------------------------------

class TModuleWindow:
    """``V = ⊕ V_i`` (``0 <= i <= N``) with ``chi[j][i]: V_i -> V_{i+2}``."""

    def __init__(self, T: PolyRing, dims: Sequence[int], chi: Sequence[Sequence[np.ndarray]]):
        self.T = T
        self.p = T.p
        self.dims = list(dims)
        self.chi = chi
        self._mono: dict[tuple[Exp, int], np.ndarray] = {}
        self._kernels: dict[tuple[int, int, int], np.ndarray] = {}
        self._fresh_memo: dict[int, bool] = {}

    def act(self, alpha: Exp, i: int) -> np.ndarray:
        """Matrix of ``t^alpha`` from ``V_i`` to ``V_{i + 2|alpha|}``."""
        key = (alpha, i)
        M = self._mono.get(key)
        if M is None:
            if not any(alpha):
                M = np.eye(self.dims[i], dtype=np.int64)
            else:
                j = next(k for k, a in enumerate(alpha) if a)
                rest = tuple(a - (k == j) for k, a in enumerate(alpha))
                inner = self.act(rest, i)
                lvl = i + 2 * sum(rest)
                M = la.matmul(self.chi[j][lvl], inner, self.p)
            self._mono[key] = M
        return M

    def _fresh(self, i: int) -> bool:
        """Whether ``V_i`` is not contained in ``T_+ V``."""
        hit = self._fresh_memo.get(i)
        if hit is None:
            if not self.dims[i]:
                hit = False
            elif i < 2:
                hit = True
            else:
                imgs = np.hstack([self.chi[j][i - 2] for j in range(self.T.n)])
                hit = la.rank(imgs, self.p) < self.dims[i]
            self._fresh_memo[i] = hit
        return hit

    def generator_top(self, par: int, N: int) -> int | None:
        """Largest ``i <= N`` of parity ``par`` where ``V_i`` is not in ``T_+ V``."""
        return next((i for i in range(N - (N - par) % 2, par - 1, -2) if self._fresh(i)), None)

    def kernel(self, par: int, delta: int, N: int) -> np.ndarray:
        """Forms of degree ``delta`` killing ``V_i`` for ``i ≡ par`` with ``i + 2 delta <= N`` (rows)."""
        last = N - 2 * delta
        last -= (last - par) % 2
        return self._kernel_upto(par, delta, last)

    def _kernel_upto(self, par: int, delta: int, last: int) -> np.ndarray:
        """Kernel of ``t^α`` over the degrees ``par, par+2, .., last``, built incrementally."""
        key = (par, delta, last)
        K = self._kernels.get(key)
        if K is not None:
            return K
        mons = self.T.monomials(delta)
        if last < par:
            K = np.eye(len(mons), dtype=np.int64)
        else:
            K = self._kernel_upto(par, delta, last - 2)
            i = last
            if K.shape[0] and self.dims[i] and self.dims[i + 2 * delta]:
                block = np.stack([self.act(a, i).reshape(-1) for a in mons], axis=1)
                sub = la.nullspace(la.matmul(block, K.T, self.p), self.p)
                K = la.matmul(sub, K, self.p)
        self._kernels[key] = K
        return K

    def annihilator(self, N: int) -> GroebnerBasis:
        """``ann_T`` of the part of ``V`` visible in ``[0, N]``, even and odd halves intersected."""
        T = self.T
        parts = []
        for par in (0, 1):
            g0 = self.generator_top(par, N)
            if g0 is None:
                parts.append(groebner([T.one()]))
                continue
            gens: list[Polynomial] = []
            for delta in range((N - g0) // 2 + 1):
                mons = T.monomials(delta)
                for row in self.kernel(par, delta, N):
                    gens.append(Polynomial(T, {m: int(c) for m, c in zip(mons, row) if c}))
            parts.append(groebner(gens or [T.zero()]))
        return ideal_intersection(parts[0], parts[1])


def _normalize(G: GroebnerBasis) -> GroebnerBasis:
    # an ideal primary to the irrelevant ideal has empty projective variety
    if not G.is_unit() and krull_dimension(G) <= 0:
        return groebner([G.ring.one()])
    return G


def stabilized_annihilator(V: TModuleWindow, window: int, c: int, strict: bool = False) -> TIdeal:
    """Annihilators on windows ``2c..window``; stable once unchanged for ``c`` extensions."""
    start = min(2 * c, window)
    history = []
    last = None
    streak = 0
    for N in range(start, window + 1):
        G = _normalize(V.annihilator(N))
        if last is not None and G == last:
            streak += 1
        else:
            streak = 0
            history = []
        history.append(N)
        last = G
    provisional = streak < c
    if provisional and strict:
        raise NotStabilized(f"annihilator still changing at window {window}")
    return TIdeal(last, provisional=provisional, window=window, history=history)


# ---------------------------------------------------------------------------
# support ideals of modules
# ---------------------------------------------------------------------------

MUTATIONS = ("support-empty",)
_active_mutation: list[str] = []


@contextmanager
def mutation(name: str):
    """Deliberately break :func:`support_ideal` so auditors can be shown to catch it.

    ``"support-empty"`` reports every module as having empty support.
    """
    if name not in MUTATIONS:
        raise ValueError(f"unknown mutation {name!r}; known: {', '.join(MUTATIONS)}")
    _active_mutation.append(name)
    try:
        yield
    finally:
        _active_mutation.pop()


def support_ideal(M: ModulePresentation, window: int | None = None, strict: bool = False,
                  seed: int | None = None) -> TIdeal:
    """``ann_T Ext(M, k)``, stabilized over the window."""
    from .operators import eisenbud_action

    if "support-empty" in _active_mutation:
        return unit_ideal(M.ring.T)

    ring = M.ring
    window = ring.default_window if window is None else window
    Mm = minimalize(M)
    key = ("support", window, seed)
    hit = Mm._cache.get(key)
    if hit is None:
        act = eisenbud_action(Mm, window, seed)
        V = TModuleWindow(ring.T, act.betti, act.chi)
        hit = stabilized_annihilator(V, window, ring.c)
        Mm._cache[key] = hit
    if strict and hit.provisional:
        raise NotStabilized(f"support of {M} not stable at window {window}")
    return hit


def pair_support_ideal(M: ModulePresentation, N: ModulePresentation,
                       window: int | None = None, strict: bool = False) -> TIdeal:
    """``ann_T (Ext(M, N) ⊗ k)``, stabilized over the window."""
    from .resolution import ext_pair

    ring = M.ring
    window = ring.default_window if window is None else window
    Mm, Nm = minimalize(M), minimalize(N)
    key = ("pair-support", id(Nm), window)
    hit = Mm._cache.get(key)
    if hit is None or hit[0] is not Nm:
        E = ext_pair(Mm, Nm, window)
        V = TModuleWindow(ring.T, E.dims_mod_m, E.chi)
        hit = (Nm, stabilized_annihilator(V, window, ring.c))
        Mm._cache[key] = hit
    J = hit[1]
    if strict and J.provisional:
        raise NotStabilized("pair support not stable in the window")
    return J


# ---------------------------------------------------------------------------
# top-dimensional part
# ---------------------------------------------------------------------------

def _split(G: GroebnerBasis, depth: int = 0) -> tuple[list[GroebnerBasis], bool]:
    """Closed pieces covering ``V(G)`` found by factoring generators; flag is factor exactness."""
    if G.is_unit() or krull_dimension(G) <= 0:
        return [], True
    exact = True
    for f in G.polys:
        fac = factor_split(f)
        exact = exact and fac.exact
        distinct = [g for g, _ in fac.factors]
        if len(distinct) == 1 and fac.factors[0][1] == 1:
            continue
        out: list[GroebnerBasis] = []
        progressed = False
        for g in distinct:
            if G.contains(g):
                continue
            progressed = True
            sub, ex = _split(groebner(G.polys + [g]), depth + 1)
            exact = exact and ex
            out.extend(sub)
        if progressed:
            return out, exact
    return [G], exact


def _contained(A: GroebnerBasis, B: GroebnerBasis) -> bool:
    """``V(A) ⊆ V(B)``."""
    return _proj_contained(TIdeal(A), B.polys)


def components(J: TIdeal) -> tuple[list[GroebnerBasis], bool]:
    """Candidate irreducible components of ``V(J)`` and whether they are certified."""
    pieces, exact = _split(J.gb)
    keep: list[GroebnerBasis] = []
    for i, A in enumerate(pieces):
        dominated = False
        for j, B in enumerate(pieces):
            if i == j:
                continue
            if _contained(A, B) and (not _contained(B, A) or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(A)
    c = J.ring.n
    certified = exact and (c <= 2 or all(g.degree() <= 1 for A in keep for g in A.polys))
    return keep, certified


def topv(J: TIdeal) -> TIdeal:
    """Ideal of the union of the top-dimensional components of ``V(J)``."""
    comps, certified = components(J)
    if not comps:
        return TIdeal(groebner([J.ring.one()]), provisional=J.provisional, exact=certified)
    top = max(krull_dimension(A) for A in comps)
    out = None
    for A in comps:
        if krull_dimension(A) == top:
            out = A if out is None else ideal_intersection(out, A)
    return TIdeal(out, provisional=J.provisional, exact=certified)


# ---------------------------------------------------------------------------
# quotient supports
# ---------------------------------------------------------------------------

@dataclass
class QuotientSupport:
    """The locally closed set ``V(J) \\ X``, kept as the pair ``(J, I_X)``."""

    J: TIdeal
    X: AlgebraicSet

    def is_empty(self) -> bool:
        return contains(self.X, self.J)


def quotient_support_X(M: ModulePresentation, X: AlgebraicSet, window: int | None = None) -> QuotientSupport:
    return QuotientSupport(support_ideal(M, window), X)


def quotient_support_i(M: ModulePresentation, i: int, window: int | None = None) -> TIdeal:
    """``topv(V*(M))`` when the complexity exceeds ``i``, else the unit ideal."""
    from .resolution import complexity

    J = support_ideal(M, window)
    if complexity(M, window).cx > i:
        return topv(J)
    return TIdeal(groebner([J.ring.one()]), provisional=J.provisional)


def empty_intersection_mod_X(M: ModulePresentation, N: ModulePresentation, X: AlgebraicSet,
                             window: int | None = None) -> bool:
    J = variety_intersection(support_ideal(M, window), support_ideal(N, window))
    return contains(X, J)


# ---------------------------------------------------------------------------
# indicator modules
# ---------------------------------------------------------------------------

def indicator_module(ring: CIRing, a: Sequence[int], window: int | None = None) -> ModulePresentation:
    """An MCM module whose support is the rational point ``a``.

    Starts from ``Ω^d k`` and cones off, one at a time, the chain maps of
    linear forms ``a_k t_j - a_j t_k`` vanishing at ``a``.
    """
    from .operators import chain_map_of
    from .resolution import cone_of_map, mcm_approximation

    T = ring.T
    window = ring.default_window if window is None else window
    a = [int(x) % ring.p for x in a]
    target = point_ideal(T, a)
    cur = mcm_approximation(residue_field(ring))
    if ring.c == 1:
        return cur
    k0 = next(i for i, x in enumerate(a) if x)
    t = T.gens()
    J = support_ideal(cur, window)
    for j in range(ring.c):
        if j == k0:
            continue
        ell = t[j] * a[k0] - t[k0] * a[j]
        cur = cone_of_map(chain_map_of(ell, cur, window))
        nxt = support_ideal(cur, window)
        if nxt.cx != J.cx - 1:
            raise ConstructionDegenerate(
                f"cone along {ell} left complexity {nxt.cx}, expected {J.cx - 1}")
        J = nxt
    if not same_variety(J, target):
        raise ConstructionDegenerate(f"support {J} is not the point {a}")
    cur.label = "indicator(" + ":".join(map(str, a)) + ")"
    return cur
