"""Cohomology operators of a resolution over a complete intersection.

A resolution over ``A`` is lifted entry-wise to ``Q``; the square of the
lifted differential then lies in ``(u)`` and its coefficients along ``u``
give degree-two chain maps ``t_j``.  Their reductions modulo the maximal
ideal act on ``Ext(M, k)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .cimodule import GradedMatrix, HomElement, ModulePresentation, minimalize
from .errors import DecompositionFailed, WindowTooShort
from .exactalg import Polynomial
from .resolution import Resolution, resolve, syzygy

Exp = tuple[int, ...]


@dataclass
class LiftedResolution:
    """Matrices over ``Q`` reducing to the differentials; ``mats[i-1]`` lifts ``d_i``."""

    res: Resolution
    mats: list[GradedMatrix]

    def d(self, i: int) -> GradedMatrix:
        return self.mats[i - 1]


def lift(res: Resolution) -> LiftedResolution:
    """Normal-form representatives: the stored entries themselves, read over ``Q``."""
    return LiftedResolution(res, list(res.diffs))


def perturbed_lift(res: Resolution, seed: int = 0) -> LiftedResolution:
    """Another lift, differing from :func:`lift` by homogeneous multiples of each ``u_j``."""
    ring = res.module.ring
    rng = random.Random(seed)
    mats = []
    for D in res.diffs:
        terms = {w: M.copy() for w, M in D.terms.items()}
        nr, nc = D.shape
        for j, uj in enumerate(ring.u):
            for r in range(nr):
                for s in range(nc):
                    deg = D.cols[s] - D.rows[r] - ring.deltas[j]
                    if deg < 0:
                        continue
                    mons = ring.Q.monomials(deg)
                    mu = mons[rng.randrange(len(mons))]
                    coef = rng.randrange(1, ring.p)
                    for m, c in uj.terms.items():
                        w = tuple(a + b for a, b in zip(m, mu))
                        M = terms.setdefault(w, la.zeros(nr, nc))
                        M[r, s] = (M[r, s] + c * coef) % ring.p
        mats.append(GradedMatrix(ring, D.rows, D.cols, terms))
    return LiftedResolution(res, mats)


def _times_poly(G: GradedMatrix, f: Polynomial) -> dict[Exp, np.ndarray]:
    out: dict[Exp, np.ndarray] = {}
    p = G.ring.p
    for w, M in G.terms.items():
        for m, c in f.terms.items():
            k = tuple(a + b for a, b in zip(w, m))
            out[k] = (out.get(k, 0) + c * M) % p
    return out


def square_decompose(src: Resolution | LiftedResolution, upto: int) -> dict[int, list[GradedMatrix]]:
    """``t̃_j^{(i)}: F_i -> F_{i-2}`` with ``∂̃_{i-1} ∂̃_i = Σ u_j t̃_j^{(i)}`` over ``Q``, for ``2 <= i <= upto``.

    ``t̃_j^{(i)}`` is stored with source twists shifted down by ``deg u_j`` so
    that it is homogeneous.
    """
    L = src if isinstance(src, LiftedResolution) else lift(src)
    res = L.res
    ring = res.module.ring
    cache = res.__dict__.setdefault("_square", {}) if L.mats is res.diffs or _is_plain(L) else {}
    out: dict[int, list[GradedMatrix]] = {}
    p = ring.p
    for i in range(2, upto + 1):
        if i in cache:
            out[i] = cache[i]
            continue
        if i > len(L.mats):
            raise WindowTooShort(f"resolution has length {len(L.mats)}, need {i}")
        rows, cols = res.twists(i - 2), res.twists(i)
        prod = L.d(i - 1).matmul(L.d(i), reduce=False)
        tj: list[dict[Exp, np.ndarray]] = [{} for _ in range(ring.c)]
        residual: dict[Exp, np.ndarray] = {}
        for w, M in prod.terms.items():
            nf, q = ring.u_division(w)
            for s, c in nf.items():
                residual[s] = (residual.get(s, 0) + c * M) % p
            for j, qj in enumerate(q):
                for m, c in qj.terms.items():
                    tj[j][m] = (tj[j].get(m, 0) + c * M) % p
        if any(np.any(R) for R in residual.values()):
            raise DecompositionFailed(f"square of the lifted differential at {i} is not in (u)")
        mats = [GradedMatrix(ring, rows, [h - ring.deltas[j] for h in cols], tj[j])
                for j in range(ring.c)]
        out[i] = mats
        cache[i] = mats
    return out


def _is_plain(L: LiftedResolution) -> bool:
    return all(a is b for a, b in zip(L.mats, L.res.diffs))


def decomposition_holds(L: LiftedResolution, tt: dict[int, list[GradedMatrix]], i: int) -> bool:
    """Exact check of ``∂̃_{i-1} ∂̃_i = Σ u_j t̃_j^{(i)}`` over ``Q``."""
    ring = L.res.module.ring
    prod = L.d(i - 1).matmul(L.d(i), reduce=False)
    total: dict[Exp, np.ndarray] = {}
    for j, uj in enumerate(ring.u):
        for w, M in _times_poly(tt[i][j], uj).items():
            total[w] = (total.get(w, 0) + M) % ring.p
    keys = set(total) | set(prod.terms)
    shape = prod.shape
    for w in keys:
        a = total.get(w, la.zeros(*shape))
        b = prod.terms.get(w, la.zeros(*shape))
        if not np.array_equal(np.asarray(a) % ring.p, b % ring.p):
            return False
    return True


@dataclass
class EisenbudAction:
    """``chi[j][i]``: the matrix of ``t_j`` from ``Ext^i(M,k)`` to ``Ext^{i+2}(M,k)``."""

    c: int
    betti: list[int]
    chi: list[list[np.ndarray]]

    def matrix(self, j: int, i: int) -> np.ndarray:
        return self.chi[j][i]


def action_on_ext(tt: dict[int, list[GradedMatrix]], betti: list[int]) -> EisenbudAction:
    c = len(next(iter(tt.values()))) if tt else 0
    n = len(betti) - 1
    chi = [[tt[i + 2][j].scalar_part().T.copy() for i in range(n - 1)] for j in range(c)]
    return EisenbudAction(c, list(betti), chi)


def eisenbud_action(M: ModulePresentation, window: int, seed: int | None = None) -> EisenbudAction:
    """The action on ``Ext^i(M, k)`` for ``0 <= i <= window`` (``i+2 <= window`` for the maps)."""
    Mm = minimalize(M)
    key = ("action", window, seed)
    hit = Mm._cache.get(key)
    if hit is not None:
        return hit
    res = resolve(Mm, max(window, 1))
    L = lift(res) if seed is None else perturbed_lift(res, seed)
    c = Mm.ring.c
    tt = square_decompose(L, window) if window >= 2 else {}
    b = res.betti()[: window + 1]
    act = action_on_ext(tt, b) if tt else EisenbudAction(c, b, [[] for _ in range(c)])
    Mm._cache[key] = act
    return act


# ---------------------------------------------------------------------------
# chain maps of operator polynomials
# ---------------------------------------------------------------------------

def _check_operator(eta: Polynomial, ring) -> tuple[int, int]:
    """Return (t-degree, internal degree) of a homogeneous operator polynomial."""
    if eta.is_zero():
        raise ValueError("zero operator polynomial")
    if not eta.is_homogeneous():
        raise ValueError(f"{eta} is not homogeneous")
    internal = {sum(a * d for a, d in zip(e, ring.deltas)) for e in eta.terms}
    if len(internal) != 1:
        raise ValueError(f"{eta} mixes operators of different internal degrees")
    return eta.degree(), -internal.pop()


def operator_chain(eta: Polynomial, res: Resolution, start: int) -> GradedMatrix:
    """The map ``F_{start+2e} -> F_start`` of ``η(t̃)``, reduced over ``A``."""
    ring = res.module.ring
    e, internal = _check_operator(eta, ring)
    top = start + 2 * e
    if res.length < top + 1:
        resolve(res.module, top + 1)
    rows = res.twists(start)
    cols = [h + internal for h in res.twists(top)]
    if e == 0:
        c = eta.terms[ring.T.zero_exp]
        return GradedMatrix.identity(ring, rows).scale(c)
    tt = square_decompose(res, top)
    total = None
    for alpha, coef in sorted(eta.terms.items(), reverse=True):
        seq = [j for j, k in enumerate(alpha) for _ in range(k)]
        # F_{start+2e} -> ... -> F_start, applying t_{seq[0]} last
        cur = None
        level = start
        for j in seq:
            step = tt[level + 2][j]
            cur = step if cur is None else cur.matmul(step)
            level += 2
        cur = cur.reduced().scale(coef)
        total = cur if total is None else total + cur
    return GradedMatrix(ring, rows, cols, total.terms)


def chain_map_of(eta: Polynomial, M: ModulePresentation, window: int | None = None) -> HomElement:
    """The map ``Ω^{2e} M -> M`` induced by the chain map ``η(t̃_1..t̃_c)``."""
    ring = M.ring
    window = ring.default_window if window is None else window
    e, _ = _check_operator(eta, ring)
    if 2 * e + 1 > window:
        raise WindowTooShort(f"operator of t-degree {e} needs resolution length {2 * e + 1} > {window}")
    return syzygy_map(eta, M, 0)


def syzygy_map(eta: Polynomial, M: ModulePresentation, start: int) -> HomElement:
    """``Ω^{start+2e} M -> Ω^{start} M`` induced by ``η``."""
    ring = M.ring
    e, internal = _check_operator(eta, ring)
    Mm = minimalize(M)
    res = resolve(Mm, start + 2 * e + 1)
    G = operator_chain(eta, res, start)
    src = syzygy(Mm, start + 2 * e)
    tgt = syzygy(Mm, start)
    return HomElement(src, tgt, G, internal)
