"""Minimal graded free resolutions, (co)syzygies, cones, complexity and Ext of a pair."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .cimodule import (
    GradedMatrix,
    HomElement,
    ModulePresentation,
    dual,
    dual_data,
    kernel_generators,
    minimalize,
    zero_module,
)
from .errors import BudgetExceeded, MethodMismatch, NotMCM

BUDGET_ENV = "CISUPPORT_BUDGET_TERMS"
DEFAULT_BUDGET = 5_000_000


def term_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


class Resolution:
    """``... -> F_2 -d_2-> F_1 -d_1-> F_0`` over ``A``; ``diffs[i-1]`` is ``d_i``."""

    def __init__(self, module: ModulePresentation):
        self.module = module
        self.diffs: list[GradedMatrix] = []
        self.minimal = True
        self._terms = 0

    @property
    def length(self) -> int:
        return len(self.diffs)

    def twists(self, i: int) -> tuple[int, ...]:
        if i == 0:
            return self.module.gens
        if i < 0:
            return ()
        return self.diffs[i - 1].cols

    def d(self, i: int) -> GradedMatrix:
        return self.diffs[i - 1]

    def betti(self) -> list[int]:
        return [len(self.twists(i)) for i in range(self.length + 1)]

    def extend(self, steps: int, budget: int | None = None) -> Resolution:
        budget = term_budget() if budget is None else budget
        ring = self.module.ring
        if not self.diffs:
            self.diffs.append(self.module.pres)
            self._terms += self.module.pres.nnz()
        while self.length < steps:
            prev = self.diffs[-1]
            nxt = kernel_generators(prev) if prev.cols else GradedMatrix.zero(ring, [], [])
            if nxt.cols and prev.rows:
                comp = prev @ nxt
                assert comp.is_zero(), "d_i d_{i+1} != 0"
            assert not nxt.scalar_part().any(), "non-minimal differential"
            self._terms += nxt.nnz()
            if self._terms > budget:
                raise BudgetExceeded(f"resolution exceeded {budget} stored terms at step {self.length + 1}")
            self.diffs.append(nxt)
        return self


def resolve(M: ModulePresentation, steps: int, budget: int | None = None) -> Resolution:
    """Minimal resolution of ``M`` with at least ``steps`` differentials (cached on ``M``)."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    Mm = minimalize(M)
    res = Mm._cache.get("resolution")
    if res is None:
        res = Mm._cache["resolution"] = Resolution(Mm)
    return res.extend(steps, budget)


def betti(M: ModulePresentation, n: int) -> list[int]:
    """``[β_0, ..., β_n]``."""
    return resolve(M, max(n, 1)).betti()[: n + 1]


def poincare_truncated(M: ModulePresentation, n: int) -> list[int]:
    """Coefficients of the Poincaré series up to ``z^n``."""
    return betti(M, n)


def syzygy(M: ModulePresentation, n: int) -> ModulePresentation:
    """``Ω^n M``, presented by ``d_{n+1}``."""
    Mm = minimalize(M)
    if n == 0:
        return Mm
    hit = Mm._cache.get(("syzygy", n))
    if hit is not None:
        return hit
    res = resolve(Mm, n + 1)
    ring = M.ring
    if not res.twists(n):
        out = zero_module(ring)
    else:
        mcm = True if ring.is_artinian or n >= ring.d else None
        out = ModulePresentation(ring, res.d(n + 1), minimal=True, is_mcm=mcm)
    Mm._cache[("syzygy", n)] = out
    return out


def cosyzygy(M: ModulePresentation, n: int) -> ModulePresentation:
    """``Ω^{-n} M`` realized as ``dual(syzygy(dual(M), n))``."""
    if not M.is_mcm:
        raise NotMCM("cosyzygy needs a maximal Cohen-Macaulay module")
    if n == 0:
        return minimalize(M)
    out = dual(syzygy(dual(M), n))
    out.is_mcm = True
    return out


def mcm_approximation(M: ModulePresentation) -> ModulePresentation:
    """``Ω^d M``, which is maximal Cohen-Macaulay."""
    out = syzygy(M, M.ring.d)
    out.is_mcm = True
    return out


def cone_of_map(f: HomElement) -> ModulePresentation:
    """Pushout of ``f: M -> N`` along ``M -> G*``.

    The embedding is the dual of a free cover of ``M*``; the result fits in
    ``M(-e) -> N -> C -> Ω^{-1}M(-e)`` where ``e`` is the degree of ``f``.
    """
    M, N, e = f.source, f.target, f.degree
    if not M.is_mcm:
        raise NotMCM("cone_of_map needs a maximal Cohen-Macaulay source")
    ring = M.ring
    Mm = minimalize(M)
    if Mm.gens != M.gens:
        raise ValueError("source of the map must be minimally presented")
    K, _ = dual_data(Mm)
    emb = K.transpose().shift(e)  # G*(-e) <- F0(M)(-e)
    top = GradedMatrix.hstack([N.pres, f.lift])
    bot = GradedMatrix.hstack([GradedMatrix.zero(ring, emb.rows, N.pres.cols), -emb])
    P = GradedMatrix.vstack([top, bot])
    P.check_homogeneous()
    return minimalize(ModulePresentation(ring, P, is_mcm=True))


# ---------------------------------------------------------------------------
# complexity
# ---------------------------------------------------------------------------

@dataclass
class ComplexityReport:
    cx: int
    method: str
    window: int
    support_cx: int
    growth_cx: int
    flags: list[str] = field(default_factory=list)


def growth_degree(seq: list[int], start: int) -> int:
    """Complexity read off ``seq[start:]``: 1 + polynomial degree per parity, 0 if eventually zero."""
    best = 0
    for par in (0, 1):
        sub = [seq[i] for i in range(start, len(seq)) if i % 2 == par]
        if not any(sub):
            continue
        deg = 0
        diff = sub
        while len(diff) > 1 and any(x != diff[0] for x in diff):
            diff = [b - a for a, b in zip(diff, diff[1:])]
            deg += 1
        best = max(best, deg + 1)
    return best


def complexity(M: ModulePresentation, window: int | None = None) -> ComplexityReport:
    """Complexity from the support ideal, cross-checked against betti growth."""
    from .support import support_ideal

    ring = M.ring
    N = window if window is not None else ring.default_window
    J = support_ideal(M, window=N)
    support_cx = J.cx
    b = betti(M, N)
    growth_cx = growth_degree(b, N // 2)
    if support_cx != growth_cx:
        raise MethodMismatch(
            f"support dimension gives {support_cx}, betti growth gives {growth_cx} on window {N}")
    flags = ["provisional"] if J.provisional else []
    return ComplexityReport(support_cx, "via-support-dimension", N, support_cx, growth_cx, flags)


# ---------------------------------------------------------------------------
# Ext of a pair
# ---------------------------------------------------------------------------

def _cochain(res: Resolution, N: ModulePresentation, i: int, e: int) -> np.ndarray:
    """Matrix of ``φ -> φ∘d_i`` from ``Hom(F_{i-1}, N)_e`` to ``Hom(F_i, N)_e``."""
    return _compose_matrix(res.d(i), N, e)


def _compose_matrix(D: GradedMatrix, N: ModulePresentation, e: int) -> np.ndarray:
    """``φ -> φ∘D`` from ``Hom(⊕A(-g_r), N)_e`` to ``Hom(⊕A(-h_s), N)_e``."""
    pc = N.pieces()
    p = N.ring.p
    src = [pc.dim(g + e) for g in D.rows]
    tgt = [pc.dim(h + e) for h in D.cols]
    so = np.concatenate([[0], np.cumsum(src)]).astype(int)
    to = np.concatenate([[0], np.cumsum(tgt)]).astype(int)
    C = la.zeros(int(to[-1]), int(so[-1]))
    for w, W in D.terms.items():
        for r, s in np.argwhere(W):
            if src[r] and tgt[s]:
                C[to[s]:to[s + 1], so[r]:so[r + 1]] += int(W[r, s]) * pc.act(w, D.rows[r] + e)
    return C % p


@dataclass
class ExtPiece:
    Z: np.ndarray       # cocycle basis rows
    B: tuple            # rref of coboundaries
    reps: np.ndarray    # representatives of a basis of Ext ⊗ k in this degree
    sub: tuple          # rref of B + m Z
    solver: object = field(default=None, repr=False, compare=False)


@dataclass
class ExtPair:
    """``Ext^i(M, N)`` degree by degree, with its reduction mod ``m`` and the operator action."""

    M: ModulePresentation
    N: ModulePresentation
    imax: int
    dims: list[int]                 # dim_k Ext^i(M, N)
    dims_mod_m: list[int]           # dim_k Ext^i(M, N) ⊗ k
    degrees: list[list[int]]        # internal degrees e ordered as in the flattened pieces
    chi: list[list[np.ndarray]]     # chi[j][i]: (Ext^i ⊗ k) -> (Ext^{i+2} ⊗ k)


def ext_degree_range(res: Resolution, N: ModulePresentation, i: int) -> range:
    tw = res.twists(i)
    if not tw or not N.gens:
        return range(0)
    ring = N.ring
    if ring.is_artinian:
        return range(min(N.gens) - max(tw), max(N.gens) + ring.top - min(tw) + 1)
    pad = 2 * max(ring.deltas)
    return range(min(N.gens) - max(tw) - pad, max(N.gens) - min(tw) + pad + 1)


def _ext_piece(res: Resolution, N: ModulePresentation, i: int, e: int, prevZ: np.ndarray | None) -> ExtPiece:
    p = N.ring.p
    pc = N.pieces()
    width = sum(pc.dim(g + e) for g in res.twists(i))
    if width == 0:
        z = la.zeros(0, 0)
        return ExtPiece(z, (z, []), z, (z, []))
    up = _cochain(res, N, i + 1, e) if res.twists(i + 1) else la.zeros(0, width)
    Z = la.nullspace(up, p)
    if i >= 1 and res.twists(i - 1):
        down = _cochain(res, N, i, e)
        B = la.row_basis(down.T.copy(), p)
    else:
        B = (la.zeros(0, width), [])
    parts = [B[0]]
    if prevZ is not None and prevZ.shape[0]:
        tw = res.twists(i)
        for v in range(N.ring.n):
            w = tuple(1 if a == v else 0 for a in range(N.ring.n))
            blocks = [pc.act(w, g + e - 1) for g in tw]
            X = _block_diag(blocks)
            parts.append(la.matmul(prevZ, X.T, p))
    sub = la.row_basis(np.vstack(parts), p)
    idx = sorted(la.independent_mod(Z, sub[0], sub[1], p))
    return ExtPiece(Z, B, Z[idx], sub)


def _block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = la.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def _express(piece: ExtPiece, vecs: np.ndarray, p: int) -> np.ndarray:
    """Coordinates (columns) of cocycles ``vecs`` (rows) in ``piece.reps`` modulo ``piece.sub``."""
    k = piece.reps.shape[0]
    if k == 0 or vecs.shape[0] == 0:
        return la.zeros(k, vecs.shape[0])
    if piece.solver is None:
        basis = np.vstack([piece.reps, piece.sub[0]]) if piece.sub[0].shape[0] else piece.reps
        piece.solver = la.SpanSolver(basis, p)
    X = piece.solver.solve(vecs)
    return X[:, :k].T.copy()


def ext_pair(M: ModulePresentation, N: ModulePresentation, imax: int) -> ExtPair:
    """``Ext^i_A(M, N)`` for ``0 <= i <= imax`` with the action of ``t_j`` on ``Ext ⊗ k``."""
    from .operators import square_decompose

    key = ("ext", id(N), imax)
    hit = M._cache.get(key)
    if hit is not None and hit.N is N:
        return hit
    ring = M.ring
    p = ring.p
    res = resolve(M, imax + 2)
    tt = square_decompose(res, imax + 2)
    pieces: list[dict[int, ExtPiece]] = []
    dims, dims_k, degrees = [], [], []
    for i in range(imax + 1):
        row: dict[int, ExtPiece] = {}
        prev = None
        for e in ext_degree_range(res, N, i):
            pc = _ext_piece(res, N, i, e, prev)
            row[e] = pc
            prev = pc.Z
        pieces.append(row)
        dims.append(sum(pc.Z.shape[0] - len(pc.B[1]) for pc in row.values()))
        dims_k.append(sum(pc.reps.shape[0] for pc in row.values()))
        degrees.append([e for e, pc in row.items() for _ in range(pc.reps.shape[0])])
    chi: list[list[np.ndarray]] = []
    for j in range(ring.c):
        dj = ring.deltas[j]
        mats = []
        for i in range(imax - 1):
            out = la.zeros(dims_k[i + 2], dims_k[i])
            T = tt[i + 2][j]  # F_{i+2}(-δ_j) -> F_i
            col = 0
            for e, src in pieces[i].items():
                k = src.reps.shape[0]
                if not k:
                    continue
                tgt_e = e - dj
                row_off = 0
                for e2, tgt in pieces[i + 2].items():
                    if e2 == tgt_e:
                        break
                    row_off += tgt.reps.shape[0]
                tgt = pieces[i + 2].get(tgt_e)
                if tgt is not None and tgt.reps.shape[0]:
                    C = _compose_matrix(T, N, e)
                    img = la.matmul(src.reps, C.T, p)
                    out[row_off:row_off + tgt.reps.shape[0], col:col + k] = _express(tgt, img, p)
                col += k
            mats.append(out)
        chi.append(mats)
    out = ExtPair(M, N, imax, dims, dims_k, degrees, chi)
    M._cache[key] = out
    return out
