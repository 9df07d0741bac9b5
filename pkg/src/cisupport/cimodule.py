"""Graded complete intersections, homogeneous matrices and module presentations.

A ring ``A = Q/(u)`` is handled through its graded pieces: the standard
monomials of a Gröbner basis of ``(u)`` in each degree form a basis of ``A_e``
and multiplication by a monomial is a scalar matrix between pieces.  Matrices
over ``A`` are stored as ``{monomial exponent: scalar matrix}`` so products
reduce to numpy products plus a normal-form lookup per monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .errors import InhomogeneousEntry, NotInSquareOfMaxIdeal, NotRegularSequence
from .exactalg import (
    PolyRing,
    Polynomial,
    division_with_quotients,
    groebner,
    krull_dimension,
    normal_form,
    syzygies,
)
from .exactalg.polynomial import divides

Exp = tuple[int, ...]


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------

class CIRing:
    """``A = Q/(u)`` with ``Q = F_p[x_1..x_n]`` standard graded."""

    def __init__(self, Q: PolyRing, u: Sequence[Polynomial], validate: bool = True):
        self.Q = Q
        self.p = Q.p
        self.n = Q.n
        self.u = [Polynomial(Q, f.terms) for f in u]
        self.c = len(self.u)
        self.deltas = tuple(f.degree() for f in self.u)
        self.ugb = groebner(self.u or [Q.zero()], track=True)
        self._leads = self.ugb.leads()
        self._basis: dict[int, list[Exp]] = {}
        self._index: dict[int, dict[Exp, int]] = {}
        self._nf: dict[Exp, dict[Exp, int]] = {}
        self._mult: dict[tuple[Exp, int], np.ndarray] = {}
        self._udiv: dict[Exp, tuple[dict[Exp, int], list[Polynomial]]] = {}
        self.d = self.n - self.c
        if validate:
            self.c, self.d = validate_ci(self)
        self.T = PolyRing(self.c, self.p, [f"t{j + 1}" for j in range(self.c)])
        self.top = self._socle_degree() if self.d == 0 else None

    @classmethod
    def from_strings(cls, names: Sequence[str], u: Sequence[str], p: int = 32003) -> CIRing:
        from .cli.lang import parse_polynomial

        Q = PolyRing(len(names), p, names)
        return cls(Q, [parse_polynomial(s, Q) for s in u])

    def __repr__(self) -> str:
        return f"CIRing({self.Q.names}, u={self.u}, p={self.p})"

    @property
    def is_artinian(self) -> bool:
        return self.d == 0

    @property
    def default_window(self) -> int:
        return 2 * self.c + 10

    # graded pieces ------------------------------------------------------
    def basis(self, e: int) -> list[Exp]:
        """Standard monomials of degree ``e``: a basis of ``A_e``."""
        if e < 0:
            return []
        b = self._basis.get(e)
        if b is None:
            b = [m for m in self.Q.monomials(e) if not any(divides(l, m) for l in self._leads)]
            self._basis[e] = b
            self._index[e] = {m: i for i, m in enumerate(b)}
        return b

    def index(self, e: int) -> dict[Exp, int]:
        self.basis(e)
        return self._index.get(e, {})

    def dim(self, e: int) -> int:
        return len(self.basis(e))

    def _socle_degree(self) -> int:
        e = 0
        while self.dim(e + 1):
            e += 1
        return e

    def nf(self, e: Exp) -> dict[Exp, int]:
        """Normal form of a monomial modulo ``(u)``."""
        r = self._nf.get(e)
        if r is None:
            r = dict(normal_form(self.Q.monomial(e), self.ugb).terms)
            self._nf[e] = r
        return r

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(Polynomial(self.Q, f.terms, True), self.ugb)

    def u_division(self, e: Exp) -> tuple[dict[Exp, int], list[Polynomial]]:
        """``x^e = NF + sum q_j u_j``; returns ``(NF terms, [q_j])``."""
        r = self._udiv.get(e)
        if r is None:
            rem, q = division_with_quotients(self.Q.monomial(e), self.ugb)
            r = (dict(rem.terms), q)
            self._udiv[e] = r
        return r

    def mult(self, w: Exp, e: int) -> np.ndarray:
        """Matrix of multiplication by ``x^w`` from ``A_e`` to ``A_{e+|w|}``."""
        key = (w, e)
        M = self._mult.get(key)
        if M is None:
            src = self.basis(e)
            tdeg = e + sum(w)
            tidx = self.index(tdeg)
            M = la.zeros(len(self.basis(tdeg)), len(src))
            for j, m in enumerate(src):
                prod = tuple(a + b for a, b in zip(m, w))
                for s, c in self.nf(prod).items():
                    M[tidx[s], j] = (M[tidx[s], j] + c) % self.p
            self._mult[key] = M
        return M


def validate_ci(ring: CIRing) -> tuple[int, int]:
    """Certify that ``u`` is a homogeneous regular sequence in the square of the maximal ideal."""
    if ring.c < 1:
        raise NotRegularSequence("at least one defining equation is required")
    for f in ring.u:
        if f.is_zero():
            raise NotRegularSequence("zero is not a regular element")
        if not f.is_homogeneous():
            raise InhomogeneousEntry(f"{f} is not homogeneous")
        if f.degree() < 2:
            raise NotInSquareOfMaxIdeal(f"{f} has degree {f.degree()} < 2")
    dim = krull_dimension(ring.ugb)
    if dim != ring.n - ring.c:
        raise NotRegularSequence(f"dim Q/(u) = {dim}, expected {ring.n - ring.c}")
    return ring.c, ring.n - ring.c


# ---------------------------------------------------------------------------
# free modules and matrices
# ---------------------------------------------------------------------------

def layout(ring: CIRing, twists: Sequence[int], e: int) -> tuple[list[int], list[int], int]:
    """Offsets and block sizes of ``(⊕ A(-g_s))_e = ⊕ A_{e-g_s}``."""
    dims = [ring.dim(e - g) for g in twists]
    offs, tot = [], 0
    for d in dims:
        offs.append(tot)
        tot += d
    return offs, dims, tot


def free_mult(ring: CIRing, twists: Sequence[int], w: Exp, e: int) -> np.ndarray:
    """Multiplication by ``x^w`` on a free module, degree ``e`` to ``e+|w|``."""
    so, sd, stot = layout(ring, twists, e)
    to, td, ttot = layout(ring, twists, e + sum(w))
    out = la.zeros(ttot, stot)
    for s, g in enumerate(twists):
        if sd[s] and td[s]:
            out[to[s]:to[s] + td[s], so[s]:so[s] + sd[s]] = ring.mult(w, e - g)
    return out


class GradedMatrix:
    """Matrix over ``A`` between graded free modules.

    ``rows``/``cols`` are the degree twists of target/source basis elements;
    entry ``(r, s)`` has degree ``cols[s] - rows[r]``.  ``terms`` maps a
    monomial exponent to the scalar matrix of its coefficients.
    """

    __slots__ = ("ring", "rows", "cols", "terms", "_lin")

    def __init__(self, ring: CIRing, rows: Sequence[int], cols: Sequence[int],
                 terms: dict[Exp, np.ndarray] | None = None, check: bool = True):
        self.ring = ring
        self.rows = tuple(int(x) for x in rows)
        self.cols = tuple(int(x) for x in cols)
        shape = (len(self.rows), len(self.cols))
        clean = {}
        for w, M in (terms or {}).items():
            M = np.asarray(M, dtype=np.int64).reshape(shape) % ring.p
            if M.any():
                clean[tuple(w)] = M
        self.terms = clean
        self._lin: dict[int, np.ndarray] = {}
        if check:
            self.check_homogeneous()

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, ring: CIRing, rows: Sequence[int], cols: Sequence[int]) -> GradedMatrix:
        return cls(ring, rows, cols, {})

    @classmethod
    def identity(cls, ring: CIRing, twists: Sequence[int]) -> GradedMatrix:
        n = len(twists)
        return cls(ring, twists, twists, {ring.Q.zero_exp: np.eye(n, dtype=np.int64)})

    @classmethod
    def from_polys(cls, ring: CIRing, entries: Sequence[Sequence[Polynomial]],
                   rows: Sequence[int] | None = None, cols: Sequence[int] | None = None,
                   reduce: bool = True) -> GradedMatrix:
        """Build from a list of rows of polynomials over ``Q``; entries are reduced mod ``u``."""
        nr = len(entries)
        nc = len(entries[0]) if nr else (len(cols) if cols is not None else 0)
        if rows is None:
            rows = [0] * nr
        rows = list(rows)
        ents = []
        for r in range(nr):
            row = []
            for s in range(nc):
                f = Polynomial(ring.Q, entries[r][s].terms, True)
                if not f.is_homogeneous():
                    raise InhomogeneousEntry(f"entry ({r},{s}) = {f} is not homogeneous")
                row.append(ring.reduce(f) if reduce else f)
            ents.append(row)
        if cols is None:
            cols = []
            for s in range(nc):
                deg = None
                for r in range(nr):
                    if not ents[r][s].is_zero():
                        deg = ents[r][s].degree() + rows[r]
                        break
                cols.append(deg if deg is not None else max(rows, default=0) + 1)
        terms: dict[Exp, np.ndarray] = {}
        for r in range(nr):
            for s in range(nc):
                for w, c in ents[r][s].terms.items():
                    M = terms.setdefault(w, la.zeros(nr, nc))
                    M[r, s] = c
        return cls(ring, rows, cols, terms)

    @classmethod
    def from_vectors(cls, ring: CIRing, rows: Sequence[int],
                     columns: Sequence[tuple[int, np.ndarray]]) -> GradedMatrix:
        """Columns given as ``(degree, coordinates in the free module's degree piece)``."""
        rows = list(rows)
        nc = len(columns)
        terms: dict[Exp, np.ndarray] = {}
        by_degree: dict[int, list[int]] = {}
        for s, (deg, _) in enumerate(columns):
            by_degree.setdefault(deg, []).append(s)
        for deg, idx in by_degree.items():
            offs, dims, _ = layout(ring, rows, deg)
            V = np.stack([columns[s][1] for s in idx])
            for r in range(len(rows)):
                if not dims[r]:
                    continue
                block = V[:, offs[r]:offs[r] + dims[r]]
                for i in np.flatnonzero(block.any(axis=0)):
                    w = ring.basis(deg - rows[r])[i]
                    M = terms.setdefault(w, la.zeros(len(rows), nc))
                    M[r, idx] = block[:, i]
        return cls(ring, rows, [deg for deg, _ in columns], terms)

    # queries ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def is_zero(self) -> bool:
        return not self.terms

    def check_homogeneous(self) -> None:
        if not self.terms:
            return
        D = np.subtract.outer(-np.array(self.rows, dtype=np.int64),
                              -np.array(self.cols, dtype=np.int64)).reshape(self.shape)
        for w, M in self.terms.items():
            bad = (M != 0) & (D != sum(w))
            if bad.any():
                r, s = map(int, np.argwhere(bad)[0])
                raise InhomogeneousEntry(
                    f"entry ({r},{s}) has a term of degree {sum(w)}, expected {int(D[r, s])}")

    def entry(self, r: int, s: int) -> Polynomial:
        return Polynomial(self.ring.Q, {w: int(M[r, s]) for w, M in self.terms.items() if M[r, s]}, True)

    def entries(self) -> list[list[Polynomial]]:
        return [[self.entry(r, s) for s in range(len(self.cols))] for r in range(len(self.rows))]

    def scalar_part(self) -> np.ndarray:
        M = self.terms.get(self.ring.Q.zero_exp)
        return M if M is not None else la.zeros(*self.shape)

    def nnz(self) -> int:
        return int(sum(np.count_nonzero(M) for M in self.terms.values()))

    def max_entry_degree(self) -> int:
        return max((sum(w) for w in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols) or self.terms.keys() != other.terms.keys():
            return False
        return all(np.array_equal(M, other.terms[w]) for w, M in self.terms.items())

    def __repr__(self) -> str:
        return f"GradedMatrix(rows={self.rows}, cols={self.cols}, {self.entries()})"

    # algebra ----------------------------------------------------------------
    def _same(self, terms, rows=None, cols=None, check=False) -> GradedMatrix:
        return GradedMatrix(self.ring, self.rows if rows is None else rows,
                            self.cols if cols is None else cols, terms, check=check)

    def __add__(self, other: GradedMatrix) -> GradedMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        t = dict(self.terms)
        for w, M in other.terms.items():
            t[w] = (t[w] + M) if w in t else M
        return self._same(t)

    def __neg__(self) -> GradedMatrix:
        return self._same({w: -M for w, M in self.terms.items()})

    def __sub__(self, other: GradedMatrix) -> GradedMatrix:
        return self + (-other)

    def scale(self, c: int) -> GradedMatrix:
        return self._same({w: M * (c % self.ring.p) for w, M in self.terms.items()})

    def matmul(self, other: GradedMatrix, reduce: bool = True) -> GradedMatrix:
        """Product ``self · other``; ``other.rows`` may differ from ``self.cols`` by a constant shift."""
        if len(self.cols) != len(other.rows):
            raise ValueError("inner dimensions differ")
        shifts = {a - b for a, b in zip(self.cols, other.rows)}
        if len(shifts) > 1:
            raise ValueError("twists of the inner modules do not match")
        shift = shifts.pop() if shifts else 0
        p = self.ring.p
        out: dict[Exp, np.ndarray] = {}
        for w1, M1 in self.terms.items():
            for w2, M2 in other.terms.items():
                P = la.matmul(M1, M2, p)
                if not P.any():
                    continue
                w = tuple(a + b for a, b in zip(w1, w2))
                parts = self.ring.nf(w).items() if reduce else ((w, 1),)
                for s, c in parts:
                    if s in out:
                        out[s] = (out[s] + c * P) % p
                    else:
                        out[s] = (c * P) % p
        return GradedMatrix(self.ring, self.rows, [g + shift for g in other.cols], out, check=False)

    __matmul__ = matmul

    def reduced(self) -> GradedMatrix:
        out: dict[Exp, np.ndarray] = {}
        for w, M in self.terms.items():
            for s, c in self.ring.nf(w).items():
                out[s] = (out.get(s, 0) + c * M) % self.ring.p
        return self._same(out)

    def transpose(self) -> GradedMatrix:
        """The dual map ``Hom(F, A) <- Hom(G, A)``; twists are negated."""
        return GradedMatrix(self.ring, [-g for g in self.cols], [-g for g in self.rows],
                            {w: M.T.copy() for w, M in self.terms.items()}, check=False)

    def take_cols(self, idx: Sequence[int]) -> GradedMatrix:
        idx = list(idx)
        return self._same({w: M[:, idx] for w, M in self.terms.items()},
                          cols=[self.cols[i] for i in idx])

    def take_rows(self, idx: Sequence[int]) -> GradedMatrix:
        idx = list(idx)
        return self._same({w: M[idx, :] for w, M in self.terms.items()},
                          rows=[self.rows[i] for i in idx])

    def shift(self, e: int) -> GradedMatrix:
        """Same entries with every twist moved by ``e``."""
        return self._same(self.terms, rows=[g + e for g in self.rows], cols=[g + e for g in self.cols])

    def with_cols(self, cols: Sequence[int]) -> GradedMatrix:
        return GradedMatrix(self.ring, self.rows, cols, self.terms)

    @staticmethod
    def hstack(mats: Sequence[GradedMatrix]) -> GradedMatrix:
        ring, rows = mats[0].ring, mats[0].rows
        cols: list[int] = []
        for m in mats:
            if m.rows != rows:
                raise ValueError("row twists differ")
            cols.extend(m.cols)
        keys = {w for m in mats for w in m.terms}
        terms = {}
        for w in keys:
            terms[w] = np.hstack([m.terms.get(w, la.zeros(*m.shape)) for m in mats])
        return GradedMatrix(ring, rows, cols, terms, check=False)

    @staticmethod
    def vstack(mats: Sequence[GradedMatrix]) -> GradedMatrix:
        ring, cols = mats[0].ring, mats[0].cols
        rows: list[int] = []
        for m in mats:
            if m.cols != cols:
                raise ValueError("column twists differ")
            rows.extend(m.rows)
        keys = {w for m in mats for w in m.terms}
        terms = {}
        for w in keys:
            terms[w] = np.vstack([m.terms.get(w, la.zeros(*m.shape)) for m in mats])
        return GradedMatrix(ring, rows, cols, terms, check=False)

    @staticmethod
    def block_diag(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
        top = GradedMatrix.hstack([a, GradedMatrix.zero(a.ring, a.rows, b.cols)])
        bot = GradedMatrix.hstack([GradedMatrix.zero(a.ring, b.rows, a.cols), b])
        return GradedMatrix.vstack([top, bot])

    # degree pieces ------------------------------------------------------------
    def linear_map(self, e: int) -> np.ndarray:
        """Scalar matrix of the map on degree-``e`` pieces (source ``cols`` to target ``rows``)."""
        L = self._lin.get(e)
        if L is not None:
            return L
        ring = self.ring
        so, sd, stot = layout(ring, self.cols, e)
        to, td, ttot = layout(ring, self.rows, e)
        L = la.zeros(ttot, stot)
        for w, M in self.terms.items():
            for r, s in np.argwhere(M):
                if not sd[s] or not td[r]:
                    continue
                blk = ring.mult(w, e - self.cols[s])
                L[to[r]:to[r] + td[r], so[s]:so[s] + sd[s]] += int(M[r, s]) * blk
        L %= ring.p
        self._lin[e] = L
        return L

    def column_vector(self, s: int) -> np.ndarray:
        """Coordinates of column ``s`` in the target's degree-``cols[s]`` piece."""
        ring = self.ring
        deg = self.cols[s]
        offs, dims, tot = layout(ring, self.rows, deg)
        v = np.zeros(tot, dtype=np.int64)
        for w, M in self.terms.items():
            for r in np.flatnonzero(M[:, s]):
                idx = ring.index(deg - self.rows[r])
                for m, c in ring.nf(w).items():
                    v[offs[r] + idx[m]] += c * int(M[r, s])
        return v % ring.p


# ---------------------------------------------------------------------------
# kernels and minimal generators by graded linear algebra
# ---------------------------------------------------------------------------

def _span_up(ring: CIRing, twists: Sequence[int], span: np.ndarray, e: int) -> np.ndarray:
    """Rows spanning ``m · span`` in degree ``e+1`` (``span`` in degree ``e``)."""
    if span.shape[0] == 0:
        return la.zeros(0, layout(ring, twists, e + 1)[2])
    parts = []
    for v in range(ring.n):
        w = tuple(1 if i == v else 0 for i in range(ring.n))
        parts.append(la.matmul(span, free_mult(ring, twists, w, e).T, ring.p))
    return np.vstack(parts)


def minimal_columns(D: GradedMatrix) -> GradedMatrix:
    """Subset of columns minimally generating the image of ``D``."""
    if not D.cols:
        return D
    ring = D.ring
    order = sorted(range(len(D.cols)), key=lambda s: (D.cols[s], s))
    by_deg: dict[int, list[int]] = {}
    for s in order:
        by_deg.setdefault(D.cols[s], []).append(s)
    keep: list[int] = []
    span = None
    prev_e = None
    for e in range(min(D.cols), max(D.cols) + 1):
        tot = layout(ring, D.rows, e)[2]
        if span is None or prev_e != e - 1:
            sub = la.zeros(0, tot)
        else:
            sub = _span_up(ring, D.rows, span, e - 1)
        R, piv = la.row_basis(sub, ring.p)
        cand = by_deg.get(e, [])
        if cand:
            V = np.array([D.column_vector(s) for s in cand], dtype=np.int64).reshape(len(cand), tot)
            chosen = la.independent_mod(V, R, piv, ring.p)
            keep.extend(cand[i] for i in sorted(chosen))
            if chosen:
                R, piv = la.row_basis(np.vstack([R, V[sorted(chosen)]]), ring.p)
        span, prev_e = R, e
    keep.sort(key=lambda s: (D.cols[s], s))
    return D.take_cols(keep)


def _kernel_linear(D: GradedMatrix) -> GradedMatrix:
    ring = D.ring
    g = D.cols
    lo, hi = min(g), max(g) + ring.top
    columns: list[tuple[int, np.ndarray]] = []
    prev = None
    for e in range(lo, hi + 1):
        tot = layout(ring, g, e)[2]
        if tot == 0:
            prev = la.zeros(0, 0)
            continue
        ker = la.nullspace(D.linear_map(e), ring.p)
        if ker.shape[0]:
            if prev is not None and prev.shape[0]:
                R, piv = la.row_basis(_span_up(ring, g, prev, e - 1), ring.p)
            else:
                R, piv = la.zeros(0, tot), []
            for i in sorted(la.independent_mod(ker, R, piv, ring.p)):
                columns.append((e, ker[i]))
        prev = ker
    return GradedMatrix.from_vectors(ring, g, columns)


def _kernel_groebner(D: GradedMatrix) -> GradedMatrix:
    ring = D.ring
    cols = [[D.entry(r, s) for r in range(len(D.rows))] for s in range(len(D.cols))]
    if not D.rows:
        return GradedMatrix.identity(ring, D.cols)
    syz = syzygies(cols, quotient=ring.u)
    pieces: list[tuple[int, list[Polynomial]]] = []
    for vec in syz:
        # split into weighted-homogeneous components, each again a syzygy
        comps: dict[int, list[dict]] = {}
        for s, f in enumerate(vec):
            for e, c in f.terms.items():
                k = sum(e) + D.cols[s]
                comps.setdefault(k, [dict() for _ in vec])[s][e] = c
        for k, parts in sorted(comps.items()):
            pieces.append((k, [Polynomial(ring.Q, t, True) for t in parts]))
    if not pieces:
        return GradedMatrix.zero(ring, D.cols, [])
    entries = [[pieces[j][1][s] for j in range(len(pieces))] for s in range(len(D.cols))]
    K = GradedMatrix.from_polys(ring, entries, rows=D.cols, cols=[k for k, _ in pieces])
    return minimal_columns(K)


def kernel_generators(D: GradedMatrix) -> GradedMatrix:
    """Minimal homogeneous generators of ``ker D`` as the columns of a matrix into ``D``'s source."""
    ring = D.ring
    if not D.cols:
        return GradedMatrix.zero(ring, [], [])
    if ring.is_artinian:
        return _kernel_linear(D)
    return _kernel_groebner(D)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

class ModulePresentation:
    """The graded module ``coker(P)``; generators have degrees ``P.rows``."""

    def __init__(self, ring: CIRing, pres: GradedMatrix, minimal: bool = False,
                 is_mcm: bool | None = None, label: str | None = None):
        self.ring = ring
        self.pres = pres
        self.minimal = minimal
        self.is_mcm = True if ring.is_artinian else is_mcm
        self.label = label
        self._cache: dict = {}

    @property
    def gens(self) -> tuple[int, ...]:
        return self.pres.rows

    @property
    def relations(self) -> tuple[int, ...]:
        return self.pres.cols

    @property
    def rank(self) -> int:
        return len(self.pres.rows)

    def is_zero(self) -> bool:
        return minimalize(self).rank == 0

    def __repr__(self) -> str:
        name = f"{self.label}: " if self.label else ""
        return f"<{name}coker {self.pres.entries()} gens={self.gens}>"

    def pieces(self) -> _Pieces:
        pc = self._cache.get("pieces")
        if pc is None:
            pc = self._cache["pieces"] = _Pieces(self)
        return pc

    def degree_range(self) -> tuple[int, int] | None:
        """Degrees where the module can be nonzero (Artinian rings only)."""
        if not self.gens or not self.ring.is_artinian:
            return None
        return min(self.gens), max(self.gens) + self.ring.top

    def hilbert(self, k: int) -> int:
        return self.pieces().dim(k)


def present(ring: CIRing, matrix, gen_degrees: Sequence[int] | None = None,
            minimal: bool = True, label: str | None = None) -> ModulePresentation:
    """Cokernel of a matrix given as a :class:`GradedMatrix` or rows of polynomials."""
    if isinstance(matrix, GradedMatrix):
        P = matrix
    else:
        rows = list(matrix)
        P = GradedMatrix.from_polys(ring, rows, rows=gen_degrees)
    M = ModulePresentation(ring, P, label=label)
    return minimalize(M) if minimal else M


def free_module(ring: CIRing, twists: Sequence[int]) -> ModulePresentation:
    return ModulePresentation(ring, GradedMatrix.zero(ring, twists, []), minimal=True, is_mcm=True)


def zero_module(ring: CIRing) -> ModulePresentation:
    return free_module(ring, [])


def residue_field(ring: CIRing) -> ModulePresentation:
    xs = [[ring.Q.gen(i) for i in range(ring.n)]]
    P = GradedMatrix.from_polys(ring, xs, rows=[0], cols=[1] * ring.n)
    return ModulePresentation(ring, P, minimal=True, label="k")


def direct_sum(M: ModulePresentation, N: ModulePresentation) -> ModulePresentation:
    P = GradedMatrix.block_diag(M.pres, N.pres)
    mcm = M.is_mcm and N.is_mcm if M.is_mcm is not None and N.is_mcm is not None else None
    label = f"{M.label} ⊕ {N.label}" if M.label and N.label else None
    return ModulePresentation(M.ring, P, minimal=M.minimal and N.minimal, is_mcm=mcm, label=label)


def twist(M: ModulePresentation, e: int) -> ModulePresentation:
    """``M(e)``, with ``M(e)_k = M_{e+k}``."""
    return ModulePresentation(M.ring, M.pres.shift(-e), minimal=M.minimal, is_mcm=M.is_mcm)


def _eliminate_units(P: GradedMatrix) -> GradedMatrix:
    p = P.ring.p
    while True:
        S = P.scalar_part()
        hits = np.argwhere(S.T)  # column-major: first column, then first row
        if hits.size == 0:
            return P
        s, r = map(int, hits[0])
        inv = pow(int(S[r, s]), -1, p)
        col = P.take_cols([s])
        row = P.take_rows([r])
        P = P - (col @ row).scale(inv)
        keep_r = [i for i in range(len(P.rows)) if i != r]
        keep_c = [j for j in range(len(P.cols)) if j != s]
        P = P.take_rows(keep_r).take_cols(keep_c)


def minimalize(M: ModulePresentation) -> ModulePresentation:
    """Minimal presentation: unit entries eliminated, redundant relations dropped."""
    if M.minimal:
        return M
    P = _eliminate_units(M.pres)
    P = minimal_columns(P)
    out = ModulePresentation(M.ring, P, minimal=True, is_mcm=M.is_mcm, label=M.label)
    return out


def is_free(M: ModulePresentation) -> bool:
    return not minimalize(M).relations


# ---------------------------------------------------------------------------
# graded pieces of a module, Hom and stable Hom
# ---------------------------------------------------------------------------

class _Pieces:
    """``M_k = F0_k / im(P)_k`` with coordinates on a complement of the image."""

    def __init__(self, M: ModulePresentation):
        self.M = M
        self.ring = M.ring
        self._deg: dict[int, tuple] = {}
        self._act: dict[tuple[Exp, int], np.ndarray] = {}

    def at(self, k: int):
        d = self._deg.get(k)
        if d is None:
            ring, P = self.ring, self.M.pres
            tot = layout(ring, P.rows, k)[2]
            if tot and P.cols:
                R, piv = la.row_basis(P.linear_map(k).T.copy(), ring.p)
            else:
                R, piv = la.zeros(0, tot), []
            comp = la.quotient_basis(R, piv, tot)
            d = self._deg[k] = (tot, R, piv, comp)
        return d

    def dim(self, k: int) -> int:
        return len(self.at(k)[3])

    def proj(self, k: int, X: np.ndarray) -> np.ndarray:
        """Columns of ``X`` (vectors in ``F0_k``) to coordinates in ``M_k``."""
        tot, R, piv, comp = self.at(k)
        red = la.reduce_rows(X.T.copy(), R, piv, self.ring.p)
        return red[:, comp].T.copy()

    def sect(self, k: int) -> np.ndarray:
        """Columns are lifts to ``F0_k`` of the coordinate basis of ``M_k``."""
        tot, _, _, comp = self.at(k)
        S = la.zeros(tot, len(comp))
        S[comp, np.arange(len(comp))] = 1
        return S

    def act(self, w: Exp, k: int) -> np.ndarray:
        key = (w, k)
        A = self._act.get(key)
        if A is None:
            X = la.matmul(free_mult(self.ring, self.M.gens, w, k), self.sect(k), self.ring.p)
            A = self._act[key] = self.proj(k + sum(w), X)
        return A


def hom_degree_range(M: ModulePresentation, N: ModulePresentation) -> tuple[int, int]:
    """Internal degrees where ``Hom(M, N)`` can be nonzero.

    Exact for Artinian rings; otherwise the generator span widened by twice
    the largest defining degree.
    """
    if not M.gens or not N.gens:
        return 0, -1
    ring = M.ring
    if ring.is_artinian:
        return min(N.gens) - max(M.gens), max(N.gens) + ring.top - min(M.gens)
    pad = 2 * max(ring.deltas)
    return min(N.gens) - max(M.gens) - pad, max(N.gens) - min(M.gens) + pad


@dataclass
class HomSpace:
    source: ModulePresentation
    target: ModulePresentation
    degree: int
    basis: np.ndarray          # rows: coordinates in ⊕_s N_{g_s+e}
    blocks: list[int]          # block sizes dim N_{g_s+e}

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def element(self, vec: np.ndarray) -> HomElement:
        return HomElement.from_coords(self.source, self.target, self.degree, vec)

    def elements(self) -> list[HomElement]:
        return [self.element(v) for v in self.basis]


def _hom_blocks(M: ModulePresentation, N: ModulePresentation, e: int) -> list[int]:
    pc = N.pieces()
    return [pc.dim(g + e) for g in M.gens]


def hom_space(M: ModulePresentation, N: ModulePresentation, e: int) -> HomSpace:
    """Basis of ``Hom_A(M, N)_e``: images of generators satisfying the relations."""
    ring = M.ring
    pc = N.pieces()
    blocks = _hom_blocks(M, N, e)
    offs = np.concatenate([[0], np.cumsum(blocks)]).astype(int) if blocks else np.array([0])
    nunk = int(offs[-1])
    P = M.pres
    if nunk == 0:
        return HomSpace(M, N, e, la.zeros(0, 0), blocks)
    rblocks = [pc.dim(h + e) for h in P.cols]
    roffs = np.concatenate([[0], np.cumsum(rblocks)]).astype(int) if rblocks else np.array([0])
    C = la.zeros(int(roffs[-1]), nunk)
    for w, W in P.terms.items():
        for s, t in np.argwhere(W):
            if not blocks[s] or not rblocks[t]:
                continue
            blk = pc.act(w, M.gens[s] + e)
            C[roffs[t]:roffs[t + 1], offs[s]:offs[s + 1]] += int(W[s, t]) * blk
    C %= ring.p
    return HomSpace(M, N, e, la.nullspace(C, ring.p), blocks)


class HomElement:
    """A homogeneous map ``M -> N`` of internal degree ``degree``, given by a lift ``F0(M) -> F0(N)``."""

    def __init__(self, source: ModulePresentation, target: ModulePresentation,
                 lift: GradedMatrix, degree: int):
        self.source = source
        self.target = target
        self.lift = lift
        self.degree = degree

    @classmethod
    def from_coords(cls, M, N, e, vec) -> HomElement:
        ring = M.ring
        pc = N.pieces()
        columns = []
        off = 0
        for g in M.gens:
            d = pc.dim(g + e)
            lift = la.matmul(pc.sect(g + e), np.asarray(vec[off:off + d]).reshape(d, 1), ring.p)
            columns.append((g + e, lift[:, 0]))
            off += d
        L = GradedMatrix.from_vectors(ring, N.gens, columns)
        return cls(M, N, L, e)

    @classmethod
    def identity(cls, M: ModulePresentation) -> HomElement:
        return cls(M, M, GradedMatrix.identity(M.ring, M.gens), 0)

    @classmethod
    def zero(cls, M, N, e: int = 0) -> HomElement:
        return cls(M, N, GradedMatrix.zero(M.ring, N.gens, [g + e for g in M.gens]), e)

    def coords(self) -> np.ndarray:
        pc = self.target.pieces()
        parts = []
        for s, g in enumerate(self.source.gens):
            k = g + self.degree
            v = self.lift.column_vector(s).reshape(-1, 1)
            parts.append(pc.proj(k, v)[:, 0])
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def compose(self, other: HomElement) -> HomElement:
        """``self ∘ other``."""
        return HomElement(other.source, self.target, self.lift @ other.lift,
                          self.degree + other.degree)

    def __add__(self, other: HomElement) -> HomElement:
        return HomElement(self.source, self.target, self.lift + other.lift, self.degree)

    def __neg__(self) -> HomElement:
        return HomElement(self.source, self.target, -self.lift, self.degree)

    def __sub__(self, other: HomElement) -> HomElement:
        return self + (-other)

    def scale(self, c: int) -> HomElement:
        return HomElement(self.source, self.target, self.lift.scale(c), self.degree)

    def is_zero(self) -> bool:
        return not self.coords().any()

    def is_homomorphism(self) -> bool:
        """The lift sends relations of the source into relations of the target."""
        comp = self.lift @ self.source.pres
        pc = self.target.pieces()
        for s in range(len(comp.cols)):
            v = comp.column_vector(s).reshape(-1, 1)
            if pc.proj(comp.cols[s], v).any():
                return False
        return True

    def is_stably_zero(self) -> bool:
        R, piv = _free_factoring_span(self.source, self.target, self.degree)
        return la.in_span(R, piv, self.coords().reshape(1, -1), self.source.ring.p)


def _free_factoring_span(M: ModulePresentation, N: ModulePresentation, e: int):
    """RREF of the maps ``M -> N`` of degree ``e`` factoring through a free module."""
    key = ("pfree", id(N), e)
    hit = M._cache.get(key)
    if hit is not None and hit[0] is N:
        return hit[1]
    ring = M.ring
    F = free_module(ring, N.gens)
    HF = hom_space(M, F, e)
    pcN = N.pieces()
    rows = []
    for v in HF.basis:
        parts, off = [], 0
        for g in M.gens:
            k = g + e
            d = layout(ring, N.gens, k)[2]
            parts.append(pcN.proj(k, v[off:off + d].reshape(-1, 1))[:, 0])
            off += d
        rows.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
    width = sum(_hom_blocks(M, N, e))
    img = np.array(rows, dtype=np.int64).reshape(len(rows), width)
    res = la.row_basis(img, ring.p)
    M._cache[key] = (N, res)
    return res


@dataclass
class StableHom:
    degree: int
    dim: int
    hom_dim: int
    representatives: list[HomElement] = field(default_factory=list)


def stable_hom(M: ModulePresentation, N: ModulePresentation, e: int) -> StableHom:
    """``Hom(M, N)_e`` modulo maps factoring through a free module."""
    H = hom_space(M, N, e)
    if H.dim == 0:
        return StableHom(e, 0, 0, [])
    R, piv = _free_factoring_span(M, N, e)
    idx = sorted(la.independent_mod(H.basis, R, piv, M.ring.p))
    return StableHom(e, len(idx), H.dim, [H.element(H.basis[i]) for i in idx])


def stable_hom_total(M: ModulePresentation, N: ModulePresentation) -> int:
    lo, hi = hom_degree_range(M, N)
    return sum(stable_hom(M, N, e).dim for e in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def dual_data(M: ModulePresentation) -> tuple[GradedMatrix, ModulePresentation]:
    """``(K, M*)`` where the columns of ``K`` generate ``Hom(M, A)`` inside ``F0*``."""
    hit = M._cache.get("dual")
    if hit is not None:
        return hit
    Mm = minimalize(M)
    K = kernel_generators(Mm.pres.transpose())
    rel = kernel_generators(K) if K.cols else GradedMatrix.zero(M.ring, [], [])
    D = minimalize(ModulePresentation(M.ring, rel, is_mcm=M.is_mcm))
    M._cache["dual"] = (K, D)
    return K, D


def dual(M: ModulePresentation) -> ModulePresentation:
    """``Hom_A(M, A)``."""
    return dual_data(M)[1]
