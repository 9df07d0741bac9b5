"""Thick subcategories, Verdier-quotient Hom in its computable range, and auditors.

Two kinds of quotient are supported: by the modules supported inside an
algebraic set ``X`` and by the modules of complexity at most ``i``.  Hom
sets in the quotient are only computed where they agree with stable Hom
(supports disjoint from ``X``, or a certified splitting); elsewhere the
answer is reported as incomputable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .cimodule import (
    GradedMatrix,
    HomElement,
    ModulePresentation,
    direct_sum,
    is_free,
    minimalize,
    stable_hom,
    hom_degree_range,
)
from .errors import InvalidSplitting, SearchExhausted
from .exactalg import Polynomial
from .resolution import complexity, cone_of_map, cosyzygy, ext_pair, mcm_approximation, syzygy
from .support import (
    AlgebraicSet,
    TIdeal,
    contains,
    pair_support_ideal,
    quotient_support_i,
    support_ideal,
    variety_intersection,
)

PASS = "PASS"
FAIL = "FAIL"
INAPPLICABLE = "INAPPLICABLE"
WINDOW_LIMITED = "WINDOW-LIMITED"
CONJECTURE_EVIDENCE = "CONJECTURE-EVIDENCE"


# ---------------------------------------------------------------------------
# contexts, splittings, reports
# ---------------------------------------------------------------------------

@dataclass
class QuotientContext:
    """Either the quotient by ``S_X`` (``kind == "variety"``) or by ``CMS_{<=i}``."""

    ring: object
    kind: str
    X: AlgebraicSet | None = None
    i: int | None = None

    @classmethod
    def by_variety(cls, ring, X: AlgebraicSet) -> QuotientContext:
        return cls(ring, "variety", X=X)

    @classmethod
    def by_complexity(cls, ring, i: int) -> QuotientContext:
        if not 1 <= i <= ring.c - 1:
            raise ValueError(f"complexity level must lie in 1..{ring.c - 1}, got {i}")
        return cls(ring, "complexity", i=i)

    def describe(self) -> str:
        if self.kind == "variety":
            return f"mod {self.X.label or self.X.ideal.to_strings()}"
        return f"level {self.i}"


@dataclass
class EssentialSplitting:
    """``M ≅ M1 ⊕ M2`` with ``V*(M1) ⊆ X`` and ``V*(M2) ∩ X = ∅``.

    ``to_sum`` and ``from_sum`` are degree-zero maps between ``M`` and
    ``M1 ⊕ M2`` that should be mutually inverse in the stable category.
    """

    module: ModulePresentation
    M1: ModulePresentation
    M2: ModulePresentation
    X: AlgebraicSet
    to_sum: HomElement | None = None
    from_sum: HomElement | None = None

    @classmethod
    def of_direct_sum(cls, M1: ModulePresentation, M2: ModulePresentation, X: AlgebraicSet,
                      module: ModulePresentation | None = None) -> EssentialSplitting:
        """Splitting of ``M1 ⊕ M2`` (or of ``module`` if it is literally that sum) by identities."""
        S = direct_sum(M1, M2)
        M = module if module is not None else S
        if M.pres.rows != S.pres.rows:
            raise InvalidSplitting("isomorphism", "module is not presented as the given sum")
        ident = GradedMatrix.identity(M.ring, M.gens)
        return cls(M, M1, M2, X, HomElement(M, S, ident, 0), HomElement(S, M, ident, 0))


@dataclass
class AuditReport:
    theorem: str
    inputs: dict
    window: int
    verdict: str
    evidence: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"theorem": self.theorem, "inputs": self.inputs, "window": self.window,
                "verdict": self.verdict, "evidence": self.evidence, "flags": self.flags}


def tail(window: int) -> range:
    return range(window // 2, window + 1)


# ---------------------------------------------------------------------------
# membership and splittings
# ---------------------------------------------------------------------------

def _disjoint(J: TIdeal, X: AlgebraicSet) -> bool:
    return variety_intersection(J, X.ideal).is_empty()


def in_thick(M: ModulePresentation, ctx: QuotientContext, window: int | None = None) -> bool:
    """Whether ``M`` is zero in the quotient."""
    if is_free(M):
        return True
    if ctx.kind == "variety":
        return contains(ctx.X, support_ideal(M, window))
    return complexity(M, window).cx <= ctx.i


def split_check(s: EssentialSplitting, window: int | None = None) -> dict:
    """Validate a splitting certificate; raises :class:`InvalidSplitting` naming the failed clause."""
    J1 = support_ideal(s.M1, window)
    J2 = support_ideal(s.M2, window)
    if not contains(s.X, J1):
        raise InvalidSplitting("variety", "support of the first summand is not inside X")
    if not _disjoint(J2, s.X):
        raise InvalidSplitting("variety", "support of the second summand meets X")
    S = direct_sum(s.M1, s.M2)
    if s.to_sum is None or s.from_sum is None:
        raise InvalidSplitting("isomorphism", "no maps supplied")
    a, b = s.to_sum, s.from_sum
    if a.source.gens != s.module.gens or b.target.gens != s.module.gens:
        raise InvalidSplitting("isomorphism", "maps do not start and end at the module")
    if a.target.gens != S.gens or b.source.gens != S.gens or a.degree or b.degree:
        raise InvalidSplitting("isomorphism", "maps do not pass through the sum")
    for f in (a, b):
        if not f.is_homomorphism():
            raise InvalidSplitting("isomorphism", "a supplied map is not a homomorphism")
    if not (b.compose(a) - HomElement.identity(s.module)).is_stably_zero():
        raise InvalidSplitting("isomorphism", "composite on the module is not stably the identity")
    a2 = HomElement(a.source, S, a.lift, 0)
    b2 = HomElement(S, b.target, b.lift, 0)
    if not (a2.compose(b2) - HomElement.identity(S)).is_stably_zero():
        raise InvalidSplitting("isomorphism", "composite on the sum is not stably the identity")
    return {"variety": "ok", "isomorphism": "ok"}


# ---------------------------------------------------------------------------
# Hom in the quotient by S_X
# ---------------------------------------------------------------------------

@dataclass
class QuotientHom:
    computable: bool
    regime: str
    dim: int | None = None
    representatives: list = field(default_factory=list)


def _regime(M, N, X: AlgebraicSet, splitting: EssentialSplitting | None, window):
    """Reduce ``(M, N)`` to a pair whose quotient Hom is stable Hom; ``None`` if no rule applies."""
    if is_free(M) or is_free(N):
        return "free", None, None
    JM, JN = support_ideal(M, window), support_ideal(N, window)
    # disjointness first: against X = ∅ it holds whatever the supports are
    if _disjoint(JM, X):
        return "source-disjoint", M, N
    if _disjoint(JN, X):
        return "target-disjoint", M, N
    if contains(X, JM) or contains(X, JN):
        return "zero-object", None, None
    if splitting is not None:
        split_check(splitting, window)
        if splitting.module is M:
            return "split-source", splitting.M2, N
        if splitting.module is N:
            return "split-target", M, splitting.M2
        raise InvalidSplitting("module", "splitting is for neither argument")
    return "incomputable", None, None


def _shift(N: ModulePresentation, n: int) -> ModulePresentation:
    return cosyzygy(N, n) if n >= 0 else syzygy(N, -n)


def quotient_hom(M: ModulePresentation, N: ModulePresentation, n: int, X: AlgebraicSet,
                 splitting: EssentialSplitting | None = None, window: int | None = None) -> QuotientHom:
    """``Hom_{T_X}(M, Ω^{-n} N)`` where it equals a stable Hom."""
    regime, A, B = _regime(M, N, X, splitting, window)
    if regime == "incomputable":
        return QuotientHom(False, regime)
    if A is None:
        return QuotientHom(True, regime, 0, [])
    target = _shift(B, n)
    Am = minimalize(A)
    lo, hi = hom_degree_range(Am, target)
    total, reps = 0, []
    for e in range(lo, hi + 1):
        sh = stable_hom(Am, target, e)
        total += sh.dim
        reps.extend(sh.representatives)
    return QuotientHom(True, regime, total, reps)


def hom_sequence(M, N, X: AlgebraicSet, window: int, splitting=None):
    """``(regime, [dim Hom_{T_X}(M, Ω^{-n} N) for n = 0..window])`` or ``(regime, None)``.

    Positive shifts use ``Ext^n(M', N')``, which equals the stable Hom into the
    ``n``-th cosyzygy for maximal Cohen-Macaulay modules over a Gorenstein ring.
    """
    regime, A, B = _regime(M, N, X, splitting, window)
    if regime == "incomputable":
        return regime, None
    if A is None:
        return regime, [0] * (window + 1)
    Am, Bm = minimalize(A), minimalize(B)
    lo, hi = hom_degree_range(Am, Bm)
    h0 = sum(stable_hom(Am, Bm, e).dim for e in range(lo, hi + 1))
    E = ext_pair(Am, Bm, window)
    return regime, [h0] + E.dims[1:]


# ---------------------------------------------------------------------------
# complexity reduction and ecx
# ---------------------------------------------------------------------------

def _linear_forms(T, attempts: int, seed: int):
    t = T.gens()
    for j in range(T.n):
        yield t[j]
    rng = random.Random(seed)
    for _ in range(max(attempts - T.n, 0)):
        coeffs = [rng.randrange(T.p) for _ in range(T.n)]
        if any(coeffs):
            yield sum((t[j] * coeffs[j] for j in range(T.n)), T.zero())


def complexity_reduction(M: ModulePresentation, window: int | None = None, attempts: int = 12,
                         seed: int = 0) -> tuple[Polynomial, ModulePresentation]:
    """A linear operator ``θ`` and ``K`` = cone of ``θ: Ω²M -> M`` with ``cx K = cx M - 1``."""
    from .operators import chain_map_of

    ring = M.ring
    cx = complexity(M, window).cx
    if cx < 2:
        raise ValueError(f"complexity reduction needs complexity at least 2, got {cx}")
    tried = 0
    for theta in _linear_forms(ring.T, attempts, seed):
        if tried >= attempts:
            break
        tried += 1
        K = mcm_approximation(cone_of_map(chain_map_of(theta, minimalize(M), window)))
        if complexity(K, window).cx == cx - 1:
            return theta, K
    raise SearchExhausted(f"no linear operator reduced complexity in {tried} attempts")


def ecx_upper(M: ModulePresentation, ctx: QuotientContext,
              alternates: Sequence[ModulePresentation] = (), window: int | None = None) -> int:
    """Upper bound for the least complexity in the isomorphism class of ``M`` in the quotient."""
    if is_free(M):
        return 0
    return min(complexity(L, window).cx for L in [M, *alternates])


# ---------------------------------------------------------------------------
# auditors
# ---------------------------------------------------------------------------

def _provisional(*ideals: TIdeal) -> bool:
    return any(J.provisional for J in ideals)


def _label(M: ModulePresentation) -> str:
    return M.label or repr(M)


def audit_gar(M: ModulePresentation, ctx: QuotientContext, window: int | None = None,
              splitting: EssentialSplitting | None = None) -> AuditReport:
    """Zero object in the quotient iff high self-Homs vanish."""
    ring = M.ring
    window = ring.default_window if window is None else window
    rep = AuditReport("gar", {"M": _label(M), "context": ctx.describe()}, window, PASS)
    J = support_ideal(M, window)
    if ctx.kind == "variety":
        side_a = contains(ctx.X, J)
        regime, seq = hom_sequence(M, M, ctx.X, window, splitting)
        if seq is not None:
            witness = next((n for n in tail(window) if seq[n]), None)
            side_b = witness is None
            rep.evidence.append({"regime": regime, "tail": [seq[n] for n in tail(window)]})
        else:
            # surrogate: the self-Ext module has its support inside X
            side_b = contains(ctx.X, pair_support_ideal(M, M, window))
            witness = None
            rep.flags.append("surrogate")
            rep.evidence.append({"regime": "surrogate", "self_ext_support_in_X": side_b})
    else:
        Vi = quotient_support_i(M, ctx.i, window)
        side_a = Vi.is_empty()
        P = pair_support_ideal(M, M, window)
        side_b = P.cx <= ctx.i
        witness = None
        rep.flags.append("surrogate")
        rep.evidence.append({"regime": "surrogate", "self_ext_complexity": P.cx})
    rep.evidence.append({"quotient_support_empty": side_a, "self_hom_vanishes": side_b})
    if side_a != side_b:
        rep.verdict = FAIL
        rep.evidence.append({"witness": {"kind": "ext-nonzero", "degree": witness, "dim": seq[witness]}
                             if witness is not None else {"kind": "support", "ideal": J.to_strings()}})
    elif _provisional(J):
        rep.verdict = WINDOW_LIMITED
    return rep


def audit_murthy(M: ModulePresentation, N: ModulePresentation, ctx: QuotientContext, m: int = 1,
                 window: int | None = None, splitting: EssentialSplitting | None = None,
                 alternates: Sequence[ModulePresentation] = ()) -> AuditReport:
    """A vanishing run of the prescribed length forces vanishing from ``m`` on."""
    ring = M.ring
    window = ring.default_window if window is None else window
    rep = AuditReport("murthy", {"M": _label(M), "N": _label(N), "context": ctx.describe(), "m": m},
                      window, PASS)
    if ctx.kind == "variety":
        r = ecx_upper(N, ctx, alternates, window)
        run = r + 1
        regime, seq = hom_sequence(M, N, ctx.X, window, splitting)
        rep.evidence.append({"order": r, "run": run, "regime": regime})
        if seq is None:
            rep.verdict = INAPPLICABLE
            return rep
    else:
        run = ring.c - ctx.i + 1
        cxM, cxN = complexity(M, window).cx, complexity(N, window).cx
        rep.evidence.append({"order": ring.c - ctx.i, "run": run, "cx": [cxM, cxN]})
        if cxM <= ctx.i or cxN <= ctx.i:
            rep.evidence.append({"regime": "zero-object"})
            return rep
        if cxN == ctx.i + 1 and run >= 2:
            # Σ²N ≅ N in the quotient, so a run covering both parities persists
            _, K = complexity_reduction(N, window)
            cxK = complexity(K, window).cx
            rep.evidence.append({"regime": "two-periodic", "cone_complexity": cxK})
            if cxK > ctx.i:
                rep.verdict = FAIL
                rep.evidence.append({"witness": {"kind": "periodicity", "cone_complexity": cxK}})
            return rep
        rep.verdict = INAPPLICABLE
        return rep
    if m < 0 or m + run - 1 > window:
        rep.verdict = WINDOW_LIMITED
        return rep
    rep.evidence.append({"sequence": seq[m:]})
    if any(seq[n] for n in range(m, m + run)):
        rep.evidence.append({"hypothesis": "no vanishing run at m"})
    else:
        bad = next((n for n in range(m + run, window + 1) if seq[n]), None)
        if bad is not None:
            rep.verdict = FAIL
            rep.evidence.append({"witness": {"kind": "ext-nonzero", "degree": bad, "dim": seq[bad]}})
            return rep
    if _provisional(support_ideal(M, window), support_ideal(N, window)):
        rep.verdict = WINDOW_LIMITED
    return rep


def _essentially_disjoint(M, X, window, splitting) -> bool:
    J = support_ideal(M, window)
    if contains(X, J) or _disjoint(J, X):
        return True
    return splitting is not None and splitting.module is M


def audit_symmetry(M: ModulePresentation, N: ModulePresentation, X: AlgebraicSet,
                   window: int | None = None, splitting: EssentialSplitting | None = None) -> AuditReport:
    """Tail vanishing of ``Hom(M, Ω^{-n}N)`` in ``T_X`` versus disjointness of quotient supports."""
    ring = M.ring
    window = ring.default_window if window is None else window
    rep = AuditReport("symmetry", {"M": _label(M), "N": _label(N), "X": X.label}, window, PASS)
    JM, JN = support_ideal(M, window), support_ideal(N, window)
    cond2 = contains(X, variety_intersection(JM, JN))
    regime, seq = hom_sequence(M, N, X, window, splitting)
    rep.evidence.append({"regime": regime, "disjoint_mod_X": cond2})
    if seq is None:
        rep.flags.append("forward-unchecked")
        if cond2:
            rep.flags.append(CONJECTURE_EVIDENCE)
        rep.verdict = INAPPLICABLE
        return rep
    tail_vals = [seq[n] for n in tail(window)]
    cond1 = not any(tail_vals)
    rep.evidence.append({"tail": tail_vals, "tail_vanishes": cond1})
    if cond1 and not cond2:
        rep.verdict = FAIL
        rep.evidence.append({"witness": {"kind": "containment",
                                         "intersection": variety_intersection(JM, JN).to_strings()}})
        return rep
    if cond2:
        certified = (_essentially_disjoint(M, X, window, splitting)
                     or _essentially_disjoint(N, X, window, splitting))
        if certified:
            bad = next((n for n in tail(window) if seq[n]), None)
            if bad is not None:
                rep.verdict = FAIL
                rep.evidence.append({"witness": {"kind": "ext-nonzero", "degree": bad, "dim": seq[bad]}})
                return rep
        else:
            rep.flags.append(CONJECTURE_EVIDENCE)
            rep.evidence.append({"conjecture_tail": tail_vals})
    if _provisional(JM, JN):
        rep.verdict = WINDOW_LIMITED
    return rep


def audit_hw(U: ModulePresentation, V: ModulePresentation, window: int | None = None) -> AuditReport:
    """In the quotient by complexity ``<= c-1``: no adjacent even/odd vanishing for nonzero objects."""
    ring = U.ring
    window = ring.default_window if window is None else window
    rep = AuditReport("hw", {"U": _label(U), "V": _label(V), "context": f"level {ring.c - 1}"},
                      window, PASS)
    cu, cv = complexity(U, window).cx, complexity(V, window).cx
    rep.evidence.append({"cx": [cu, cv]})
    if cu < ring.c or cv < ring.c:
        rep.verdict = INAPPLICABLE
        return rep
    E = ext_pair(minimalize(U), minimalize(V), window)
    pairs = [(n, E.dims[n], E.dims[n + 1]) for n in tail(window) if n % 2 == 0 and n + 1 <= window]
    rep.evidence.append({"pairs": [list(x) for x in pairs]})
    bad = next((n for n, a, b in pairs if a == 0 and b == 0), None)
    if bad is not None:
        rep.verdict = FAIL
        rep.evidence.append({"witness": {"kind": "ext-vanishing-pair", "degree": bad}})
    elif _provisional(support_ideal(U, window), support_ideal(V, window)):
        rep.verdict = WINDOW_LIMITED
    return rep
