"""Execute a parsed session script and produce JSON-ready report objects."""

from __future__ import annotations

import json
import os
from contextlib import contextmanager

from ..cimodule import CIRing, GradedMatrix, direct_sum, free_module, present, residue_field
from ..errors import BudgetExceeded, CISupportError
from ..exactalg import PolyRing
from ..resolution import BUDGET_ENV, betti, complexity, cosyzygy, ext_pair, syzygy
from ..support import (
    AlgebraicSet,
    indicator_module,
    pair_support_ideal,
    quotient_support_X,
    support_ideal,
    topv,
)
from .. import verdier as vd
from .config import RunConfig
from .lang import (
    CI,
    Command,
    Field,
    Module,
    Ring,
    SessionScript,
    SetDecl,
    Splitting,
    eval_poly,
    print_statement,
)
from .randmod import random_module

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_P = 32003


class UsageError(Exception):
    """Script is well formed but cannot be run (missing ring, bad window)."""


@contextmanager
def _budget(limit: int | None):
    if limit is None:
        yield
        return
    old = os.environ.get(BUDGET_ENV)
    os.environ[BUDGET_ENV] = str(limit)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop(BUDGET_ENV, None)
        else:
            os.environ[BUDGET_ENV] = old


def _matrix(m) -> list[list[int]]:
    return [[int(v) for v in row] for row in m]


class Session:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.p = cfg.p
        self.names: tuple[str, ...] | None = None
        self.ring: CIRing | None = None
        self.window: int | None = None
        self.modules: dict = {}
        self.sets: dict = {}
        self.splittings: dict = {}

    # declarations ---------------------------------------------------------
    def declare(self, st) -> None:
        if isinstance(st, Field):
            if self.cfg.p is None:
                self.p = st.p
        elif isinstance(st, Ring):
            self.names = st.variables
        elif isinstance(st, CI):
            if self.names is None:
                raise UsageError("'ci' needs a preceding 'ring' declaration")
            Q = PolyRing(len(self.names), self.p or DEFAULT_P, self.names)
            self.ring = CIRing(Q, [eval_poly(f, Q) for f in st.polys])
            try:
                self.window = self.cfg.window_for(self.ring)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        elif isinstance(st, Module):
            M = self.build_module(st.expr)
            if M.label is None or st.expr.kind not in ("random",):
                M.label = st.name
            self.modules[st.name] = M
        elif isinstance(st, SetDecl):
            self.sets[st.name] = self.build_set(st.name, st.expr)
        elif isinstance(st, Splitting):
            self.splittings[st.name] = vd.EssentialSplitting.of_direct_sum(
                self.modules[st.first], self.modules[st.second], self.sets[st.X],
                module=self.modules[st.module])

    def need_ring(self) -> CIRing:
        if self.ring is None:
            raise UsageError("no ring declared: use 'ring Q[...]' and 'ci (...)' first")
        return self.ring

    def build_module(self, e):
        R = self.need_ring()
        if e.kind == "coker":
            entries = [[eval_poly(f, R.Q) for f in row] for row in e.matrix]
            gens = list(e.ints) if e.ints else [0] * len(entries)
            if len(gens) != len(entries):
                raise UsageError("gens list must have one degree per matrix row")
            cols = []
            for s in range(len(entries[0])):
                degs = {gens[r] + f.degree() for r, row in enumerate(entries) if not (f := row[s]).is_zero()}
                if len(degs) > 1:
                    raise UsageError(f"column {s + 1} is not homogeneous for the given generator degrees")
                cols.append(degs.pop() if degs else gens[0] + 1)
            return present(R, GradedMatrix.from_polys(R, entries, rows=gens, cols=cols))
        if e.kind == "k":
            return residue_field(R)
        if e.kind == "free":
            return free_module(R, list(e.ints))
        if e.kind == "sum":
            return direct_sum(self.modules[e.names[0]], self.modules[e.names[1]])
        if e.kind in ("syz", "cosyz"):
            n = e.ints[0] if e.ints else 1
            f = syzygy if e.kind == "syz" else cosyzygy
            return f(self.modules[e.names[0]], n)
        if e.kind == "indicator":
            return indicator_module(R, list(e.ints), self.window)
        rows, cols, deg = e.ints[:3]
        seed = e.ints[3] if len(e.ints) == 4 else self.cfg.seed
        return random_module(R, (rows, cols, deg), seed)

    def build_set(self, name, e) -> AlgebraicSet:
        T = self.need_ring().T
        if e.kind == "V":
            return AlgebraicSet.V(T, [eval_poly(f, T) for f in e.polys], name)
        if e.kind == "empty":
            X = AlgebraicSet.empty(T)
        elif e.kind == "all":
            X = AlgebraicSet.everything(T)
        else:
            if len(e.ints) != T.n:
                raise UsageError(f"point needs {T.n} coordinates")
            X = AlgebraicSet.point(T, list(e.ints))
        X.label = name
        return X

    def context(self, c) -> vd.QuotientContext:
        if c.kind == "mod":
            return vd.QuotientContext.by_variety(self.ring, self.sets[c.ref])
        try:
            return vd.QuotientContext.by_complexity(self.ring, c.ref)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    # commands -------------------------------------------------------------
    def execute(self, cmd: Command) -> dict:
        """Return ``{"result": ...}`` or an audit-shaped dict with a verdict."""
        self.need_ring()
        W = self.window
        strict = self.cfg.strict
        args = [self.modules.get(a) for a in cmd.args]
        if cmd.name == "betti":
            return {"result": {"betti": betti(args[0], W)}}
        if cmd.name == "complexity":
            r = complexity(args[0], W)
            return {"result": {"cx": r.cx, "method": r.method, "support_cx": r.support_cx,
                               "growth_cx": r.growth_cx}, "flags": list(r.flags)}
        if cmd.name == "support":
            J = support_ideal(args[0], W, strict=strict)
            out = {"ideal": J.to_strings(), "dim": J.dim, "provisional": J.provisional}
            if cmd.ctx is not None:
                out["empty_mod_X"] = quotient_support_X(args[0], self.sets[cmd.ctx.ref], W).is_empty()
            return {"result": out, "flags": ["provisional"] if J.provisional else []}
        if cmd.name == "pair":
            J = pair_support_ideal(args[0], args[1], W, strict=strict)
            return {"result": {"ideal": J.to_strings(), "provisional": J.provisional}}
        if cmd.name == "topv":
            J = topv(support_ideal(args[0], W, strict=strict))
            return {"result": {"ideal": J.to_strings(), "certified": J.exact},
                    "flags": [] if J.exact else ["uncertified-factorization"]}
        if cmd.name == "action":
            from ..operators import eisenbud_action

            act = eisenbud_action(args[0], W)
            return {"result": {"betti": act.betti,
                               "chi": [[_matrix(m) for m in row] for row in act.chi]}}
        if cmd.name == "ext":
            from ..cimodule import minimalize

            E = ext_pair(minimalize(args[0]), minimalize(args[1]), W)
            return {"result": {"dims": E.dims, "dims_mod_m": E.dims_mod_m}}
        if cmd.name == "thick":
            return {"result": {"in_thick": vd.in_thick(args[0], self.context(cmd.ctx), W)}}
        if cmd.name == "hom":
            q = vd.quotient_hom(args[0], args[1], cmd.n, self.sets[cmd.ctx.ref],
                                self.splittings.get(cmd.using), W)
            return {"result": {"computable": q.computable, "regime": q.regime, "dim": q.dim}}
        if cmd.name == "reduce":
            before = complexity(args[0], W).cx
            theta, K = vd.complexity_reduction(args[0], W, self.cfg.attempts, self.cfg.seed)
            return {"result": {"theta": theta.to_str(), "cx_before": before,
                               "cx_after": complexity(K, W).cx, "cone_gens": list(K.gens)}}
        if cmd.name == "check":
            return {"result": vd.split_check(self.splittings[cmd.args[0]], W)}
        split = self.splittings.get(cmd.using)
        if cmd.name == "audit gar":
            rep = vd.audit_gar(args[0], self.context(cmd.ctx), W, split)
        elif cmd.name == "audit murthy":
            alts = [self.modules[a] for a in cmd.alternates]
            m = 1 if cmd.n is None else cmd.n
            rep = vd.audit_murthy(args[0], args[1], self.context(cmd.ctx), m, W, split, alts)
        elif cmd.name == "audit symmetry":
            rep = vd.audit_symmetry(args[0], args[1], self.sets[cmd.ctx.ref], W, split)
        else:
            rep = vd.audit_hw(args[0], args[1], W)
        return {"verdict": rep.verdict, "evidence": rep.evidence, "flags": rep.flags,
                "inputs": rep.inputs}


def report(command: str, inputs: dict, window, seed, body: dict) -> dict:
    """Fixed field order: command, inputs, window, seed, result|verdict|error, evidence, flags."""
    out = {"command": command, "inputs": inputs, "window": window, "seed": seed}
    for key in ("result", "verdict", "error"):
        if key in body:
            out[key] = body[key]
    out["evidence"] = body.get("evidence", [])
    out["flags"] = body.get("flags", [])
    return out


def run(script: SessionScript, cfg: RunConfig, source: str = "") -> tuple[list[dict], int]:
    """Execute statements in order; returns the report objects and the exit code."""
    sess = Session(cfg)
    reports: list[dict] = []
    code = EXIT_OK
    with _budget(cfg.budget):
        for st in script.statements:
            text = print_statement(st)
            body = None
            try:
                if isinstance(st, Command):
                    body = sess.execute(st)
                else:
                    sess.declare(st)
            except UsageError as exc:
                body, code = {"error": {"type": "UsageError", "message": str(exc)}}, EXIT_USAGE
            except BudgetExceeded as exc:
                body, code = {"error": {"type": "BudgetExceeded", "message": str(exc)}}, EXIT_BUDGET
            except (CISupportError, ValueError) as exc:
                body = {"error": {"type": type(exc).__name__, "message": str(exc)}}
                code = max(code, EXIT_FAIL)
            if body is None:
                continue
            inputs = body.pop("inputs", None) or {"args": list(getattr(st, "args", ()))}
            if source:
                inputs = {"script": source, **inputs}
            reports.append(report(text, inputs, sess.window, cfg.seed, body))
            if body.get("verdict") == vd.FAIL:
                code = max(code, EXIT_FAIL)
            if code in (EXIT_USAGE, EXIT_BUDGET) or ("error" in body and not isinstance(st, Command)):
                break
    return reports, code


def to_json(rep: dict) -> str:
    return json.dumps(rep, ensure_ascii=False, separators=(", ", ": "))


def to_table_row(rep: dict) -> str:
    if "verdict" in rep:
        status = rep["verdict"]
    elif "error" in rep:
        status = f"ERROR {rep['error']['type']}: {rep['error']['message']}"
    else:
        status = json.dumps(rep["result"], ensure_ascii=False)
    flags = f"  [{', '.join(rep['flags'])}]" if rep["flags"] else ""
    return f"{rep['command']:<44} {status}{flags}"
