"""The session-script language: tokens, AST, parser, printer.

    script   := stmt*
    stmt     := (field | ring | ci | module | set | splitting | command) ';'
    field    := 'field' INT
    ring     := 'ring' NAME '[' NAME (',' NAME)* ']'
    ci       := 'ci' '(' poly (',' poly)* ')'
    module   := 'module' NAME '=' modexpr
    set      := 'set' NAME '=' setexpr
    splitting:= 'splitting' NAME 'of' NAME '=' NAME '+' NAME 'mod' NAME
    modexpr  := 'coker' matrix ['gens' ints] | 'k' | 'free' ints
              | 'sum' '(' NAME ',' NAME ')' | 'syz' '(' NAME [',' INT] ')'
              | 'cosyz' '(' NAME [',' INT] ')' | 'indicator' ints
              | 'random' '(' INT ',' INT ',' INT [',' INT] ')'
    setexpr  := 'V' '(' poly (',' poly)* ')' | 'empty' | 'all' | 'point' ints
    matrix   := '[' row (',' row)* ']'      row := '[' poly (',' poly)* ']'
    ints     := '(' INT (',' INT)* ')'      (INT may carry a leading '-')

Commands are listed in :data:`COMMANDS`.  Polynomials are infix with ``^``
for powers; in ``V(...)`` they are written in the reserved names ``t1..tc``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from ..errors import ParseError, ScriptNameError
from ..exactalg import Polynomial, PolyRing

# ---------------------------------------------------------------------------
# polynomial expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "PolyExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "PolyExpr"
    right: "PolyExpr"


@dataclass(frozen=True)
class Pow:
    base: "PolyExpr"
    exp: int


PolyExpr = Union[Num, Var, Neg, BinOp, Pow]

_LEVEL = {"+": 1, "-": 1, "*": 2}


def _level(e: PolyExpr) -> int:
    if isinstance(e, BinOp):
        return _LEVEL[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def print_poly(e: PolyExpr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = print_poly(e.arg)
        return "-" + (inner if _level(e.arg) >= 3 else f"({inner})")
    if isinstance(e, Pow):
        inner = print_poly(e.base)
        return (inner if _level(e.base) == 5 else f"({inner})") + f"^{e.exp}"
    lv = _LEVEL[e.op]
    left, right = print_poly(e.left), print_poly(e.right)
    if _level(e.left) < lv:
        left = f"({left})"
    if _level(e.right) <= lv:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def eval_poly(e: PolyExpr, R: PolyRing) -> Polynomial:
    if isinstance(e, Num):
        return R.const(e.value)
    if isinstance(e, Var):
        if e.name not in R.names:
            raise ScriptNameError(f"unknown variable {e.name!r}; ring variables are {', '.join(R.names)}")
        return R.var(e.name)
    if isinstance(e, Neg):
        return -eval_poly(e.arg, R)
    if isinstance(e, Pow):
        return eval_poly(e.base, R) ** e.exp
    a, b = eval_poly(e.left, R), eval_poly(e.right, R)
    return a + b if e.op == "+" else a - b if e.op == "-" else a * b


def poly_vars(e: PolyExpr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Neg,)):
        return poly_vars(e.arg)
    if isinstance(e, Pow):
        return poly_vars(e.base)
    if isinstance(e, BinOp):
        return poly_vars(e.left) | poly_vars(e.right)
    return set()


# ---------------------------------------------------------------------------
# statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Field:
    p: int


@dataclass(frozen=True)
class Ring:
    name: str
    variables: tuple[str, ...]


@dataclass(frozen=True)
class CI:
    polys: tuple[PolyExpr, ...]


@dataclass(frozen=True)
class ModExpr:
    """``kind`` is one of coker, k, free, sum, syz, cosyz, indicator, random."""

    kind: str
    matrix: tuple[tuple[PolyExpr, ...], ...] = ()
    ints: tuple[int, ...] = ()
    names: tuple[str, ...] = ()


@dataclass(frozen=True)
class Module:
    name: str
    expr: ModExpr


@dataclass(frozen=True)
class SetExpr:
    kind: str  # V, empty, all, point
    polys: tuple[PolyExpr, ...] = ()
    ints: tuple[int, ...] = ()


@dataclass(frozen=True)
class SetDecl:
    name: str
    expr: SetExpr


@dataclass(frozen=True)
class Splitting:
    name: str
    module: str
    first: str
    second: str
    X: str


@dataclass(frozen=True)
class Context:
    """``mod X`` or ``level i``."""

    kind: str
    ref: Union[str, int]


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple[str, ...] = ()
    ctx: Context | None = None
    n: int | None = None
    using: str | None = None
    alternates: tuple[str, ...] = ()


Statement = Union[Field, Ring, CI, Module, SetDecl, Splitting, Command]


@dataclass
class SessionScript:
    statements: list[Statement] = field(default_factory=list)

    def __eq__(self, other) -> bool:
        return isinstance(other, SessionScript) and self.statements == other.statements

    @property
    def commands(self) -> list[Command]:
        return [s for s in self.statements if isinstance(s, Command)]


# name: (module arity, context: None | "mod" | "any", takes integer, integer keyword)
COMMANDS: dict[str, tuple[int, str | None, bool, str | None]] = {
    "betti": (1, None, False, None),
    "complexity": (1, None, False, None),
    "support": (1, "optional-mod", False, None),
    "pair": (2, None, False, None),
    "topv": (1, None, False, None),
    "action": (1, None, False, None),
    "ext": (2, None, False, None),
    "thick": (1, "any", False, None),
    "hom": (2, "mod", True, "shift"),
    "reduce": (1, None, False, None),
    "check": (0, None, False, None),
    "audit gar": (1, "any", False, None),
    "audit murthy": (2, "any", True, "from"),
    "audit symmetry": (2, "mod", False, None),
    "audit hw": (2, None, False, None),
}

KEYWORDS = {"field", "ring", "ci", "module", "set", "splitting", "of", "mod", "level", "using",
            "alt", "gens", "coker", "k", "free", "sum", "syz", "cosyz", "indicator", "random",
            "V", "empty", "all", "point", "audit", "from", "shift"} | {c.split()[0] for c in COMMANDS}

# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+) | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[;,()\[\]=+\-*^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, sym, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos, line, start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def unexpected(self) -> str:
        return "unexpected " + ("end of input" if self.tok.kind == "eof" else repr(self.tok.text))

    def error(self, expected, note: str = "") -> ParseError:
        t = self.tok
        return ParseError(self.unexpected() + note, t.line, t.col, tuple(sorted(set(expected))))

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("name", "sym") and self.tok.text in texts

    def take(self, text: str) -> Token:
        if not self.at(text):
            raise self.error({repr(text)})
        t = self.tok
        self.i += 1
        return t

    def take_opt(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def name(self) -> str:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            raise self.error({"name"})
        self.i += 1
        return t.text

    def integer(self, signed: bool = False) -> int:
        neg = signed and self.take_opt("-")
        t = self.tok
        if t.kind != "int":
            raise self.error({"integer"})
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def seq(self, item, open_="(", close=")"):
        opener = self.take(open_)
        items = [item()]
        while self.take_opt(","):
            items.append(item())
        if not self.at(close):
            t = self.tok
            raise ParseError(f"unclosed {open_!r}: {self.unexpected()} at line {t.line}, column {t.col}",
                             opener.line, opener.col, (repr(close), "','"))
        self.i += 1
        return tuple(items)

    # polynomials ----------------------------------------------------------
    def poly(self) -> PolyExpr:
        e = self.term()
        while self.at("+", "-"):
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> PolyExpr:
        e = self.unary()
        while self.at("*"):
            self.i += 1
            e = BinOp("*", e, self.unary())
        return e

    def unary(self) -> PolyExpr:
        if self.take_opt("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> PolyExpr:
        base = self.atom()
        if self.take_opt("^"):
            return Pow(base, self.integer())
        return base

    def atom(self) -> PolyExpr:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "name" and t.text not in KEYWORDS:
            self.i += 1
            return Var(t.text)
        if self.take_opt("("):
            e = self.poly()
            self.take(")")
            return e
        raise self.error({"integer", "variable", "'('"})

    # statements -----------------------------------------------------------
    def script(self) -> SessionScript:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
            self.take(";")
        return SessionScript(stmts)

    def statement(self) -> Statement:
        if self.take_opt("field"):
            return Field(self.integer())
        if self.take_opt("ring"):
            nm = self.name()
            return Ring(nm, self.seq(self.name, "[", "]"))
        if self.take_opt("ci"):
            return CI(self.seq(self.poly))
        if self.take_opt("module"):
            nm = self.name()
            self.take("=")
            return Module(nm, self.modexpr())
        if self.take_opt("set"):
            nm = self.name()
            self.take("=")
            return SetDecl(nm, self.setexpr())
        if self.take_opt("splitting"):
            nm = self.name()
            self.take("of")
            mod = self.name()
            self.take("=")
            a = self.name()
            self.take("+")
            b = self.name()
            self.take("mod")
            return Splitting(nm, mod, a, b, self.name())
        return self.command()

    def modexpr(self) -> ModExpr:
        if self.take_opt("coker"):
            mat = self.seq(lambda: self.seq(self.poly, "[", "]"), "[", "]")
            gens = self.seq(lambda: self.integer(True)) if self.take_opt("gens") else ()
            return ModExpr("coker", matrix=mat, ints=gens)
        if self.take_opt("k"):
            return ModExpr("k")
        for kind in ("free", "indicator"):
            if self.take_opt(kind):
                return ModExpr(kind, ints=self.seq(lambda: self.integer(True)))
        if self.take_opt("sum"):
            return ModExpr("sum", names=self.seq(self.name))
        for kind in ("syz", "cosyz"):
            if self.take_opt(kind):
                self.take("(")
                nm = self.name()
                n = (self.integer(),) if self.take_opt(",") else ()
                self.take(")")
                return ModExpr(kind, ints=n, names=(nm,))
        if self.take_opt("random"):
            ints = self.seq(self.integer)
            if len(ints) not in (3, 4):
                raise ParseError("random takes (rows, cols, degree[, seed])", self.tok.line, self.tok.col,
                                 ("3 or 4 integers",))
            return ModExpr("random", ints=ints)
        raise self.error({"'coker'", "'k'", "'free'", "'sum'", "'syz'", "'cosyz'", "'indicator'", "'random'"})

    def setexpr(self) -> SetExpr:
        if self.take_opt("V"):
            return SetExpr("V", polys=self.seq(self.poly))
        if self.take_opt("empty"):
            return SetExpr("empty")
        if self.take_opt("all"):
            return SetExpr("all")
        if self.take_opt("point"):
            return SetExpr("point", ints=self.seq(lambda: self.integer(True)))
        raise self.error({"'V'", "'empty'", "'all'", "'point'"})

    def context(self) -> Context:
        if self.take_opt("mod"):
            return Context("mod", self.name())
        self.take("level")
        return Context("level", self.integer())

    def command(self) -> Command:
        word = self.tok.text if self.tok.kind == "name" else ""
        if word == "audit":
            self.i += 1
            sub = self.tok.text if self.tok.kind == "name" else ""
            word = f"audit {sub}"
            if word not in COMMANDS:
                raise self.error({"'gar'", "'murthy'", "'symmetry'", "'hw'"})
        elif word not in COMMANDS:
            raise self.error({"statement"})
        self.i += 1
        arity, ctx_kind, has_int, int_kw = COMMANDS[word]
        if word == "check":
            return Command(word, (self.name(),))
        args = tuple(self.name() for _ in range(arity))
        ctx = None
        if ctx_kind == "any":
            ctx = self.context()
        elif ctx_kind == "mod" or (ctx_kind == "optional-mod" and self.at("mod")):
            self.take("mod")
            ctx = Context("mod", self.name())
        n = None
        if has_int:
            if word == "hom":
                self.take(int_kw)
                n = self.integer(True)
            elif self.take_opt(int_kw):
                n = self.integer()
        using = self.name() if word in ("hom", "audit gar", "audit murthy", "audit symmetry") \
            and self.take_opt("using") else None
        alts = self.seq(self.name) if word == "audit murthy" and self.take_opt("alt") else ()
        return Command(word, args, ctx, n, using, alts)


def _resolve_names(s: SessionScript) -> None:
    kinds: dict[str, str] = {}
    ring_seen = False

    def declare(name, kind):
        if name in kinds:
            raise ScriptNameError(f"duplicate name {name!r}")
        if re.fullmatch(r"t\d+", name):
            raise ScriptNameError(f"{name!r} is reserved for operator variables")
        kinds[name] = kind

    def need(name, kind):
        if kinds.get(name) != kind:
            what = "undeclared" if name not in kinds else f"a {kinds[name]}, not a {kind}"
            raise ScriptNameError(f"{name!r} is {what}")

    for st in s.statements:
        if isinstance(st, Ring):
            if ring_seen:
                raise ScriptNameError("only one ring declaration is allowed")
            ring_seen = True
            for v in st.variables:
                declare(v, "variable")
        elif isinstance(st, Module):
            for n in st.expr.names:
                need(n, "module")
            declare(st.name, "module")
        elif isinstance(st, SetDecl):
            declare(st.name, "set")
        elif isinstance(st, Splitting):
            for n in (st.module, st.first, st.second):
                need(n, "module")
            need(st.X, "set")
            declare(st.name, "splitting")
        elif isinstance(st, Command):
            if st.name == "check":
                need(st.args[0], "splitting")
                continue
            for n in (*st.args, *st.alternates):
                need(n, "module")
            if st.ctx is not None and st.ctx.kind == "mod":
                need(st.ctx.ref, "set")
            if st.using is not None:
                need(st.using, "splitting")


def parse(text: str) -> SessionScript:
    """Parse a whole script; raises :class:`ParseError` or :class:`ScriptNameError`."""
    s = _Parser(text).script()
    _resolve_names(s)
    return s


def parse_polynomial(text: str, R: PolyRing) -> Polynomial:
    p = _Parser(text)
    e = p.poly()
    if p.tok.kind != "eof":
        raise p.error({"operator", "end of input"})
    return eval_poly(e, R)


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

def _ints(xs) -> str:
    return "(" + ", ".join(str(x) for x in xs) + ")"


def _polys(xs) -> str:
    return "(" + ", ".join(print_poly(x) for x in xs) + ")"


def print_modexpr(e: ModExpr) -> str:
    if e.kind == "coker":
        rows = ", ".join("[" + ", ".join(print_poly(x) for x in r) + "]" for r in e.matrix)
        out = f"coker [{rows}]"
        return out + (f" gens {_ints(e.ints)}" if e.ints else "")
    if e.kind == "k":
        return "k"
    if e.kind in ("free", "indicator", "random"):
        return e.kind + " " * (e.kind != "random") + _ints(e.ints)
    if e.kind == "sum":
        return f"sum({e.names[0]}, {e.names[1]})"
    extra = f", {e.ints[0]}" if e.ints else ""
    return f"{e.kind}({e.names[0]}{extra})"


def print_statement(st: Statement) -> str:
    if isinstance(st, Field):
        return f"field {st.p}"
    if isinstance(st, Ring):
        return f"ring {st.name}[{', '.join(st.variables)}]"
    if isinstance(st, CI):
        return f"ci {_polys(st.polys)}"
    if isinstance(st, Module):
        return f"module {st.name} = {print_modexpr(st.expr)}"
    if isinstance(st, SetDecl):
        e = st.expr
        body = {"V": lambda: f"V{_polys(e.polys)}", "point": lambda: f"point {_ints(e.ints)}"}.get(
            e.kind, lambda: e.kind)()
        return f"set {st.name} = {body}"
    if isinstance(st, Splitting):
        return f"splitting {st.name} of {st.module} = {st.first} + {st.second} mod {st.X}"
    parts = [st.name, *st.args]
    if st.ctx is not None:
        parts += [st.ctx.kind, str(st.ctx.ref)]
    if st.n is not None:
        parts += [COMMANDS[st.name][3], str(st.n)]
    if st.using is not None:
        parts += ["using", st.using]
    if st.alternates:
        parts += ["alt", "(" + ", ".join(st.alternates) + ")"]
    return " ".join(parts)


def print_script(s: SessionScript) -> str:
    return "".join(print_statement(st) + ";\n" for st in s.statements)
