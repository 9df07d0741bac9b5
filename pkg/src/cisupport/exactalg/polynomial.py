"""Sparse multivariate polynomials over a prime field."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable

Exp = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class MonomialOrder:
    """A graded monomial order.

    ``kind`` is ``"grevlex"`` or ``"elim"``; ``elim`` compares the first
    ``block`` variables (by degree, then grevlex) before the rest, which makes
    it an elimination order for those variables.
    """

    kind: str = "grevlex"
    block: int = 0

    def key(self, e: Exp):
        if self.kind == "grevlex":
            return (sum(e), tuple(-x for x in reversed(e)))
        if self.kind == "elim":
            head, tail = e[: self.block], e[self.block:]
            return (
                sum(head),
                tuple(-x for x in reversed(head)),
                sum(tail),
                tuple(-x for x in reversed(tail)),
            )
        raise ValueError(f"unknown order {self.kind!r}")


GREVLEX = MonomialOrder()


class PolyRing:
    """``F_p[x_1..x_n]`` with named variables."""

    def __init__(self, nvars: int, p: int = 32003, names: Iterable[str] | None = None,
                 order: MonomialOrder = GREVLEX):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.n = nvars
        self.p = p
        self.names = tuple(names) if names is not None else tuple(f"x{i + 1}" for i in range(nvars))
        if len(self.names) != nvars:
            raise ValueError("wrong number of variable names")
        self.order = order

    def __repr__(self) -> str:
        return f"PolyRing(F_{self.p}[{', '.join(self.names)}])"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and (self.n, self.p, self.names, self.order)
            == (other.n, other.p, other.names, other.order)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.p, self.names, self.order))

    @cached_property
    def zero_exp(self) -> Exp:
        return (0,) * self.n

    def key(self, e: Exp):
        return self.order.key(e)

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        return Polynomial(self, {self.zero_exp: c})

    def gen(self, i: int) -> Polynomial:
        e = [0] * self.n
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.n)]

    def var(self, name: str) -> Polynomial:
        return self.gen(self.names.index(name))

    def monomial(self, e: Exp, c: int = 1) -> Polynomial:
        return Polynomial(self, {tuple(e): c})

    def monomials(self, degree: int) -> list[Exp]:
        """All exponent vectors of the given total degree, descending in the order."""
        if degree < 0:
            return []
        out = []
        for combo in combinations_with_replacement(range(self.n), degree):
            e = [0] * self.n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        out.sort(key=self.key, reverse=True)
        return out

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.n, self.p, self.names, order)

    def extend(self, names: Iterable[str], front: bool = False,
               order: MonomialOrder = GREVLEX) -> PolyRing:
        names = tuple(names)
        new = names + self.names if front else self.names + names
        return PolyRing(len(new), self.p, new, order)


def _clean(terms: dict, p: int) -> dict:
    return {e: c % p for e, c in terms.items() if c % p}


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to residues mod p."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict, _clean_ok: bool = False):
        self.ring = ring
        self.terms = terms if _clean_ok else _clean(terms, ring.p)
        self._hash = None

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def sorted_terms(self) -> list[tuple[Exp, int]]:
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def lead_exp(self) -> Exp:
        return max(self.terms, key=self.ring.key)

    def lead_coeff(self) -> int:
        return self.terms[self.lead_exp()]

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        inv = pow(self.lead_coeff(), -1, self.ring.p)
        return self.scale(inv)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials over different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = (t.get(e, 0) + c) % p
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial(self.ring, t, True)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        p = self.ring.p
        return Polynomial(self.ring, {e: (-c) % p for e, c in self.terms.items()}, True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Polynomial:
        c %= self.ring.p
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(self.ring, {e: (v * c) % p for e, v in self.terms.items()}, True)

    def mul_term(self, e: Exp, c: int) -> Polynomial:
        p = self.ring.p
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(x, e)): (v * c) % p for x, v in self.terms.items()},
            True,
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def evaluate(self, point: Iterable[int]) -> int:
        pt = list(point)
        p = self.ring.p
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * pow(x, k, p) % p
            total += v
        return total % p

    def substitute(self, images: list[Polynomial]) -> Polynomial:
        """Ring map sending variable i to ``images[i]``."""
        target = images[0].ring
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            out = out + term
        return out

    def __repr__(self) -> str:
        return self.to_str()

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        p = self.ring.p
        parts = []
        for e, c in self.sorted_terms():
            # symmetric representative reads better for small negatives
            sc = c if c <= p // 2 else c - p
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            if not mono:
                parts.append(str(sc))
            elif sc == 1:
                parts.append(mono)
            elif sc == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{sc}*{mono}")
        s = parts[0]
        for t in parts[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm_exp(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def sub_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))
