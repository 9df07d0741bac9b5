import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cisupport.exactalg import (
    PolyRing,
    Polynomial,
    factor_split,
    groebner,
    hilbert_function,
    ideal_intersection,
    krull_dimension,
    membership_with_coefficients,
    normal_form,
    radical_membership,
    syzygies,
)
from cisupport.exactalg.polynomial import lcm_exp, sub_exp

from oracle import growth_dimension, hilbert_values

P = 32003
R2 = PolyRing(2, P, ["x", "y"])
x, y = R2.gens()
T3 = PolyRing(3, P, ["t1", "t2", "t3"])
t1, t2, t3 = T3.gens()


def s_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    L = lcm_exp(f.lead_exp(), g.lead_exp())
    a = f.mul_term(sub_exp(L, f.lead_exp()), pow(f.lead_coeff(), -1, f.ring.p))
    b = g.mul_term(sub_exp(L, g.lead_exp()), pow(g.lead_coeff(), -1, g.ring.p))
    return a - b


def as_dicts(polys):
    return [dict(f.terms) for f in polys]


# fixed examples ---------------------------------------------------------------

def test_monomial_ideal_is_its_own_basis():
    assert set(groebner([x ** 2, y ** 2]).polys) == {x ** 2, y ** 2}


def test_zero_ideal_has_empty_basis():
    assert groebner([R2.zero()]).polys == []


def test_hand_buchberger_fixture():
    # S(x^2 - y^2, xy) = y(x^2 - y^2) - x(xy) = -y^3; nothing further survives
    G = groebner([x ** 2 - y ** 2, x * y])
    assert set(G.polys) == {x * y, x ** 2 - y ** 2, y ** 3}


def test_normal_forms():
    G = groebner([x ** 2, y ** 2])
    assert normal_form(x ** 2, G).is_zero()
    assert normal_form(x, G) == x
    assert normal_form(x ** 3 * y + y ** 3, G).is_zero()


def test_membership_certificates():
    gens = [x ** 2, y ** 2]
    assert membership_with_coefficients(x ** 2, gens) == [R2.one(), R2.zero()]
    c = membership_with_coefficients(x ** 2 * y ** 2, gens)
    assert c[0] * gens[0] + c[1] * gens[1] == x ** 2 * y ** 2
    assert membership_with_coefficients(x, gens) is None


def test_koszul_syzygy():
    syz = syzygies([x ** 2, y ** 2])
    assert len(syz) == 1
    a, b = syz[0]
    assert (a, b) in {(y ** 2, -x ** 2), (-y ** 2, x ** 2)}
    assert syzygies([x]) == []


def test_krull_dimension_examples():
    T2 = PolyRing(2, P, ["t1", "t2"])
    assert krull_dimension(groebner([T2.gen(1)])) == 1
    assert krull_dimension(groebner([T3.zero()])) == 3
    assert krull_dimension(groebner([t1 * t2, t1 * t3])) == 2


def test_radical_membership_examples():
    T2 = PolyRing(2, P, ["t1", "t2"])
    a, b = T2.gens()
    assert radical_membership(a, groebner([a ** 2]))
    assert not radical_membership(b, groebner([a]))
    assert radical_membership(a + b, groebner([(a + b) ** 3, a * b]))


def test_factor_examples():
    T2 = PolyRing(2, P, ["t1", "t2"])
    a, b = T2.gens()
    f = factor_split(a ** 2 * b)
    assert sorted((g.to_str(), m) for g, m in f.factors) == [("t1", 2), ("t2", 1)]
    f = factor_split(a ** 2 - b ** 2)
    assert {g.monic() for g, _ in f.factors} == {(a - b).monic(), (a + b).monic()}
    assert f.exact and f.expand() == a ** 2 - b ** 2
    T3small = PolyRing(2, 3, ["t1", "t2"])
    u, v = T3small.gens()
    f = factor_split(u ** 2 + v ** 2)
    assert len(f.factors) == 1 and f.factors[0][1] == 1 and f.exact


def test_intersection_of_coordinate_ideals():
    I = ideal_intersection(groebner([t1]), groebner([t2]))
    assert set(I.polys) == {t1 * t2}


# properties -------------------------------------------------------------------

SMALL_P = 101


def _poly_strategy(ring: PolyRing, max_deg: int = 3, max_terms: int = 4):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(ring.n)])
    return st.dictionaries(exps, st.integers(1, ring.p - 1), min_size=1, max_size=max_terms).map(
        lambda d: Polynomial(ring, d))


RS = PolyRing(3, SMALL_P, ["a", "b", "c"])
polys = st.lists(_poly_strategy(RS), min_size=1, max_size=3)
cfg = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@cfg
@given(polys)
def test_s_pairs_reduce_to_zero(gens):
    G = groebner(gens)
    for i in range(len(G.polys)):
        for j in range(i + 1, len(G.polys)):
            assert normal_form(s_poly(G.polys[i], G.polys[j]), G).is_zero()


@cfg
@given(polys)
def test_generators_lie_in_basis_ideal_and_order_does_not_matter(gens):
    G = groebner(gens)
    assert all(normal_form(g, G).is_zero() for g in gens)
    assert groebner(list(reversed(gens))) == G


@cfg
@given(polys)
def test_basis_agrees_with_sympy(gens):
    syms = sympy.symbols("a b c")
    sp = [sympy.Poly.from_dict({e: c for e, c in g.terms.items()}, *syms, modulus=SMALL_P) for g in gens]
    ref = sympy.groebner([q.as_expr() for q in sp], *syms, modulus=SMALL_P, order="grevlex")
    theirs = set()
    for q in ref.exprs:
        d = sympy.Poly(q, *syms, modulus=SMALL_P).as_dict()
        f = Polynomial(RS, {e: int(c) % SMALL_P for e, c in d.items()})
        theirs.add(f.monic())
    ours = {g.monic() for g in groebner(gens).polys}
    assert ours == theirs


@cfg
@given(polys, _poly_strategy(RS, 2, 3))
def test_membership_certificate_substitutes(gens, h):
    f = sum((h * g for g in gens), RS.zero())
    c = membership_with_coefficients(f, gens)
    assert c is not None
    assert sum((a * g for a, g in zip(c, gens)), RS.zero()) == f


@cfg
@given(polys)
def test_syzygies_are_syzygies(gens):
    for s in syzygies(gens):
        assert sum((a * g for a, g in zip(s, gens)), RS.zero()).is_zero()


def _homog(ring):
    def build(args):
        deg, coeffs = args
        mons = ring.monomials(deg)
        return Polynomial(ring, {m: c for m, c in zip(mons, coeffs) if c})
    return st.tuples(st.integers(1, 2), st.lists(st.integers(0, 3), min_size=6, max_size=6)).map(build)


TS = PolyRing(3, SMALL_P, ["t1", "t2", "t3"])


@cfg
@given(st.lists(_homog(TS), min_size=1, max_size=3))
def test_krull_dimension_matches_hilbert_growth(gens):
    gens = [g for g in gens if not g.is_zero()] or [TS.zero()]
    G = groebner(gens)
    values = hilbert_values(as_dicts(gens), 3, 10, SMALL_P)
    assert [hilbert_function(G, d) for d in range(11)] == values
    dim = krull_dimension(G)
    assert max(dim, 0) == growth_dimension(values)


@cfg
@given(st.lists(_homog(TS), min_size=1, max_size=3), _homog(TS))
def test_radical_membership_brute_force(gens, g):
    gens = [f for f in gens if not f.is_zero()] or [TS.zero()]
    G = groebner(gens)
    if any(normal_form(g ** e, G).is_zero() for e in range(1, 7)):
        assert radical_membership(g, G)
