import numpy as np
import pytest

from cisupport.cimodule import HomElement, direct_sum, free_module, residue_field
from cisupport.errors import WindowTooShort
from cisupport.operators import (
    action_on_ext,
    chain_map_of,
    decomposition_holds,
    eisenbud_action,
    lift,
    perturbed_lift,
    square_decompose,
    syzygy_map,
)
from cisupport.resolution import resolve
from cisupport.support import support_ideal, t_ideal

from conftest import cyclic


def _modules(R):
    g = R.Q.gens()
    mods = [residue_field(R), cyclic(R, g[0])]
    if R.n > 1:
        mods += [cyclic(R, g[0] * g[1]), direct_sum(cyclic(R, g[0]), residue_field(R))]
    return mods


def test_lift_round_trip(F1, F2):
    res = resolve(residue_field(F1), 4)
    L = lift(res)
    x = F1.Q.gen(0)
    assert L.d(1).entries() in ([[x]], [[-x]])
    res2 = resolve(residue_field(F2), 6)
    L2 = lift(res2)
    assert all(L2.d(i).reduced() == res2.d(i) for i in range(1, 7))
    assert lift(resolve(free_module(F2, [0]), 2)).d(1).shape == (1, 0)


def test_perturbed_lift_reduces_back(F2):
    # linear differentials leave no room to add multiples of u; A/(xy) has a quadratic d_1
    x, y = F2.Q.gens()
    res = resolve(cyclic(F2, x * y), 6)
    L = perturbed_lift(res, seed=5)
    assert L.d(1) != res.d(1)
    assert all(L.d(i).reduced() == res.d(i) for i in range(1, 7))


def test_square_decompose_examples(F1, F2):
    tt = square_decompose(resolve(residue_field(F1), 5), 5)
    for i in range(2, 6):
        assert np.array_equal(tt[i][0].scalar_part() % F1.p, [[1]])
    x, _ = F2.Q.gens()
    tt = square_decompose(resolve(cyclic(F2, x), 6), 6)
    for i in range(2, 7):
        assert np.array_equal(tt[i][0].scalar_part() % F2.p, [[1]])
        assert tt[i][1].is_zero()


def test_action_examples(F1, F2):
    act = eisenbud_action(residue_field(F1), 8)
    assert all(np.array_equal(m, [[1]]) for m in act.chi[0])
    assert support_ideal(residue_field(F1)).gens == []
    x, _ = F2.Q.gens()
    act = eisenbud_action(cyclic(F2, x), 8)
    assert all(np.array_equal(m, [[1]]) for m in act.chi[0])
    assert all(not m.any() for m in act.chi[1])
    t1, t2 = F2.T.gens()
    assert support_ideal(cyclic(F2, x)).radical_equal(t_ideal(F2.T, [t2]))


def test_free_module_has_empty_action(F2):
    act = eisenbud_action(free_module(F2, [0]), 6)
    assert act.betti[1:] == [0] * 6
    assert all(m.size == 0 for row in act.chi for m in row)


@pytest.mark.parametrize("name", ["F1", "F2", "F3"])
def test_decomposition_identity(fixtures, name):
    for M in _modules(fixtures[name]):
        res = resolve(M, 7)
        for L in (lift(res), perturbed_lift(res, seed=3)):
            tt = square_decompose(L, 7)
            for i in range(2, 8):
                assert decomposition_holds(L, tt, i)


@pytest.mark.parametrize("name", ["F1", "F2", "F3"])
def test_action_commutes_on_ext(fixtures, name):
    R = fixtures[name]
    p = R.p
    for M in _modules(R):
        chi = eisenbud_action(M, 9).chi
        for i in range(len(chi[0]) - 2):
            for j in range(R.c):
                for k in range(R.c):
                    a = (chi[j][i + 2].astype(object) @ chi[k][i].astype(object)) % p
                    b = (chi[k][i + 2].astype(object) @ chi[j][i].astype(object)) % p
                    assert np.array_equal(a, b)


@pytest.mark.parametrize("name", ["F2", "F3"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_action_independent_of_lift(fixtures, name, seed):
    for M in _modules(fixtures[name]):
        res = resolve(M, 8)
        base = action_on_ext(square_decompose(lift(res), 8), res.betti()[:9])
        other = action_on_ext(square_decompose(perturbed_lift(res, seed), 8), res.betti()[:9])
        for j in range(fixtures[name].c):
            for a, b in zip(base.chi[j], other.chi[j]):
                assert np.array_equal(a % fixtures[name].p, b % fixtures[name].p)


def test_chain_map_examples(F1, F2):
    k1 = residue_field(F1)
    one = F1.T.one()
    f = chain_map_of(one, k1)
    assert f.lift == HomElement.identity(f.source).lift
    t1 = F1.T.gen(0)
    g = chain_map_of(t1, k1)
    assert g.is_homomorphism() and not g.is_stably_zero()
    x, _ = F2.Q.gens()
    _, t2 = F2.T.gens()
    assert chain_map_of(t2, cyclic(F2, x)).is_stably_zero()


def test_chain_map_window_check(F2):
    t1, _ = F2.T.gens()
    with pytest.raises(WindowTooShort):
        chain_map_of(t1 ** 3, residue_field(F2), window=5)


@pytest.mark.parametrize("name", ["F2", "F3"])
def test_chain_map_of_product_is_composition(fixtures, name):
    R = fixtures[name]
    t = R.T.gens()
    for M in _modules(R):
        for eta, mu in ((t[0], t[1]), (t[1], t[1]), (t[0], t[0] + t[1])):
            whole = chain_map_of(eta * mu, M)
            comp = chain_map_of(eta, M).compose(syzygy_map(mu, M, 2))
            assert whole.is_homomorphism() and comp.is_homomorphism()
            assert (whole - comp).is_stably_zero()
