from fractions import Fraction

import pytest

from weilspin import linalg
from weilspin.exteralg import (
    GeneratorSpace,
    Multivector,
    contract,
    contract_gen,
    exp_even,
    kunneth,
    s_pairing,
    tau,
    wedge,
)
from weilspin.fieldtower import TowerSpec

from conftest import rand_mv


@pytest.fixture()
def sp2(tiny_tower):
    return GeneratorSpace(["x1", "x2"], tiny_tower)


def test_wedge_basics(sp2):
    x1, x2 = sp2.gen(0), sp2.gen(1)
    assert wedge(sp2.one(), x1) == x1
    assert wedge(x1, x1).is_zero()
    assert wedge(x2, x1) == -wedge(x1, x2)


def test_wedge_associative(rng):
    sp = GeneratorSpace([f"g{i}" for i in range(5)], TowerSpec(2, 1))
    for _ in range(15):
        a, b, c = (rand_mv(rng, sp) for _ in range(3))
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_contract(sp2):
    x1, x2 = sp2.gen(0), sp2.gen(1)
    top = wedge(x1, x2)
    assert contract([1, 0], top) == x2
    assert contract([0, 1], top) == -x1
    assert contract([1, 0], sp2.one()).is_zero()
    with pytest.raises(ValueError):
        contract([1], top)


def test_contract_is_graded_derivation(rng):
    sp = GeneratorSpace([f"g{i}" for i in range(5)], TowerSpec(1, 2))
    for _ in range(15):
        a, b = rand_mv(rng, sp), rand_mv(rng, sp)
        th = [rng.randint(-2, 2) for _ in range(sp.m)]
        assert contract(th, contract(th, a)).is_zero()
        lhs = contract(th, wedge(a, b))
        rhs = sp.zero()
        for k in a.degrees():
            part = a.degree_part(k)
            term = wedge(part, contract(th, b))
            rhs = rhs + wedge(contract(th, part), b) + (-term if k & 1 else term)
        assert lhs == rhs


def test_tau(sp2):
    x1, x2 = sp2.gen(0), sp2.gen(1)
    assert tau(sp2.one()) == sp2.one()
    assert tau(wedge(x1, x2)) == -wedge(x1, x2)
    a = sp2.one() + x1 + wedge(x1, x2)
    assert tau(tau(a)) == a


def test_tau_on_secant_halves():
    # alpha has degrees 0 and 4, beta degrees 2 and 6: tau(alpha+beta) = alpha-beta
    t = TowerSpec(1, 2)
    sp = GeneratorSpace([f"x{i}" for i in range(1, 7)], t)
    theta = Multivector(sp, {
        0b001001: t.one(), 0b010010: t.one(), 0b100100: t.one(),
    })
    th2 = wedge(theta, theta)
    th3 = wedge(th2, theta)
    alpha = sp.one() - th2  # q/2 = 1
    beta = theta - th3.scale(Fraction(1, 3))  # q/6 = 1/3
    assert tau(alpha + beta) == alpha - beta


def test_s_pairing_examples(sp2, tiny_tower):
    x1, x2 = sp2.gen(0), sp2.gen(1)
    top = wedge(x1, x2)
    assert s_pairing(sp2.one(), top) == tiny_tower.one()
    # hand evaluation: tau(x1^x2) = -x1^x2, so the coefficient of top is -1
    assert s_pairing(top, sp2.one()) == tiny_tower.elem(-1)


@pytest.mark.parametrize("m,symmetric", [(2, False), (4, True), (6, False)])
def test_s_pairing_symmetry_and_rank(m, symmetric, rng):
    # m = 2n generators: symmetric for even n, antisymmetric for odd n
    t = TowerSpec(1, 1)
    sp = GeneratorSpace([f"g{i}" for i in range(m)], t)
    dim = 1 << m
    gram = []
    for i in range(dim):
        a = Multivector(sp, {i: t.one()})
        gram.append([s_pairing(a, Multivector(sp, {j: t.one()})) for j in range(dim)])
    sign = 1 if symmetric else -1
    for i in range(dim):
        for j in range(dim):
            assert gram[i][j] == (gram[j][i] if sign > 0 else -gram[j][i])
    assert linalg.rank(gram, t) == dim


def test_exp_even(sp2, tiny_tower):
    assert exp_even(sp2.zero()) == sp2.one()
    th = wedge(sp2.gen(0), sp2.gen(1))
    e = exp_even(th.scale(tiny_tower.sqrt_minus_q()))
    assert e == sp2.one() + th.scale(tiny_tower.sqrt_minus_q())
    with pytest.raises(ValueError):
        exp_even(sp2.gen(0))  # odd degree
    with pytest.raises(ValueError):
        exp_even(sp2.one())  # degree-0 component


def test_exp_even_power_series_coefficients():
    # arity 6: exp(rq Theta) = alpha + rq beta with the stated factorials
    q = 2
    t = TowerSpec(1, q)
    sp = GeneratorSpace([f"x{i}" for i in range(1, 7)], t)
    theta = Multivector(sp, {0b001001: t.one(), 0b010010: t.one(), 0b100100: t.one()})
    e = exp_even(theta.scale(t.sqrt_minus_q()))
    th2 = wedge(theta, theta)
    th3 = wedge(th2, theta)
    alpha = sp.one() + th2.scale(Fraction(-q, 2))
    beta = theta + th3.scale(Fraction(-q, 6))
    assert e == alpha + beta.scale(t.sqrt_minus_q())


def test_exp_inverse(rng):
    sp = GeneratorSpace([f"g{i}" for i in range(6)], TowerSpec(1, 3))
    for _ in range(8):
        a = rand_mv(rng, sp, 5).degree_part(2)
        assert wedge(exp_even(a), exp_even(-a)) == sp.one()


def test_kunneth(tiny_tower):
    a_sp = GeneratorSpace(["x1", "x2"], tiny_tower)
    b_sp = GeneratorSpace(["x1'", "x2'"], tiny_tower)
    b = b_sp.gen(0) + wedge(b_sp.gen(0), b_sp.gen(1))
    emb = kunneth(a_sp.one(), b)
    assert sorted(emb.terms) == [0b0100, 0b1100]
    k = kunneth(a_sp.gen(0), b_sp.gen(0))
    assert list(k.terms) == [0b0101]


def test_kunneth_koszul_against_wedge(rng, tiny_tower):
    # the embedding collects no sign; products of embedded odd classes do
    a_sp = GeneratorSpace(["u1", "u2"], tiny_tower)
    b_sp = GeneratorSpace(["v1", "v2"], tiny_tower)
    joint = GeneratorSpace(a_sp.labels + b_sp.labels, tiny_tower)
    for _ in range(10):
        a, b = rand_mv(rng, a_sp, 3), rand_mv(rng, b_sp, 3)
        direct = kunneth(a, b, joint)
        via_wedge = wedge(
            Multivector(joint, dict(a.terms)),
            Multivector(joint, {m << 2: c for m, c in b.terms.items()}),
        )
        assert direct == via_wedge
    # sign-correct product of odd top classes
    ta = wedge(a_sp.gen(0), a_sp.gen(1))
    odd_a, odd_b = a_sp.gen(1), b_sp.gen(0)
    lhs = wedge(kunneth(odd_a, b_sp.one(), joint), kunneth(a_sp.one(), odd_b, joint))
    assert lhs == kunneth(odd_a, odd_b, joint)
    rhs = wedge(kunneth(a_sp.one(), odd_b, joint), kunneth(odd_a, b_sp.one(), joint))
    assert rhs == -kunneth(odd_a, odd_b, joint)


def test_serialization_is_mask_sorted(sp2, tiny_tower):
    mv = wedge(sp2.gen(0), sp2.gen(1)) + sp2.one()
    data = mv.to_json()
    assert [d["mask"] for d in data] == [0, 3]
