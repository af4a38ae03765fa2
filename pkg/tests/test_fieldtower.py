from fractions import Fraction

import pytest

from weilspin.fieldtower import (
    CMType,
    Embedding,
    TowerSpec,
    enumerate_cm_types,
    f_embeddings,
    k_embeddings,
    trace_to_Q,
)

from conftest import rand_elem


def test_tower_validation():
    TowerSpec(1, 1)
    TowerSpec(2, Fraction(3, 7))
    TowerSpec(5, 2)
    with pytest.raises(ValueError):
        TowerSpec(4, 1)  # not square-free
    with pytest.raises(ValueError):
        TowerSpec(12, 1)
    with pytest.raises(ValueError):
        TowerSpec(2, 0)
    with pytest.raises(ValueError):
        TowerSpec(2, -3)
    assert TowerSpec(1, 1).e == 2
    assert TowerSpec(2, 1).e == 4


def test_defining_relations():
    t = TowerSpec(2, 3)
    assert t.sqrt_minus_q() * t.sqrt_minus_q() == t.elem(-3)
    assert t.sqrt_p() * t.sqrt_p() == t.elem(2)
    # iota fixes F pointwise and negates the sqrt(-q) pair
    assert t.elem(3, 0, 2, 0).iota() == t.elem(3, 0, -2, 0)
    assert t.sqrt_p().iota() == t.sqrt_p()


def test_field_laws(rng):
    for tower in (TowerSpec(1, 2), TowerSpec(2, 1), TowerSpec(3, Fraction(5, 2))):
        for _ in range(30):
            a, b, c = (rand_elem(rng, tower) for _ in range(3))
            assert a * b == b * a
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert (a * b).iota() == a.iota() * b.iota()
            assert a.iota().iota() == a
            assert (a.iota() == a) == a.in_subfield("F")
            if not a.is_zero():
                assert a * a.inv() == tower.one()
                assert (tower.one() / a) * a == tower.one()
        with pytest.raises(ZeroDivisionError):
            tower.zero().inv()


def test_p1_degenerate_coordinates():
    t = TowerSpec(1, 5)
    # sqrt(1) folds into the rational coordinate
    assert t.sqrt_p() == t.one()
    assert t.elem(1, 2, 3, 4) == t.elem(3, 0, 7, 0)


def test_traces():
    t2 = TowerSpec(2, 1)
    assert trace_to_Q(t2.sqrt_p(), "F") == 0
    assert trace_to_Q(t2.one(), "F") == 2
    assert trace_to_Q(t2.sqrt_minus_q(), "K") == 0
    assert trace_to_Q(t2.elem(3), "K") == 12
    t1 = TowerSpec(1, 1)
    assert trace_to_Q(t1.one(), "F") == 1
    assert trace_to_Q(t1.sqrt_minus_q(), "K") == 0
    with pytest.raises(ValueError):
        trace_to_Q(t2.sqrt_minus_q(), "F")  # not in F


def test_norm_positivity(rng):
    for tower in (TowerSpec(1, 2), TowerSpec(2, 1), TowerSpec(5, Fraction(7, 3))):
        for _ in range(40):
            a = rand_elem(rng, tower)
            tr = trace_to_Q(a * a.iota(), "K")
            if a.is_zero():
                assert tr == 0
            else:
                assert tr > 0


def test_embeddings():
    t = TowerSpec(2, 1)
    embs = k_embeddings(t)
    assert len(embs) == 4
    # sigma o iota flips only the sign on sqrt(-q)
    for sigma in embs:
        x = t.elem(1, 2, 3, 4)
        assert sigma(x.iota()) == sigma.after_iota()(x)
        assert sigma.after_iota().sign_p == sigma.sign_p
        assert sigma.after_iota().sign_q == -sigma.sign_q
    assert len(k_embeddings(TowerSpec(1, 1))) == 2
    # embeddings are ring maps
    a, b = t.elem(1, 1, 0, 0), t.elem(0, 2, 1, 1)
    for sigma in embs:
        assert sigma(a * b) == sigma(a) * sigma(b)


@pytest.mark.parametrize("p,q,count", [(1, 1, 2), (1, 2, 2), (2, 1, 4), (3, 2, 4)])
def test_cm_type_count(p, q, count):
    tower = TowerSpec(p, q)
    types = enumerate_cm_types(tower)
    # independent oracle: choice functions over the F-embeddings
    assert len(types) == 2 ** len(f_embeddings(tower)) == count
    assert len(set(types)) == count


def test_cm_type_conjugation():
    for tower in (TowerSpec(1, 1), TowerSpec(2, 1)):
        for T in enumerate_cm_types(tower):
            assert T.conjugate().conjugate() == T
            assert T.conjugate() != T  # fixed-point free
            assert T.overlap(T) == tower.e // 2
            assert T.overlap(T.conjugate()) == 0


def test_json_round_trip():
    t = TowerSpec(2, Fraction(3, 5))
    assert TowerSpec.from_json(t.to_json()) == t
