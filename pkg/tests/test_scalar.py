"""Cyclotomic field arithmetic: frozen values and algebraic laws."""
from __future__ import annotations

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from qsl21.scalar import Cyc, RootConfig, cyclotomic_poly


def test_cyclotomic_poly_small():
    assert cyclotomic_poly(1) == {1: 1, 0: -1}
    assert cyclotomic_poly(2) == {1: 1, 0: 1}
    assert cyclotomic_poly(3) == {2: 1, 1: 1, 0: 1}
    assert cyclotomic_poly(4) == {2: 1, 0: 1}
    assert cyclotomic_poly(6) == {2: 1, 1: -1, 0: 1}
    assert cyclotomic_poly(9) == {6: 1, 3: 1, 0: 1}
    # inflation: Phi_245 = Phi_35(x^7)
    p35 = cyclotomic_poly(35)
    assert cyclotomic_poly(245) == {7 * e: c for e, c in p35.items()}


def test_q_power_identity_and_order():
    cfg = RootConfig(3)
    assert cfg.q_power(0) == 1
    assert cfg.q_power(3) == 1
    assert cfg.q_power(1) * cfg.q_power(2) == 1


def test_q_power_fractional():
    cfg = RootConfig(3, denomBound=3)
    z9 = cfg.q_power(mpq(1, 3))
    assert z9**9 == 1
    assert z9**3 == cfg.q_power(1)
    with pytest.raises(ValueError):
        cfg.q_power(mpq(1, 2))


def test_phi5_relation():
    cfg = RootConfig(5)
    total = cfg.zero()
    for i in range(5):
        total = total + cfg.q_power(i)
    assert total.is_zero()


def test_brace_values():
    cfg = RootConfig(3)
    assert cfg.brace(0).is_zero()
    x = mpq(5, 1)
    assert (cfg.brace(-x) + cfg.brace(x)).is_zero()
    # {1} at l=3 is z3 - z3^2
    expect = Cyc.root_power(3, 1) - Cyc.root_power(3, 2)
    assert cfg.brace(1) == expect


@pytest.mark.parametrize("l", [3, 4, 5, 6, 7, 8])
def test_brace_lprime_vanishes(l):
    cfg = RootConfig(l)
    assert cfg.brace(cfg.lPrime).is_zero()


def test_qint_values():
    cfg = RootConfig(3)
    assert cfg.qint(1) == 1
    assert cfg.qint(0).is_zero()
    assert cfg.qint(2) == -1  # q + 1/q = -1 in Q(zeta_3)


def test_qint_expansion_matches_division():
    cfg = RootConfig(7)
    inv = cfg.brace(1).inverse()
    for m in range(-6, 7):
        assert cfg.qint(m) == cfg.brace(m) * inv


def test_qint_product_identity():
    # [m][n] = [n+m-1] + [n+m-3] + ... + [n-m+1]
    rng = random.Random(7)
    for l in (3, 5, 7, 8):
        cfg = RootConfig(l)
        for _ in range(5):
            n = rng.randrange(0, cfg.lPrime)
            m = rng.randrange(0, n + 1)
            rhs = cfg.zero()
            for i in range(m):
                rhs = rhs + cfg.qint(n + m - 1 - 2 * i)
            assert cfg.qint(m) * cfg.qint(n) == rhs


@pytest.mark.parametrize("l,expected", [(3, -6), (4, -4), (5, -10), (6, -6), (7, -14), (8, -8)])
def test_sum_of_squared_braces(l, expected):
    # sum_{m=0}^{l'-1} (q^{m+1} - q^{-m-1})^2 = -2 l'
    cfg = RootConfig(l)
    total = cfg.zero()
    for m in range(cfg.lPrime):
        b = cfg.q_power(m + 1) - cfg.q_power(-(m + 1))
        total = total + b * b
    assert total == expected
    assert expected == -2 * cfg.lPrime


def test_qparen_factorial():
    cfg5 = RootConfig(5)
    assert cfg5.qparen_factorial(0) == 1
    assert cfg5.qparen_factorial(1) == 1
    assert cfg5.qparen_factorial(2) == 1 + cfg5.q_power(1)


def test_inverse_law():
    cfg = RootConfig(5)
    b = cfg.brace(1)
    assert b * b.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        cfg.zero().inverse()


def _random_element(rng: random.Random, N: int, terms: int = 4) -> Cyc:
    c = {}
    for _ in range(terms):
        c[rng.randrange(N)] = mpq(rng.randrange(-9, 10), rng.randrange(1, 7))
    return Cyc(N, c)


def test_random_inverses():
    rng = random.Random(11)
    for _ in range(25):
        x = _random_element(rng, 21)
        if x.is_zero():
            continue
        assert x * x.inverse() == 1


def test_hidden_zero_detection():
    # 1 + z5 + z5^2 + z5^3 + z5^4 has a nonempty term dict but is zero
    x = Cyc(5, {i: mpq(1) for i in range(5)})
    assert x.c
    assert x.is_zero()
    assert x == Cyc.zero(5)


def test_embedding_and_order_mismatch():
    a = Cyc.root_power(3, 1)
    b = Cyc.root_power(9, 3)
    assert a == b  # zeta_3 = zeta_9^3
    assert (a + b) == 2 * b
    with pytest.raises(ValueError):
        _ = Cyc.root_power(4, 1) + Cyc.root_power(9, 1)


@settings(max_examples=40, deadline=None)
@given(
    a=st.integers(-30, 30), b=st.sampled_from([1, 3, 5, 15]),
    c=st.integers(-30, 30), d=st.sampled_from([1, 3, 5, 15]),
)
def test_q_power_homomorphism(a, b, c, d):
    cfg = RootConfig(4, denomBound=15)
    e1, e2 = mpq(a, b), mpq(c, d)
    assert cfg.q_power(e1) * cfg.q_power(e2) == cfg.q_power(e1 + e2)


def test_serialization_roundtrip_bulk():
    rng = random.Random(3)
    for _ in range(1000):
        N = rng.choice([3, 5, 9, 12, 21])
        x = _random_element(rng, N, terms=3)
        y = Cyc.from_obj(x.to_obj())
        assert y == x
        assert y.canon() == x.canon()


def test_serialization_is_canonical():
    x = Cyc(5, {4: mpq(1)})  # z5^4 = -1 - z5 - z5^2 - z5^3
    obj = x.to_obj()
    assert obj["order"] == 5
    assert obj["coeffs"] == ["-1", "-1", "-1", "-1"]


def test_root_config_validation():
    with pytest.raises(ValueError):
        RootConfig(2)
    assert RootConfig(7).lPrime == 7
    assert RootConfig(8).lPrime == 4
    assert RootConfig(6, 5).N == 30
