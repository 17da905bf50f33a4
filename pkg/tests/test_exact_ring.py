import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chowkit.errors import PreconditionError, RingMismatchError
from chowkit.exact_ring import (
    ChowRing,
    Monomial,
    Relation,
    bernoulli_numbers,
    exp_series,
    from_json,
    normal_form,
    todd_factor,
)
from chowkit.varieties import grassmannian_lines_in_p3, product, projective_space

from conftest import random_class, random_homogeneous, small_fractions

P3 = projective_space(3)
GR = grassmannian_lines_in_p3()
RINGS = [P3, GR, product(P3, GR), product(projective_space(1), projective_space(2, "u"))]


def test_monomial_drops_zero_exponents():
    m = Monomial({"t": 2, "s": 0})
    assert m.items == (("t", 2),)
    assert Monomial({"a": 1}) * Monomial({"a": 2, "b": 1}) == Monomial({"a": 3, "b": 1})
    with pytest.raises(PreconditionError):
        Monomial({"t": -1})


def test_add_examples():
    t = P3.gen("t")
    assert t + P3.zero == t
    assert (t + (-1) * t).is_zero()
    s1 = GR.gen("s1")
    assert 10 * s1 + 10 * s1 == 20 * s1


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        P3.gen("t") + GR.gen("s1")


def test_truncation_in_p3():
    t = P3.gen("t")
    assert (t * t**3).is_zero()
    assert (t**5).is_zero()
    assert str(t**3) == "t^3"


def test_grassmannian_reductions():
    s1, s2 = GR.gens()
    assert s1 * s1**2 == 2 * s1 * s2
    assert s1**2 * s1**2 == 2 * s2**2
    assert s1**2 * s2 == s2**2
    assert (s2**3).is_zero()


def test_relations_must_decrease():
    with pytest.raises(PreconditionError):
        # tail monomial bigger than the lead in lex order
        ChowRing(
            (("a", 1), ("b", 1)),
            (Relation(Monomial({"b": 2}), ((Monomial({"a": 2}), Fraction(1)),)),),
            2,
        )


def test_relation_must_be_homogeneous():
    with pytest.raises(PreconditionError):
        ChowRing((("a", 1),), (Relation(Monomial({"a": 2}), ((Monomial({"a": 1}), Fraction(1)),)),), 2)


def test_max_dim_env(monkeypatch):
    monkeypatch.setenv("CHOWKIT_MAX_DIM", "5")
    with pytest.raises(PreconditionError):
        projective_space(6)
    projective_space(5)


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.label)
def test_commutative_associative(ring, rng):
    for _ in range(15):
        a, b, c = (random_class(rng, ring) for _ in range(3))
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.label)
def test_normal_form_idempotent_and_multiplicative(ring, rng):
    for _ in range(15):
        a, b = random_class(rng, ring), random_class(rng, ring)
        assert normal_form(normal_form(a)) == normal_form(a)
        assert normal_form(a * b) == normal_form(normal_form(a) * normal_form(b))
        assert all(ring.is_normal(m) for m in (a * b).terms)
        assert all(ring.degree_of(m) <= ring.dimension for m in (a * b).terms)


def test_reduction_against_schubert_table():
    # Schubert basis of Gr(2,4): 1, sigma1, sigma11, sigma2, sigma21, sigma22 with
    # s1 = sigma1, s2 = sigma11 in terms of the quotient bundle; Pieri gives
    # sigma1^2 = sigma2 + sigma11, sigma1*sigma11 = sigma21 = sigma1*sigma2, sigma1*sigma21 = sigma22.
    s1, s2 = GR.gens()
    sigma2 = s1**2 - s2
    sigma21 = s1 * s2
    sigma22 = s2**2
    assert s1 * sigma2 == sigma21
    assert s1 * s2 == sigma21
    assert s1 * sigma21 == sigma22
    assert sigma2 * s2 == GR.zero
    assert sigma2 * sigma2 == sigma22


def test_exp_series_examples():
    t = P3.gen("t")
    assert exp_series(P3.zero) == P3.one
    assert str(exp_series(4 * t)) == "1 + 4*t + 8*t^2 + 32/3*t^3"
    with pytest.raises(PreconditionError):
        exp_series(P3.one + t)


def test_exp_series_oracle_taylor():
    t = P3.gen("t")
    for c in range(-3, 4):
        expected = sum((Fraction(c**k, math.factorial(k)) * t**k for k in range(4)), P3.zero)
        assert exp_series(c * t) == expected


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.label)
def test_exp_group_law(ring, rng):
    for _ in range(10):
        a = random_homogeneous(rng, ring, 1)
        b = random_class(rng, ring, range(1, ring.dimension + 1))
        assert exp_series(a) * exp_series(-a) == ring.one
        assert exp_series(a + b) == exp_series(a) * exp_series(b)


def test_bernoulli():
    b = bernoulli_numbers(8)
    assert b[:5] == (1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30))
    assert b[6] == Fraction(1, 42) and b[8] == Fraction(-1, 30)


def test_todd_factor_examples():
    t = P3.gen("t")
    assert todd_factor(P3.zero) == P3.one
    assert str(todd_factor(t)) == "1 + 1/2*t + 1/12*t^2"
    with pytest.raises(PreconditionError):
        todd_factor(t + t**2)


def test_todd_factor_series_in_high_dimension():
    p = projective_space(6)
    x = p.gen("t")
    expected = p.one + x / 2 + x**2 / 12 - x**4 / 720 + x**6 / 30240
    assert todd_factor(x) == expected


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.label)
def test_todd_factor_identity(ring, rng):
    for _ in range(10):
        x = random_homogeneous(rng, ring, 1)
        assert todd_factor(x) * (ring.one - exp_series(-x)) == x


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_exp_additive_on_p1xp2(a, b):
    ring = RINGS[3]
    t, u = ring.gens()
    assert exp_series(a * t + b * u) == exp_series(a * t) * exp_series(b * u)


@given(small_fractions, small_fractions, small_fractions)
def test_coefficients_are_exact(a, b, c):
    s1, s2 = GR.gens()
    x = a * s1 + b * s1**2 + c * s2
    y = x * x
    for coeff in y.terms.values():
        assert isinstance(coeff, Fraction)
    assert y == x**2


def test_denominators_bounded_by_factorials():
    # exp and Todd series of integral degree-1 classes only divide by factorials up to the dimension
    bound = math.factorial(P3.dimension) * 720
    t = P3.gen("t")
    for c in range(-4, 5):
        for cls in (exp_series(c * t), todd_factor(c * t)):
            assert all(bound % v.denominator == 0 for v in cls.terms.values())


def test_json_roundtrip(rng):
    ring = RINGS[2]
    for _ in range(5):
        a = random_class(rng, ring)
        assert from_json(ring, a.to_json()) == a
    assert (8 * P3.gen("t") ** 2).to_json() == {"terms": [{"mono": {"t": 2}, "coeff": "8/1"}]}


def test_inverse(rng):
    for ring in RINGS:
        for _ in range(5):
            a = ring.one + random_class(rng, ring, range(1, ring.dimension + 1))
            assert a * a.inverse() == ring.one
    with pytest.raises(PreconditionError):
        P3.gen("t").inverse()


def test_factored_string():
    from chowkit.varieties import free_ring

    ring = free_ring((("s1", 1), ("s2", 2)), 4)
    s1, s2 = ring.gens()
    assert (220 * s1**3 - 220 * s1 * s2).factored_str() == "220*(s1^3 - s1*s2)"
    assert (55 * s1**2 - 20 * s2).factored_str() == "5*(11*s1^2 - 4*s2)"
    assert str(55 * s1**2 - 20 * s2) == "55*s1^2 - 20*s2"
    assert (10 * s1).factored_str() == "10*s1"
    assert (s1 / 3 - s2 / 6).factored_str() == "1/6*(2*s1 - s2)"
