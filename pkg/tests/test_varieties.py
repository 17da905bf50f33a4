from fractions import Fraction

import pytest

from chowkit.errors import PreconditionError
from chowkit.varieties import (
    BundleData,
    free_ring,
    grassmannian_lines_in_p3,
    integrate,
    point,
    poincare_pairing,
    product,
    projective_bundle,
    projective_space,
    pullback,
    pushforward_projection,
    quotient_bundle,
    tautological_subbundle,
)

from conftest import random_class


def gaussian_binomial_coeffs(n, k):
    """Coefficients of the q-binomial [n choose k]_q, by the q-Pascal rule."""
    if k == 0 or k == n:
        return [1]
    a = gaussian_binomial_coeffs(n - 1, k - 1)
    b = gaussian_binomial_coeffs(n - 1, k)
    out = [0] * (k * (n - k) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return out


def test_projective_space():
    p = projective_space(3)
    t = p.gen("t")
    assert (t**4).is_zero()
    assert integrate(t**3) == 1
    assert [integrate(t**k) for k in range(3)] == [0, 0, 0]
    assert p.graded_ranks() == [1, 1, 1, 1]
    assert projective_space(34).dimension == 34
    with pytest.raises(PreconditionError):
        projective_space(0)


def test_grassmannian_integrals(gr):
    s1, s2 = gr.gens()
    assert integrate(s1**4) == 2
    assert integrate(s1**2 * s2) == 1
    assert integrate(s2**2) == 1
    assert integrate(s1**3 * s1) == integrate(2 * s1 * s2 * s1) == 2


def test_grassmannian_ranks_match_gaussian_binomial(gr):
    assert gr.graded_ranks() == gaussian_binomial_coeffs(4, 2) == [1, 1, 2, 1, 1]


def test_poincare_pairing(gr):
    assert [m.render() for m in gr.normal_monomials(2)] == ["s1^2", "s2"]
    assert poincare_pairing(gr, 2) == [[2, 1], [1, 1]]
    assert poincare_pairing(gr, 1) == [[1]]


def test_integrate_fourth_chern_class_of_quartic_sections(gr):
    s1, s2 = gr.gens()
    assert integrate(5 * (143 * s1**4 - 264 * s1**2 * s2 + 42 * s2**2)) == 320


def test_integrate_ignores_lower_degrees(gr):
    s1, s2 = gr.gens()
    assert integrate(gr.one + s1 + s2**2) == 1


def test_integrate_needs_point():
    with pytest.raises(PreconditionError):
        integrate(free_ring((("x", 1),), 2).gen("x") ** 2)


def test_product(p3, gr):
    prod = product(p3, gr)
    assert prod.dimension == 7
    t, s1, s2 = prod.gens()
    assert integrate(t**3 * s2**2) == 1
    assert (s2**3).is_zero() and (t**4).is_zero()
    p1p1 = product(projective_space(1), projective_space(1))
    assert p1p1.names == ("t", "t_2")
    a, b = p1p1.gens()
    assert integrate(a * b) == 1
    assert (a**2).is_zero() and (b**2).is_zero()


def test_product_graded_ranks(p3, gr):
    ranks = product(p3, gr).graded_ranks()
    expected = [0] * 8
    for i in range(4):
        for j, c in enumerate(gr.graded_ranks()):
            expected[i + j] += c
    assert ranks == expected


def test_projective_bundle_over_point():
    for n in (1, 2, 4):
        pb = projective_bundle(point(), BundleData.trivial(point(), n + 1), "t")
        assert pb == projective_space(n)


def test_projective_bundle_trivial_is_product(gr):
    pb = projective_bundle(gr, BundleData.trivial(gr, 35), "h")
    prod = product(projective_space(34, "h"), gr)
    assert pb.dimension == prod.dimension == 38
    assert pb.graded_ranks() == prod.graded_ranks()
    h, s1, s2 = pb.gens()
    assert integrate(h**34 * s1**4) == 2
    assert (h**35).is_zero()


def test_projective_bundle_of_tautological_subbundle(gr):
    T = tautological_subbundle(gr)
    s1, s2 = gr.gens()
    assert T.c(1) == -s1
    assert T.c(2) == s1**2 - s2
    assert T.total() * quotient_bundle(gr).total() == gr.one
    pt = projective_bundle(gr, T, "h")
    h = pt.gen("h")
    c1, c2 = (pullback(c, pt) for c in (T.c(1), T.c(2)))
    assert h**2 == -c1 * h - c2
    assert pt.graded_ranks() == [1, 2, 3, 3, 2, 1]
    assert integrate(h * pullback(s2**2, pt)) == 1


def test_pushforward_examples(p3, gr):
    prod = product(p3, gr)
    t, s1, s2 = prod.gens()
    assert pushforward_projection(t**3 * s1, gr) == gr.gen("s1")
    assert pushforward_projection(t**2 * s2, gr).is_zero()
    assert pushforward_projection(t**3 * s1, 1) == gr.gen("s1")
    assert pushforward_projection(t**2 * s2**2, p3) == p3.gen("t") ** 2


def test_pushforward_rejects_foreign_factor(p3, gr):
    with pytest.raises(PreconditionError):
        pushforward_projection(product(p3, gr).one, projective_space(2))


def test_projection_formula(rng, p3, gr):
    prod = product(p3, gr)
    for _ in range(25):
        alpha = random_class(rng, gr)
        beta = random_class(rng, prod)
        lhs = pushforward_projection(pullback(alpha, prod) * beta, gr)
        rhs = alpha * pushforward_projection(beta, gr)
        assert lhs == rhs


def test_integral_preserved_by_pushforward(rng, p3, gr):
    prod = product(p3, gr)
    for _ in range(20):
        a = random_class(rng, prod, [7])
        assert integrate(pushforward_projection(a, gr)) == integrate(a)
        assert integrate(pushforward_projection(a, p3)) == integrate(a)


def test_bundle_checks(gr):
    s1, s2 = gr.gens()
    with pytest.raises(PreconditionError):
        BundleData(gr, 2, (s2,))
    with pytest.raises(PreconditionError):
        projective_bundle(gr, BundleData(gr, 0, ()), "h")
    with pytest.raises(PreconditionError):
        projective_bundle(gr, quotient_bundle(gr), "s1")


def test_pullback_specializes_free_ring(gr):
    free = free_ring((("s1", 1), ("s2", 2)), 4)
    a, b = free.gens()
    assert pullback(a**3, gr) == 2 * gr.gen("s1") * gr.gen("s2")
    with pytest.raises(PreconditionError):
        pullback(a, projective_space(2))


def test_ring_json(gr):
    payload = gr.to_json()
    assert payload["dimension"] == 4
    assert payload["point"]["mono"] == {"s2": 2}
    assert payload["relations"][0]["lead"] == {"s1": 3}
    assert payload["point"]["integral"] in ("1/1", "1", 1, Fraction(1))
