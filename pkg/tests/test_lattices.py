import itertools
import math
import warnings

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from chowkit.errors import PreconditionError
from chowkit.lattices import (
    IntegerLattice,
    compare_conventions,
    congruence_sublattice,
    ff_coefficients,
    ff_picard_lattice,
    hermite_normal_form,
    linearization_exponents,
    quotient_invariants,
    smith_diagonal,
    smith_invariants,
)


def residues(coeffs, modulus):
    """Brute force: the set of points of the lattice inside the box [0, modulus)^n."""
    n = len(coeffs)
    return {
        v for v in itertools.product(range(modulus), repeat=n)
        if sum(c * x for c, x in zip(coeffs, v)) % modulus == 0
    }


def lattice_residues(lattice, modulus):
    return {v for v in itertools.product(range(modulus), repeat=lattice.ambient_rank) if lattice.contains(v)}


def sympy_invariants(rows):
    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return sorted(d for d in diag if d)


def test_congruence_paper_case():
    lat = congruence_sublattice((2, 3), 5)
    assert lat.contains((1, 1)) and lat.contains((0, 5))
    assert not lat.contains((1, 0))
    assert lat.index() == 5
    assert lat.basis == ((1, 1), (0, 5))
    assert lat == congruence_sublattice((3, 2), 5)


def test_congruence_trivial_cases():
    assert congruence_sublattice((1, 0), 1) == IntegerLattice.full(2)
    with pytest.raises(PreconditionError):
        congruence_sublattice((), 3)
    with pytest.raises(PreconditionError):
        congruence_sublattice((1, 2), 0)


@pytest.mark.parametrize("modulus", range(1, 13))
def test_congruence_against_enumeration(modulus, rng):
    for _ in range(6):
        coeffs = tuple(rng.randint(-15, 15) for _ in range(rng.randint(1, 3)))
        if len(coeffs) == 3 and modulus > 8:
            coeffs = coeffs[:2]
        lat = congruence_sublattice(coeffs, modulus)
        assert lattice_residues(lat, modulus) == residues(coeffs, modulus)
        g = math.gcd(modulus, math.gcd(*coeffs))
        assert lat.index() == modulus // g
        assert math.prod(smith_invariants(lat, lat.ambient_rank)) == lat.index()


def test_hnf_is_canonical(rng):
    for _ in range(40):
        rows = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(rng.randint(1, 4))]
        hnf = hermite_normal_form(rows, 3)
        shuffled = [list(r) for r in rows]
        rng.shuffle(shuffled)
        mixed = shuffled + [[a + 2 * b for a, b in zip(shuffled[0], shuffled[-1])]]
        assert hermite_normal_form(mixed, 3) == hnf
        pivots = [next(j for j, a in enumerate(r) if a) for r in hnf]
        assert pivots == sorted(set(pivots))
        for i, row in enumerate(hnf):
            p = pivots[i]
            assert row[p] > 0
            assert all(0 <= hnf[k][p] < row[p] for k in range(i))


def test_smith_examples():
    assert smith_invariants(IntegerLattice.from_generators([[108]], 1), 1) == [108]
    assert quotient_invariants([[78, 98]], 2) == [2, 0]
    assert smith_invariants(IntegerLattice.full(3), 3) == [1, 1, 1]


def test_smith_against_sympy(rng):
    for _ in range(40):
        rows = [[rng.randint(-20, 20) for _ in range(3)] for _ in range(rng.randint(1, 3))]
        assert sorted(d for d in smith_diagonal(rows)) == sympy_invariants(rows)


def test_smith_divisibility(rng):
    for _ in range(40):
        rows = [[rng.randint(-30, 30) for _ in range(4)] for _ in range(4)]
        d = smith_diagonal(rows)
        assert all(b % a == 0 for a, b in zip(d, d[1:]))


@given(st.integers(1, 8), st.integers(1, 6), st.integers(2, 9))
def test_linearization_identity(d, m, n):
    if m >= n:
        return
    k, p = linearization_exponents(d, m, n)
    assert k * m * d == p * (n + 1)
    assert k * m * d == math.lcm(n + 1, m * d)


def test_linearization_examples():
    assert linearization_exponents(4, 1, 3) == (1, 1)
    assert linearization_exponents(2, 3, 5) == (1, 1)
    assert linearization_exponents(2, 1, 3) == (2, 1)
    with pytest.raises(PreconditionError):
        linearization_exponents(2, 3, 3)


def test_ff_conventions_agree_on_234():
    report = compare_conventions(2, 3, 4)
    assert report["agree"]
    lat = ff_picard_lattice(2, 3, 4)
    assert lat.contains((1, 1)) and lat.contains((0, 5))
    assert ff_coefficients(2, 3, "proof") == (3, 2)
    assert ff_coefficients(2, 3, "statement") == (2, 3)
    with pytest.raises(PreconditionError):
        ff_coefficients(2, 3, "other")


def test_disagreement_detector_synthetic():
    a, b = congruence_sublattice((1, 2), 4), congruence_sublattice((2, 1), 4)
    assert a != b
    assert lattice_residues(a, 4) == residues((1, 2), 4)
    assert lattice_residues(b, 4) == residues((2, 1), 4)
    assert residues((1, 2), 4) != residues((2, 1), 4)
    # (a, b, n) = (1, 2, 3) gives exactly these two congruences mod 4
    with pytest.warns(UserWarning, match="disagree"):
        report = compare_conventions(1, 2, 3)
    assert not report["agree"]
    assert report["proof"] == b and report["statement"] == a


def test_no_warning_when_conventions_agree():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        compare_conventions(2, 3, 4)


def test_lattice_json_and_coordinates():
    lat = congruence_sublattice((2, 3), 5)
    assert lat.to_json() == {"ambient_rank": 2, "basis": [[1, 1], [0, 5]], "index": 5}
    assert lat.coordinates((98, 78)) == [98, -4]
    with pytest.raises(PreconditionError):
        lat.coordinates((1, 0))
