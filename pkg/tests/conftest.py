import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from chowkit.varieties import grassmannian_lines_in_p3, product, projective_space

settings.register_profile(
    "chowkit", derandomize=True, max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("chowkit")

SEED = 20240611


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def gr():
    return grassmannian_lines_in_p3()


@pytest.fixture(scope="session")
def p3():
    return projective_space(3)


@pytest.fixture(scope="session")
def p3_gr(p3, gr):
    return product(p3, gr)


small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def random_class(r, ring, degrees=None, max_coeff=5):
    """Random class with small integer or half-integer coefficients on normal monomials."""
    if degrees is None:
        degrees = range(ring.dimension + 1)
    terms = {}
    for d in degrees:
        for m in ring.normal_monomials(d):
            if r.random() < 0.7:
                terms[m] = Fraction(r.randint(-max_coeff, max_coeff), r.choice((1, 1, 2)))
    return ring.element(terms)


def random_homogeneous(r, ring, degree, max_coeff=5):
    return random_class(r, ring, [degree], max_coeff)


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1].removeprefix("test_")
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{name}: {_acceptance[name]}")
