import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from logalg import (
    BilinearMetric,
    Ideal,
    Poly,
    PoissonStructure,
    VectorField,
    from_poisson,
    parse_poly,
)

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, ring=XYZ):
    return parse_poly(text, ring)


def V(coeffs, ring=XYZ):
    return VectorField.parse(coeffs, ring)


def exponents(n, dmax):
    if n == 0:
        return [()]
    return [(a,) + rest for a in range(dmax + 1) for rest in exponents(n - 1, dmax - a)]


def polys(ring=XYZ, max_deg=2, max_terms=4, coeff=3):
    """Random polynomials with small integer coefficients."""
    exps = exponents(len(ring), max_deg)
    term = st.tuples(st.sampled_from(exps), st.integers(-coeff, coeff))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((Poly.monomial(ring, e, c) for e, c in ts), Poly.zero(ring)))


def fields(ring=XYZ, max_deg=2, max_terms=3):
    return st.tuples(*[polys(ring, max_deg, max_terms) for _ in ring]).map(VectorField)


@pytest.fixture(scope="session")
def sl2_poisson():
    return PoissonStructure.from_upper([["2*y", "-2*z"], ["x"]], XYZ)


@pytest.fixture(scope="session")
def sl2(sl2_poisson):
    return from_poisson(sl2_poisson)


@pytest.fixture(scope="session")
def casimir():
    return P("x^2 + 4*y*z")


@pytest.fixture(scope="session")
def cone(casimir):
    return Ideal([casimir])


@pytest.fixture(scope="session")
def identity3():
    return BilinearMetric.identity(XYZ, 3)


# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
