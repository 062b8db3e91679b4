import threading
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import XY, XYZ, P, polys
from logalg.errors import ParseError, RingMismatchError, SingularMatrixError
from logalg.exact import (
    GREVLEX,
    LEX,
    GaussianRational,
    Ideal,
    MonomialOrder,
    Poly,
    RationalFunction,
    Submodule,
    conj,
    doubled_ring,
    embed,
    fraction_matrix_inverse,
    groebner_basis,
    ideal_member,
    module_equal,
    module_member,
    normal_form,
    nullspace,
    parse_poly,
    rref,
    syzygy_module,
)

GR = GaussianRational
rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20))
gaussians = st.builds(GR, rationals, rationals)


def to_sympy(p: Poly, syms):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        mono = sympy.Integer(1)
        for s, k in zip(syms, e):
            mono *= s ** k
        expr += (sympy.Rational(c.re.numerator, c.re.denominator)
                 + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)) * mono
    return sympy.expand(expr)


# -- Gaussian rationals ------------------------------------------------------

@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1


@given(gaussians)
def test_conjugation_is_an_involution(a):
    assert a.conjugate().conjugate() == a
    assert (a * a.conjugate()).is_real


def test_gaussian_printing():
    assert str(GR(1, 2)) == "1 + 2*i"
    assert str(GR(Fraction(1, 2))) == "1/2"
    assert str(GR(0, -1)) == "-i"


def test_lowest_terms():
    q = GR(Fraction(6, -4))
    assert q.re.denominator == 2 and q.re.numerator == -3


# -- polynomials -------------------------------------------------------------

def test_parse_and_print_canonical():
    assert str(P("4*y*z + x^2")) == "x^2 + 4*y*z"
    assert str(parse_poly("(1+2*i)*x", XY)) == "(1 + 2*i)*x"
    assert str(parse_poly("-i*x^2", XY)) == "-i*x^2"
    assert str(parse_poly("x/2", XY)) == "1/2*x"


@pytest.mark.parametrize("text", ["2x", "x y", "x^y", "x +", "(x", "x $ y", ""])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_poly(text, XY)


def test_unknown_variable_is_an_error():
    with pytest.raises(ParseError):
        parse_poly("w", XY)


def test_trailing_whitespace_is_fine():
    assert parse_poly("  x*y  ", XY) == parse_poly("x*y", XY)


@given(polys())
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), XYZ) == p


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


@given(polys(), polys())
def test_multiplication_matches_sympy(a, b):
    syms = sympy.symbols("x y z")
    assert sympy.expand(to_sympy(a * b, syms) - to_sympy(a, syms) * to_sympy(b, syms)) == 0


@given(polys(), polys())
def test_product_rule(a, b):
    for i in range(3):
        assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        parse_poly("x", XY) + P("x")


def test_doubled_ring_conjugation():
    ring = doubled_ring(XY)
    assert ring == ("x", "y", "xbar", "ybar")
    p = parse_poly("(1+i)*x*ybar + 3*y", ring)
    assert str(conj(p)) == str(parse_poly("(1-i)*xbar*y + 3*ybar", ring))
    assert conj(conj(p)) == p


@given(polys(XY))
def test_conj_involution_on_embedded(p):
    assert conj(conj(p)) == embed(p)
    assert conj(conj(conj(p))) == conj(p)


def test_monomial_orders():
    x2 = (2, 0, 0)
    yz = (0, 1, 1)
    assert GREVLEX.key(x2) > GREVLEX.key(yz)
    # grevlex: x*z^2 < y^3? both degree 3; last variable exponent decides
    assert GREVLEX.key((0, 3, 0)) > GREVLEX.key((1, 0, 2))
    assert LEX.key((1, 0, 2)) > LEX.key((0, 3, 0))
    assert MonomialOrder("grevlex", "top").module_key(1, x2) > MonomialOrder("grevlex", "top").module_key(0, yz)


# -- Groebner bases ----------------------------------------------------------

def test_single_generator_is_its_own_basis():
    assert groebner_basis([P("x^2 + 4*y*z")]).gb == (P("x^2 + 4*y*z"),)


def test_monomial_generators():
    assert groebner_basis([P("x"), P("y")]).gb == (P("x"), P("y"))


def test_xy_x2_basis():
    assert groebner_basis([P("x*y", XY), P("x^2", XY)], ring=XY).gb == (P("x^2", XY), P("x*y", XY))


def test_mixed_rings_rejected():
    with pytest.raises(RingMismatchError):
        groebner_basis([P("x", XY), P("x")])


@given(st.lists(polys(max_deg=2, max_terms=3), min_size=1, max_size=3))
def test_groebner_matches_sympy(gens):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    syms = sympy.symbols("x y z")
    ours = groebner_basis(gens).gb
    ref = sympy.groebner([to_sympy(g, syms) for g in gens], *syms, order="grevlex", domain="QQ_I")
    assert {sympy.expand(to_sympy(g, syms)) for g in ours} == {sympy.expand(g) for g in ref.exprs}


@given(st.lists(polys(max_deg=2, max_terms=3), min_size=1, max_size=3))
def test_groebner_idempotent(gens):
    first = groebner_basis(gens).gb
    assert groebner_basis(list(first), ring=XYZ).gb == first


def test_lex_order_basis():
    ideal = Ideal([P("x^2 + y"), P("x*y - 1")], order=LEX)
    syms = sympy.symbols("x y z")
    ref = sympy.groebner([to_sympy(g, syms) for g in ideal.gens], *syms, order="lex")
    assert {to_sympy(g, syms) for g in ideal.gb} == set(ref.exprs)


def test_normal_forms():
    xy = Ideal([P("x*y", XY)])
    assert normal_form(P("1 - x^2 - y^2", XY), xy) == P("1 - x^2 - y^2", XY)
    cone = Ideal([P("x^2 + 4*y*z")])
    assert normal_form(P("x^2 + 4*y*z"), cone) == 0
    assert normal_form(P("4*x^2 + 16*y^2 + 16*z^2"), cone) == P("16*y^2 + 16*z^2 - 16*y*z")


def test_ideal_membership_examples():
    xy = Ideal([P("x*y", XY)])
    assert ideal_member(P("x*y*(1 + x)", XY), xy)
    assert not ideal_member(P("y - y^3 - x^2*y", XY), xy)
    assert ideal_member(Poly.zero(XY), xy)


@given(st.lists(polys(max_deg=2, max_terms=3), min_size=1, max_size=2), polys(), polys(), polys())
def test_ideal_closed_under_operations(gens, a, b, h):
    ideal = Ideal(gens, ring=XYZ)
    f = a * gens[0]
    g = b * gens[-1]
    assert normal_form(f + g, ideal) == 0
    assert normal_form(h * f, ideal) == 0


def test_concurrent_gb_readers_agree():
    ideal = Ideal([P("x^3 - y*z"), P("y^2 - x*z"), P("z^2 - x^2*y")])
    results = []
    threads = [threading.Thread(target=lambda: results.append(ideal.gb)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)


# -- syzygies and modules ----------------------------------------------------

def test_syzygy_examples():
    x, y = P("x", XY), P("y", XY)
    s = syzygy_module([(x,), (y,)])
    assert module_equal(s, Submodule([(y, -x)]))
    s = syzygy_module([(y,), (x,), (-x * y,)])
    assert s.contains((x, Poly.zero(XY), Poly.const(XY, 1)))
    assert s.contains((Poly.zero(XY), y, Poly.const(XY, 1)))
    assert syzygy_module([(Poly.const(XY, 1),)]).is_zero()


@given(st.lists(st.tuples(polys(XY, 2, 3), polys(XY, 2, 3)), min_size=1, max_size=3))
def test_syzygies_are_relations(vectors):
    syz = syzygy_module(vectors, rank=2, ring=XY)
    for a in syz.gens:
        total = [Poly.zero(XY), Poly.zero(XY)]
        for ai, v in zip(a, vectors):
            total = [t + ai * c for t, c in zip(total, v)]
        assert all(t.is_zero() for t in total)


def test_module_membership_examples():
    x, y, z0 = P("x", XY), P("y", XY), Poly.zero(XY)
    assert module_member((x, z0), Submodule([(x, z0), (z0, y)]))
    empty = Submodule([], rank=2, ring=XY)
    assert module_member((z0, z0), empty)
    assert not module_member((x, z0), empty)


def test_module_equal_examples():
    x, y, z0 = P("x", XY), P("y", XY), Poly.zero(XY)
    assert module_equal(Submodule([(y, -x)]), Submodule([(-y, x)]))
    assert not module_equal(Submodule([(y, z0), (z0, x)]), Submodule([(y, x)]))
    A = Submodule([(x, y)])
    assert module_equal(A, A)


def _brute_member(v, gens, ring, dmax):
    """Solve v = sum a_i g_i with deg a_i <= dmax by undetermined coefficients (sympy)."""
    syms = sympy.symbols(" ".join(ring))
    mons = [sympy.Mul(*[s ** k for s, k in zip(syms, e)]) for e in _exps(len(ring), dmax)]
    unknowns = []
    combo = [sympy.Integer(0)] * len(v)
    for g in gens:
        a = 0
        for m in mons:
            u = sympy.Symbol(f"u{len(unknowns)}")
            unknowns.append(u)
            a += u * m
        combo = [c + a * to_sympy(gc, syms) for c, gc in zip(combo, g)]
    eqs = []
    for c, vc in zip(combo, v):
        diff = sympy.Poly(sympy.expand(c - to_sympy(vc, syms)), *syms)
        eqs.extend(diff.coeffs())
    if not eqs:
        return True
    return sympy.linsolve(eqs, unknowns) != sympy.EmptySet


def _exps(n, d):
    if n == 0:
        return [()]
    return [(a,) + r for a in range(d + 1) for r in _exps(n - 1, d - a)]


@given(st.lists(st.tuples(polys(XY, 1, 2), polys(XY, 1, 2)), min_size=1, max_size=2),
       st.tuples(polys(XY, 2, 3), polys(XY, 2, 3)))
def test_module_member_agrees_with_brute_force(gens, v):
    gens = [g for g in gens if any(not c.is_zero() for c in g)]
    if not gens:
        return
    M = Submodule(gens, rank=2, ring=XY)
    ours = module_member(v, M)
    if _brute_member(v, gens, XY, 3):
        assert ours
    if ours:
        cof = M.lift(v)
        assert cof is not None
        total = [Poly.zero(XY), Poly.zero(XY)]
        for a, g in zip(cof, gens):
            total = [t + a * c for t, c in zip(total, g)]
        assert tuple(total) == tuple(v)
        if max((a.degree() for a in cof if not a.is_zero()), default=0) <= 3:
            assert _brute_member(v, gens, XY, 3)


@given(st.lists(st.tuples(polys(XY, 1, 2), polys(XY, 1, 2)), min_size=1, max_size=2),
       st.lists(st.tuples(polys(XY, 1, 2)), min_size=2, max_size=2))
def test_combinations_are_members(gens, cofs):
    M = Submodule(gens, rank=2, ring=XY)
    v = [Poly.zero(XY), Poly.zero(XY)]
    for (a,), g in zip(cofs, gens):
        v = [t + a * c for t, c in zip(v, g)]
    assert module_member(v, M)


# -- linear algebra ----------------------------------------------------------

def test_fraction_inverse_examples():
    one, zero = Poly.const(XY, 1), Poly.zero(XY)
    inv = fraction_matrix_inverse([[one, zero], [zero, one]])
    assert inv[0][0] == 1 and inv[0][1] == 0
    x, y = P("x", XY), P("y", XY)
    inv = fraction_matrix_inverse([[x, zero], [zero, y]])
    assert inv[0][0] == RationalFunction(one, x)
    assert inv[1][1] == RationalFunction(one, y)
    M = [[P(s) for s in row] for row in [["0", "2*y", "-2*z"], ["-2*y", "0", "x"], ["2*z", "-x", "0"]]]
    with pytest.raises(SingularMatrixError):
        fraction_matrix_inverse(M)


@given(st.lists(polys(XY, 1, 3), min_size=4, max_size=4))
def test_inverse_times_matrix_is_identity(entries):
    M = [entries[:2], entries[2:]]
    try:
        inv = fraction_matrix_inverse(M)
    except SingularMatrixError:
        assert (M[0][0] * M[1][1] - M[0][1] * M[1][0]).is_zero()
        return
    for i in range(2):
        for j in range(2):
            total = inv[i][0] * M[0][j] + inv[i][1] * M[1][j]
            assert total == (1 if i == j else 0)


def test_rational_function_equality_by_cross_multiplication():
    x, y = P("x", XY), P("y", XY)
    assert RationalFunction(x * y, x * x) == RationalFunction(y, x)
    assert RationalFunction(x) + RationalFunction(y, x) == RationalFunction(x * x + y, x)
    with pytest.raises(ZeroDivisionError):
        RationalFunction(x, Poly.zero(XY))


def test_nullspace_and_rref():
    A = [[1, 2, 3], [2, 4, 6]]
    R, piv = rref(A)
    assert piv == [0]
    basis = nullspace(A)
    assert len(basis) == 2
    for v in basis:
        assert sum((a * b for a, b in zip(A[0], v)), GR(0)) == 0


def test_rational_function_reduction():
    from logalg.exact import RationalFunction, parse_poly
    R = ("x", "y")
    P2 = lambda t: parse_poly(t, R)  # noqa: E731
    for a, b in [("2*x*y", "4*x^2"), ("x + y", "x^2 - y^2"), ("x^2*y + x*y^2", "x^3*y")]:
        f = RationalFunction(P2(a), P2(b))
        assert f.reduced() == f
    assert str(RationalFunction(P2("x + y"), P2("x^2 - y^2"))) == "1/(x - y)"
    assert str(RationalFunction(P2("y"), P2("x*y"))) == "1/x"
    assert RationalFunction(P2("x^2 - y^2"), P2("x + y")).reduced().is_polynomial()
