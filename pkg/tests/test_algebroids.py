import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import XY, XYZ, P, V, polys
from logalg.algebroids import (
    LieAlgebroid,
    PoissonStructure,
    abelian_algebroid,
    algebroid_from_foliation,
    characteristic_foliation,
    from_poisson,
    hamiltonian_field,
    image_metric,
    invariant_functions,
    jacobi_check,
    kernel_split,
    l_invariance_check,
    tangent_algebroid,
    zero_algebroid,
)
from logalg.errors import DomainError, InvalidPoissonError, SingularMetricError
from logalg.exact import Ideal, RationalFunction, Submodule, module_equal
from logalg.forms import VERIFIED, Foliation, VectorField, apply, lie_bracket
from logalg.metrics import BilinearMetric

DX = V(["0", "2*y", "-2*z"])
DY = V(["-2*y", "0", "x"])
DZ = V(["2*z", "-x", "0"])


def sec(*texts, ring=XYZ):
    return tuple(P(t, ring) for t in texts)


# -- Poisson -----------------------------------------------------------------

def test_from_poisson_sl2(sl2):
    assert sl2.anchor == (DX, DY, DZ)
    assert sl2.bracket(sl2.basis(0), sl2.basis(1)) == sec("0", "2", "0")
    assert sl2.bracket(sl2.basis(1), sl2.basis(2)) == sec("1", "0", "0")
    assert sl2.is_valid


def test_from_poisson_rejects_jacobi_failure():
    bad = PoissonStructure.from_upper([["y", "x"], ["1"]], XYZ)
    assert not jacobi_check(bad)
    with pytest.raises(InvalidPoissonError):
        from_poisson(bad)


def test_poisson_rejects_asymmetric_matrix():
    M = [[P("0", XY), P("x", XY)], [P("x", XY), P("0", XY)]]
    with pytest.raises(InvalidPoissonError):
        PoissonStructure(M)


def test_symplectic_plane():
    Pxy = PoissonStructure.from_upper([["1"]], XY)
    A = from_poisson(Pxy)
    assert A.anchor == (V(["0", "1"], XY), V(["-1", "0"], XY))
    assert A.is_valid
    assert characteristic_foliation(A).flag == VERIFIED


def test_zero_poisson_gives_zero_anchor():
    A = from_poisson(PoissonStructure.from_upper([["0", "0"], ["0"]], XYZ))
    assert all(a.is_zero() for a in A.anchor) and A.is_valid


@given(polys(), polys(), polys())
def test_poisson_leibniz(f, g, h):
    Pb = PoissonStructure.from_upper([["2*y", "-2*z"], ["x"]], XYZ)
    assert Pb.bracket(f, g * h) == Pb.bracket(f, g) * h + g * Pb.bracket(f, h)
    assert Pb.bracket(f, g) == -Pb.bracket(g, f)


@given(polys(max_deg=2, max_terms=3), polys(max_deg=2, max_terms=3), polys(max_deg=2, max_terms=3))
def test_poisson_jacobi_on_random_functions(f, g, h):
    Pb = PoissonStructure.from_upper([["2*y", "-2*z"], ["x"]], XYZ)
    total = Pb.bracket(f, Pb.bracket(g, h)) + Pb.bracket(g, Pb.bracket(h, f)) + Pb.bracket(h, Pb.bracket(f, g))
    assert total.is_zero()


def test_hamiltonian_of_casimir_vanishes(sl2_poisson, casimir):
    assert hamiltonian_field(casimir, sl2_poisson).is_zero()
    assert hamiltonian_field(P("x"), sl2_poisson) == DX


# -- algebroid axioms --------------------------------------------------------

def test_standard_algebroids_are_valid():
    for A in (tangent_algebroid(XYZ), zero_algebroid(XYZ), abelian_algebroid(XY, 3)):
        assert A.is_valid


def test_corrupted_structure_is_detected(sl2):
    bad = sl2.with_structure(0, 1, 1, P("3"))
    report = bad.validate()
    assert not all(report.values())
    assert not bad.is_valid


@given(st.tuples(polys(), polys(), polys()), st.tuples(polys(), polys(), polys()))
def test_anchor_is_bracket_morphism(u, v):
    from logalg import PoissonStructure as PS
    A = from_poisson(PS.from_upper([["2*y", "-2*z"], ["x"]], XYZ))
    assert A.anchor_of(A.bracket(u, v)) == lie_bracket(A.anchor_of(u), A.anchor_of(v))
    assert A.bracket(u, v) == tuple(-c for c in A.bracket(v, u))


def test_algebroid_from_foliation():
    F = Foliation([V(["x", "0"], XY), V(["0", "y"], XY)])
    A = algebroid_from_foliation(F)
    assert A.is_valid
    with pytest.raises(DomainError):
        algebroid_from_foliation(Foliation([VectorField.partial(XY, 0), V(["0", "x"], XY)]))


def test_characteristic_foliation_variants(sl2):
    assert characteristic_foliation(sl2).flag == VERIFIED
    assert characteristic_foliation(tangent_algebroid(XY)).flag == VERIFIED
    assert characteristic_foliation(zero_algebroid(XY)).gens == ()


# -- invariance --------------------------------------------------------------

def test_l_invariance_examples(sl2, cone):
    assert l_invariance_check(sl2, cone)
    assert not l_invariance_check(sl2, Ideal([P("x")]))
    assert l_invariance_check(sl2, Ideal([P("x^2 + 4*y*z - 1")]))
    assert l_invariance_check(tangent_algebroid(XY), Ideal([P("1", XY)]))


@pytest.mark.parametrize("c", ["0", "1", "-3"])
def test_level_sets_of_casimir_are_invariant(sl2, c):
    assert l_invariance_check(sl2, Ideal([P(f"x^2 + 4*y*z - ({c})")]))


def test_invariant_functions_examples(sl2):
    F = characteristic_foliation(sl2)
    assert invariant_functions(F, 2) == [P("1"), P("x^2 + 4*y*z")]
    assert invariant_functions(F, 1) == [P("1")]
    assert len(invariant_functions(F, 4)) == 3
    assert len(invariant_functions([], 2, ring=XY)) == 6


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_invariant_functions_are_annihilated(sl2, d):
    F = characteristic_foliation(sl2)
    basis = invariant_functions(F, d)
    assert basis
    for f in basis:
        assert all(apply(D, f).is_zero() for D in F.gens)


# -- kernel split and image metric -------------------------------------------

def test_kernel_split_sl2(sl2, identity3):
    split = kernel_split(sl2, identity3)
    assert module_equal(split.kernel, Submodule([sec("x", "2*z", "2*y")], rank=3, ring=XYZ))
    assert not split.spans
    for k in split.kernel.gens:
        assert sl2.anchor_of(k).is_zero()
    for v in split.complement.gens:
        for k in split.kernel.gens:
            assert identity3.pair(v, k).is_zero()


def test_kernel_split_trivial_cases():
    T = tangent_algebroid(XY)
    s = kernel_split(T, BilinearMetric.identity(XY, 2))
    assert s.kernel.is_zero() and s.spans
    ab = abelian_algebroid(XY, 2)
    s = kernel_split(ab, BilinearMetric.identity(XY, 2))
    assert s.spans and s.complement.is_zero()


def test_kernel_split_degenerate_metric(sl2):
    g = BilinearMetric([[P("0")] * 3 for _ in range(3)])
    with pytest.raises(SingularMetricError):
        kernel_split(sl2, g)


def test_image_metric_examples(sl2, identity3):
    e1 = sl2.basis(0)
    assert image_metric(sl2, identity3, DX, DX, e1, e1) == P("1")
    val = image_metric(sl2, identity3, DX, DX, e1, e1, mode="orthogonal")
    assert val == RationalFunction(P("4*y^2 + 4*z^2"), P("x^2 + 4*y^2 + 4*z^2"))
    with pytest.raises(DomainError):
        image_metric(sl2, identity3, DX, DY, e1, e1)


@given(st.tuples(polys(max_terms=2), polys(max_terms=2), polys(max_terms=2)), polys(max_terms=2))
def test_orthogonal_image_metric_ignores_kernel(u, f):
    A = from_poisson(PoissonStructure.from_upper([["2*y", "-2*z"], ["x"]], XYZ))
    g = BilinearMetric.identity(XYZ, 3)
    k = sec("x", "2*z", "2*y")
    shifted = tuple(a + f * b for a, b in zip(u, k))
    D = A.anchor_of(u)
    assert image_metric(A, g, D, D, u, u, mode="orthogonal") == \
        image_metric(A, g, D, D, shifted, shifted, mode="orthogonal")
