"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line."""
import random
import subprocess
import sys
from contextlib import contextmanager

from conftest import ACCEPTANCE_LINES, XY, XYZ, P, V
from logalg.algebroids import (
    PoissonStructure,
    characteristic_foliation,
    from_poisson,
    image_metric,
    invariant_functions,
    kernel_split,
    l_invariance_check,
    tangent_algebroid,
)
from logalg.cohomology import CoefficientModule, TruncationWindow, d_squared_check, truncated_cohomology_ranks
from logalg.exact import Ideal, Poly, RationalFunction, Submodule, doubled_ring, module_equal, parse_poly
from logalg.forms import VectorField, apply, lie_bracket
from logalg.loggeom import (
    DivisorChart,
    cond1_check,
    cond1_witness,
    log_derivations,
    normal_module,
    quotient_representative,
    saito_determinant,
    saito_free_check,
)
from logalg.metrics import (
    BilinearMetric,
    ChartConnection,
    GroupAction,
    group_invariance_check,
    induced_connection_on_Y,
    koszul_christoffel,
    levi_civita_check,
    quotient_metric,
    standard_bilinear,
    standard_hermitian,
)
from logalg.session import bundled_sessions


@contextmanager
def criterion(n, title):
    try:
        yield
    except BaseException:
        line = f"[FAIL] criterion {n}: {title}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"[PASS] criterion {n}: {title}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def sl2():
    return from_poisson(PoissonStructure.from_upper([["2*y", "-2*z"], ["x"]], XYZ))


def test_criterion_1_nilpotent_cone():
    with criterion(1, "nilpotent cone: Hamiltonians, Casimir, invariance, Hermitian table, naive image metric"):
        A = sl2()
        DX, DY, DZ = V(["0", "2*y", "-2*z"]), V(["-2*y", "0", "x"]), V(["2*z", "-x", "0"])
        assert A.anchor == (DX, DY, DZ)
        assert invariant_functions(characteristic_foliation(A), 2) == [P("1"), P("x^2 + 4*y*z")]
        assert l_invariance_check(A, Ideal([P("x^2 + 4*y*z")]))
        R2 = doubled_ring(XYZ)
        table = {
            (DX, DX): "4*y*ybar + 4*z*zbar",
            (DY, DY): "x*xbar + 4*y*ybar",
            (DZ, DZ): "x*xbar + 4*z*zbar",
            (DX, DY): "-2*z*xbar",
            (DX, DZ): "-2*y*xbar",
            (DY, DZ): "-4*y*zbar",
        }
        for (a, b), text in table.items():
            assert standard_hermitian(a, b) == parse_poly(text, R2)
        g = BilinearMetric.identity(XYZ, 3)
        for s in range(3):
            for t in range(3):
                got = image_metric(A, g, A.anchor[s], A.anchor[t], A.basis(s), A.basis(t))
                assert got == (1 if s == t else 0)


def test_criterion_2_normal_crossing():
    with criterion(2, "normal crossing: log derivations, cond-1, Saito, normal module discrepancy"):
        chart = DivisorChart(P("x*y", XY))
        L = log_derivations(chart.ideal)
        target = Submodule([V(["x", "0"], XY).coeffs, V(["0", "y"], XY).coeffs], rank=2, ring=XY)
        assert module_equal(L.module, target)
        assert not cond1_check(chart)
        assert cond1_witness(chart) == P("1 - x^2 - y^2", XY)
        assert cond1_check(DivisorChart(P("x", XY)))
        assert cond1_check(DivisorChart(P("z")))
        gens = [V(["x", "0"], XY), V(["0", "y"], XY)]
        assert saito_free_check(gens, chart)
        assert saito_determinant(gens) == P("x*y", XY)
        rep = normal_module(chart.ideal)
        assert not rep.equals_gradient
        assert rep.module.contains(V(["y", "x"], XY).coeffs)
        assert not Submodule([V(["y", "x"], XY).coeffs], rank=2, ring=XY).contains(V(["y", "0"], XY).coeffs)


def _rand_poly(rng, ring, dmax=2, terms=3):
    out = Poly.zero(ring)
    for _ in range(rng.randint(0, terms)):
        e = [0] * len(ring)
        for _ in range(rng.randint(0, dmax)):
            e[rng.randrange(len(ring))] += 1
        out = out + Poly.monomial(ring, tuple(e), rng.randint(-4, 4))
    return out


def test_criterion_3_connection_theorems():
    with criterion(3, "quotient metric and induced connection well defined; symmetry and compatibility on V(x3)"):
        rng = random.Random(20261016)
        I3 = Ideal([P("z")])
        Ixy = Ideal([P("x*y", XY)])
        z = P("z")
        for _ in range(20):
            rp = lambda: _rand_poly(rng, XYZ)  # noqa: E731
            D1, D2, D3 = (VectorField((rp(), rp(), z * rp())) for _ in range(3))
            Z1, Z2 = (VectorField((z * rp(), z * rp(), z * rp())) for _ in range(2))
            assert quotient_metric(D1 + Z1, D2, I3) == quotient_metric(D1, D2, I3)
            assert quotient_metric(D1, D2 + Z2, I3) == quotient_metric(D1, D2, I3)
            base = induced_connection_on_Y(D1, D2, I3)
            assert induced_connection_on_Y(D1 + Z1, D2, I3) == base
            assert induced_connection_on_Y(D1, D2 + Z2, I3) == base
            # torsion free modulo the zero module
            assert base - induced_connection_on_Y(D2, D1, I3) == quotient_representative(lie_bracket(D1, D2), I3)
            lhs = I3.normal_form(apply(D1, standard_bilinear(D2, D3)))
            rhs = I3.normal_form(quotient_metric(base, D3, I3)
                                 + quotient_metric(D2, induced_connection_on_Y(D1, D3, I3), I3))
            assert lhs == rhs
            # the normal crossing chart, where only the metric is defined
            xy = P("x*y", XY)
            E1 = VectorField((P("x", XY) * _rand_poly(rng, XY), P("y", XY) * _rand_poly(rng, XY)))
            E2 = VectorField((P("x", XY) * _rand_poly(rng, XY), P("y", XY) * _rand_poly(rng, XY)))
            Z = VectorField((xy * _rand_poly(rng, XY), xy * _rand_poly(rng, XY)))
            assert quotient_metric(E1 + Z, E2, Ixy) == quotient_metric(E1, E2, Ixy)


def test_criterion_4_koszul_round_trip():
    with criterion(4, "Koszul output passes the Levi-Civita check while a corrupted tensor fails"):
        T = tangent_algebroid(XYZ)
        g = BilinearMetric.identity(XYZ, 3)
        assert levi_civita_check(koszul_christoffel(T, g), T, g)
        A = sl2()
        conn = koszul_christoffel(A, g)
        assert conn.gamma[2][0][1] == RationalFunction(P("-1/2"))
        assert levi_civita_check(conn, A, g)
        conn.gamma[2][0][1] = RationalFunction(P("1/2"))
        assert not levi_civita_check(conn, A, g)


def test_criterion_5_cohomology_sanity():
    with criterion(5, "d^2 vanishes until a structure constant is corrupted; sl2 H^0 = 2 matches the invariants"):
        T = tangent_algebroid(XYZ)
        assert d_squared_check(T, CoefficientModule.trivial(T))
        A = sl2()
        assert d_squared_check(A, CoefficientModule.trivial(A))
        bad = A.with_structure(1, 2, 0, P("0"))
        assert not d_squared_check(bad, CoefficientModule.trivial(bad))
        (h0,) = truncated_cohomology_ranks(A, CoefficientModule.trivial(A), TruncationWindow(2), degrees=[0])
        assert h0.estimate == 2
        assert h0.estimate == len(invariant_functions(characteristic_foliation(A), 2))


def test_criterion_6_group_invariance():
    with criterion(6, "standard connection invariant under swap and sign; planted connection is not"):
        assert group_invariance_check(GroupAction.from_strings(XY, [["x", "y"], ["y", "x"]]), 1)
        X = ("x",)
        sign = GroupAction.from_strings(X, [["x"], ["-x"]])
        assert group_invariance_check(sign, 1)
        planted = ChartConnection(X, 1, (((Poly.const(X, 1),),),))
        assert not group_invariance_check(sign, 1, planted)


def test_criterion_7_kernel_split():
    with criterion(7, "sl2 kernel generated by half the Casimir differential; orthogonal image metric"):
        A = sl2()
        g = BilinearMetric.identity(XYZ, 3)
        split = kernel_split(A, g)
        half_dc = tuple(P("1/2") * P("x^2 + 4*y*z").diff(i) for i in range(3))
        assert module_equal(split.kernel, Submodule([half_dc], rank=3, ring=XYZ))
        val = image_metric(A, g, A.anchor[0], A.anchor[0], A.basis(0), A.basis(0), mode="orthogonal")
        expected = RationalFunction(P("4*y^2 + 4*z^2"), P("x^2 + 4*y^2 + 4*z^2"))
        assert val.num * expected.den == expected.num * val.den


def _run(name, *extra):
    proc = subprocess.run([sys.executable, "-m", "logalg", "run", name, *extra], capture_output=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_criterion_8_determinism():
    with criterion(8, "repeated runs of every bundled session are byte identical, with and without --jobs"):
        names = bundled_sessions()
        assert names
        for name in names:
            first = _run(name)
            assert _run(name) == first
            assert _run(name, "--jobs", "4") == first
            assert _run(name, "--jobs", "4") == first


if __name__ == "__main__":
    import pytest
    sys.exit(pytest.main([__file__, "-q"]))
