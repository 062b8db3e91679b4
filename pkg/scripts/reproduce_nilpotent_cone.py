"""Print the sl2 Poisson worked example: anchors, Casimir, metric tables, kernel split and truncated H^0/H^1."""
from logalg import (
    BilinearMetric,
    CoefficientModule,
    PoissonStructure,
    TruncationWindow,
    characteristic_foliation,
    from_poisson,
    image_metric,
    invariant_functions,
    kernel_split,
    koszul_christoffel,
    l_invariance_check,
    parse_poly,
    truncated_cohomology_ranks,
)
from logalg.exact import Ideal
from logalg.metrics import hermitian_table

RING = ("x", "y", "z")
NAMES = ("D_x", "D_y", "D_z")


def main():
    A = from_poisson(PoissonStructure.from_upper([["2*y", "-2*z"], ["x"]], RING))
    g = BilinearMetric.identity(RING, 3)
    print("anchors")
    for name, D in zip(NAMES, A.anchor):
        print(f"  {name} = {D}")
    print("invariant functions (deg <= 2):", [str(f) for f in invariant_functions(characteristic_foliation(A), 2)])
    for text in ("x^2 + 4*y*z", "x^2 + 4*y*z - 1", "x"):
        print(f"  <{text}> invariant: {l_invariance_check(A, Ideal([parse_poly(text, RING)]))}")
    table = hermitian_table(list(A.anchor))
    print("Hermitian table")
    for i in range(3):
        for j in range(i, 3):
            print(f"  <{NAMES[i]}, {NAMES[j]}> = {table[i, j]}")
    split = kernel_split(A, g)
    print("anchor kernel:", [[str(c) for c in k] for k in split.kernel.gens], "spans with complement:", split.spans)
    e1 = A.basis(0)
    print("image metric <D_x, D_x>: naive", image_metric(A, g, A.anchor[0], A.anchor[0], e1, e1),
          "orthogonal", image_metric(A, g, A.anchor[0], A.anchor[0], e1, e1, mode="orthogonal"))
    conn = koszul_christoffel(A, g)
    print("Gamma^3_12 =", conn.gamma[2][0][1])
    for r in truncated_cohomology_ranks(A, CoefficientModule.trivial(A), TruncationWindow(2)):
        print(" ", r)


if __name__ == "__main__":
    main()
