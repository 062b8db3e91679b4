"""Print the normal crossing xy = 0 example: log derivations, condition 1, Saito and the normal module."""
from logalg import DivisorChart, log_derivations, normal_module, parse_poly, saito_free_check
from logalg.cohomology import log_deRham_generators
from logalg.loggeom import cond1_check, cond1_witness, saito_determinant

RING = ("x", "y")


def main():
    chart = DivisorChart(parse_poly("x*y", RING))
    L = log_derivations(chart.ideal)
    print("log derivations:", [str(D) for D in L.gens])
    print("condition 1 holds:", cond1_check(chart), "witness:", cond1_witness(chart))
    print("condition 1 on x = 0:", cond1_check(DivisorChart(parse_poly("x", RING))))
    print("Saito free:", saito_free_check(L.gens, chart), "determinant:", saito_determinant(L.gens))
    rep = normal_module(chart.ideal)
    print("normal module generators:", [[str(c) for c in v] for v in rep.module.gens])
    print("equals the gradient span:", rep.equals_gradient)
    duals = log_deRham_generators(chart, L.gens)
    print("dual log forms:", [[str(w) for w in row] for row in duals])


if __name__ == "__main__":
    main()
