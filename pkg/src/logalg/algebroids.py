"""Free Lie algebroids on one chart, Poisson structures and their cotangent algebroids."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

from .errors import DomainError, InvalidPoissonError, SingularMetricError
from .exact import GREVLEX, Ideal, Poly, RationalFunction, Submodule, parse_poly, syzygy_module
from .exact.linalg import det, fraction_matrix_inverse, nullspace, rref
from .forms import Foliation, VectorField, apply, lie_bracket
from .metrics import BilinearMetric, _exponents

__all__ = [
    "LieAlgebroid",
    "tangent_algebroid",
    "zero_algebroid",
    "abelian_algebroid",
    "algebroid_from_foliation",
    "PoissonStructure",
    "jacobi_check",
    "from_poisson",
    "hamiltonian_field",
    "characteristic_foliation",
    "l_invariance_check",
    "KernelSplit",
    "kernel_split",
    "image_metric",
    "invariant_functions",
]

Section = Tuple[Poly, ...]


class LieAlgebroid:
    """Free algebroid of rank ``r``: anchor rows ``a(e_s)`` and ``[e_s, e_t] = sum_u c[s][t][u] e_u``.

    Construction only checks shapes; :meth:`validate` reports the algebraic
    invariants so that deliberately broken data can still be built.
    """

    def __init__(self, ring, anchor: Sequence[VectorField], structure):
        self.ring = tuple(ring)
        self.anchor: Tuple[VectorField, ...] = tuple(anchor)
        r = len(self.anchor)
        zero = Poly.zero(self.ring)
        for a in self.anchor:
            if a.ring != self.ring:
                raise ValueError("anchor row over a different ring")
        if structure is None:
            structure = [[(zero,) * r for _ in range(r)] for _ in range(r)]
        self.structure: Tuple[Tuple[Section, ...], ...] = tuple(
            tuple(tuple(vec) for vec in row) for row in structure)
        if len(self.structure) != r or any(len(row) != r for row in self.structure) or \
                any(len(vec) != r for row in self.structure for vec in row):
            raise ValueError("structure functions must have shape r x r x r")

    @property
    def rank(self) -> int:
        return len(self.anchor)

    def basis(self, s: int) -> Section:
        return tuple(Poly.const(self.ring, 1 if t == s else 0) for t in range(self.rank))

    def zero_section(self) -> Section:
        return (Poly.zero(self.ring),) * self.rank

    def anchor_of(self, u: Sequence[Poly]) -> VectorField:
        out = VectorField.zero(self.ring)
        for us, a in zip(u, self.anchor):
            if not us.is_zero():
                out = out + a * us
        return out

    def bracket(self, u: Sequence[Poly], v: Sequence[Poly]) -> Section:
        """``[sum f_s e_s, sum g_t e_t]`` by the anchored Leibniz rule."""
        r = self.rank
        out = list(self.zero_section())
        for s in range(r):
            if u[s].is_zero():
                continue
            for t in range(r):
                if v[t].is_zero():
                    continue
                fg = u[s] * v[t]
                for k, c in enumerate(self.structure[s][t]):
                    if not c.is_zero():
                        out[k] = out[k] + fg * c
        for s in range(r):
            if not u[s].is_zero():
                a = self.anchor[s]
                for t in range(r):
                    out[t] = out[t] + u[s] * apply(a, v[t])
        for t in range(r):
            if not v[t].is_zero():
                a = self.anchor[t]
                for s in range(r):
                    out[s] = out[s] - v[t] * apply(a, u[s])
        return tuple(out)

    def with_structure(self, s: int, t: int, k: int, value) -> "LieAlgebroid":
        """Copy with ``c[s][t][k]`` replaced (and ``c[t][s][k]`` set to its negative)."""
        value = value if isinstance(value, Poly) else Poly.const(self.ring, value)
        rows = [[list(vec) for vec in row] for row in self.structure]
        rows[s][t][k] = value
        rows[t][s][k] = -value
        return LieAlgebroid(self.ring, self.anchor, rows)

    def validate(self) -> dict:
        """Antisymmetry, anchor/bracket compatibility and Jacobi on basis elements."""
        r = self.rank
        antisym = all(
            self.structure[s][t][k] == -self.structure[t][s][k]
            for s in range(r) for t in range(r) for k in range(r))
        anchor_ok = all(
            self.anchor_of(self.structure[s][t]) == lie_bracket(self.anchor[s], self.anchor[t])
            for s, t in combinations(range(r), 2))
        jacobi_ok = True
        for s, t, u in combinations(range(r), 3):
            es, et, eu = self.basis(s), self.basis(t), self.basis(u)
            total = [
                a + b + c for a, b, c in zip(
                    self.bracket(self.bracket(es, et), eu),
                    self.bracket(self.bracket(et, eu), es),
                    self.bracket(self.bracket(eu, es), et))]
            if any(not x.is_zero() for x in total):
                jacobi_ok = False
                break
        return {"antisymmetry": antisym, "anchor_bracket": anchor_ok, "jacobi": jacobi_ok}

    @property
    def is_valid(self) -> bool:
        return all(self.validate().values())


def tangent_algebroid(ring) -> LieAlgebroid:
    ring = tuple(ring)
    return LieAlgebroid(ring, [VectorField.partial(ring, i) for i in range(len(ring))], None)


def zero_algebroid(ring) -> LieAlgebroid:
    return LieAlgebroid(ring, [], None)


def abelian_algebroid(ring, r: int) -> LieAlgebroid:
    """Zero anchor and zero bracket in rank ``r``."""
    return LieAlgebroid(ring, [VectorField.zero(ring) for _ in range(r)], None)


def algebroid_from_foliation(F: Foliation) -> LieAlgebroid:
    """Algebroid on the generators of ``F``: anchor is inclusion, brackets lifted to cofactors.

    Only meaningful when the generators are free; Jacobi is not re-checked here.
    """
    ring = F.ring
    gens = list(F.gens)
    module = Submodule([g.coeffs for g in gens], rank=len(ring), ring=ring)
    r = len(gens)
    zero = Poly.zero(ring)
    structure = [[(zero,) * r for _ in range(r)] for _ in range(r)]
    for s, t in combinations(range(r), 2):
        cof = module.lift(lie_bracket(gens[s], gens[t]).coeffs)
        if cof is None:
            raise DomainError("foliation is not involutive")
        structure[s][t] = tuple(cof)
        structure[t][s] = tuple(-c for c in cof)
    return LieAlgebroid(ring, gens, structure)


# ---------------------------------------------------------------------------
# Poisson structures
# ---------------------------------------------------------------------------

class PoissonStructure:
    """Antisymmetric matrix ``P[i][j] = {x_i, x_j}``."""

    def __init__(self, matrix: Sequence[Sequence[Poly]]):
        self.matrix = tuple(tuple(row) for row in matrix)
        n = len(self.matrix)
        if n == 0 or any(len(row) != n for row in self.matrix):
            raise ValueError("Poisson matrix must be square and nonempty")
        self.ring = self.matrix[0][0].ring
        if len(self.ring) != n:
            raise ValueError("Poisson matrix size differs from the number of variables")
        for i in range(n):
            for j in range(i, n):
                if self.matrix[i][j] != -self.matrix[j][i]:
                    raise InvalidPoissonError(f"matrix is not antisymmetric at ({i}, {j})")

    @classmethod
    def from_upper(cls, rows: Sequence[Sequence[str]], ring) -> "PoissonStructure":
        """Rows of the strict upper triangle: ``rows[i]`` lists ``{x_i, x_j}`` for ``j > i``."""
        ring = tuple(ring)
        n = len(ring)
        zero = Poly.zero(ring)
        M = [[zero] * n for _ in range(n)]
        if len(rows) not in (n - 1, n):
            raise ValueError(f"expected {n - 1} upper-triangular rows, got {len(rows)}")
        for i, row in enumerate(rows):
            if len(row) != n - 1 - i:
                raise ValueError(f"row {i} must have {n - 1 - i} entries")
            for off, text in enumerate(row):
                j = i + 1 + off
                p = parse_poly(text, ring) if isinstance(text, str) else text
                M[i][j] = p
                M[j][i] = -p
        return cls(M)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def bracket(self, f: Poly, g: Poly) -> Poly:
        out = Poly.zero(self.ring)
        for s in range(self.n):
            fs = f.diff(s)
            if fs.is_zero():
                continue
            for t in range(self.n):
                P = self.matrix[s][t]
                if not P.is_zero():
                    out = out + P * fs * g.diff(t)
        return out

    def upper_rows(self) -> List[List[str]]:
        return [[str(self.matrix[i][j]) for j in range(i + 1, self.n)] for i in range(self.n - 1)]


def jacobi_check(P: PoissonStructure) -> bool:
    xs = [Poly.var(P.ring, i) for i in range(P.n)]
    for i, j, k in combinations(range(P.n), 3):
        a, b, c = xs[i], xs[j], xs[k]
        total = (P.bracket(a, P.bracket(b, c)) + P.bracket(b, P.bracket(c, a))
                 + P.bracket(c, P.bracket(a, b)))
        if not total.is_zero():
            return False
    return True


def hamiltonian_field(f: Poly, P: PoissonStructure) -> VectorField:
    """``{f, .} = sum_t (sum_s P_st df/dx_s) d/dx_t``."""
    coeffs = []
    for t in range(P.n):
        c = Poly.zero(P.ring)
        for s in range(P.n):
            if not P.matrix[s][t].is_zero():
                c = c + P.matrix[s][t] * f.diff(s)
        coeffs.append(c)
    return VectorField(tuple(coeffs))


def from_poisson(P: PoissonStructure) -> LieAlgebroid:
    """Cotangent algebroid on ``dx_1..dx_n``: anchor ``{x_s, .}``, ``[dx_i, dx_j] = d P_ij``."""
    if not jacobi_check(P):
        raise InvalidPoissonError("Jacobi identity fails for this bracket")
    ring = P.ring
    n = P.n
    anchor = [hamiltonian_field(Poly.var(ring, s), P) for s in range(n)]
    structure = [[tuple(P.matrix[i][j].diff(k) for k in range(n)) for j in range(n)] for i in range(n)]
    return LieAlgebroid(ring, anchor, structure)


def characteristic_foliation(A: LieAlgebroid) -> Foliation:
    F = Foliation([a for a in A.anchor], ring=A.ring)
    F.verify()
    return F


def l_invariance_check(A: LieAlgebroid, ideal: Ideal) -> bool:
    """``a(L)(I) in I``: every anchor row maps every generator into the ideal."""
    return all(ideal.contains(apply(a, g)) for a in A.anchor for g in ideal.gens)


# ---------------------------------------------------------------------------
# kernel of the anchor and the image metric
# ---------------------------------------------------------------------------

@dataclass
class KernelSplit:
    kernel: Submodule
    complement: Submodule
    spans: bool


def kernel_split(A: LieAlgebroid, metric: BilinearMetric) -> KernelSplit:
    """``ker a`` and its metric orthogonal, plus whether together they span ``L``."""
    if metric.rank != A.rank:
        raise ValueError("metric rank differs from algebroid rank")
    if not metric.nondegenerate:
        raise SingularMetricError("degenerate metric (determinant is zero)")
    r, n = A.rank, len(A.ring)
    kernel = syzygy_module([a.coeffs for a in A.anchor], rank=n, ring=A.ring)
    kgens = [k for k in kernel.gens if any(not c.is_zero() for c in k)]
    if kgens:
        # v is orthogonal to k iff sum_s v_s (g k)_s = 0
        gk = [[metric.pair(A.basis(s), k) for k in kgens] for s in range(r)]
        complement = syzygy_module(gk, rank=len(kgens), ring=A.ring)
    else:
        complement = Submodule([A.basis(s) for s in range(r)], rank=r, ring=A.ring)
    both = Submodule(list(kgens) + list(complement.gens), rank=r, ring=A.ring)
    spans = all(both.contains(A.basis(s)) for s in range(r))
    return KernelSplit(kernel, complement, spans)


def _independent_subset(gens: List[Section], metric: BilinearMetric) -> List[Section]:
    chosen: List[Section] = []
    for k in gens:
        trial = chosen + [k]
        gram = [[metric.pair(a, b) for b in trial] for a in trial]
        if not det(gram).is_zero():
            chosen = trial
    return chosen


def image_metric(A: LieAlgebroid, metric: BilinearMetric, D1: VectorField, D2: VectorField,
                 pre1: Sequence[Poly], pre2: Sequence[Poly], mode: str = "naive"
                 ) -> Union[Poly, RationalFunction]:
    """Pair two anchor-image fields through chosen preimages.

    ``naive`` pairs the preimages as given. ``orthogonal`` first removes their
    metric projection onto the kernel of the anchor.
    """
    pre1, pre2 = tuple(pre1), tuple(pre2)
    if A.anchor_of(pre1) != D1 or A.anchor_of(pre2) != D2:
        raise DomainError("supplied preimage does not map to the field under the anchor")
    if mode == "naive":
        return metric.pair(pre1, pre2)
    if mode != "orthogonal":
        raise ValueError(f"unknown mode {mode!r}")
    split = kernel_split(A, metric)
    kgens = _independent_subset([k for k in split.kernel.gens if any(not c.is_zero() for c in k)], metric)
    if not kgens:
        return RationalFunction(metric.pair(pre1, pre2))
    gram_inv = fraction_matrix_inverse([[metric.pair(a, b) for b in kgens] for a in kgens])
    # <v - P v, w - P w> = <v, w> - <v, P w>, P w = sum_ab k_a Ginv_ab <k_b, w>
    kv = [metric.pair(k, pre1) for k in kgens]
    kw = [metric.pair(k, pre2) for k in kgens]
    out = RationalFunction(metric.pair(pre1, pre2))
    for a in range(len(kgens)):
        for b in range(len(kgens)):
            out = out - gram_inv[a][b] * (kv[a] * kw[b])
    return out


# ---------------------------------------------------------------------------
# invariant functions
# ---------------------------------------------------------------------------

def invariant_functions(F, d: int, ring=None) -> List[Poly]:
    """Basis of ``{f : deg f <= d, D(f) = 0 for every generator D}``.

    The basis is the reduced echelon form with monomials in descending
    graded order, listed from lowest to highest leading monomial.
    """
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    gens = list(F.gens) if isinstance(F, Foliation) else list(F)
    if ring is None:
        ring = F.ring if isinstance(F, Foliation) else gens[0].ring
    ring = tuple(ring)
    key = GREVLEX.key
    monos = sorted(_exponents(len(ring), d), key=key, reverse=True)
    images = [[apply(D, Poly.monomial(ring, e)) for e in monos] for D in gens]
    rows = []
    for per_gen in images:
        out_monos = sorted({e for p in per_gen for e in p.terms}, key=key)
        for e_out in out_monos:
            rows.append([p.terms.get(e_out, 0) for p in per_gen])
    basis = nullspace(rows, len(monos))
    R, _ = rref(basis) if basis else ([], [])
    polys = [Poly(ring, {e: c for e, c in zip(monos, row) if c}) for row in R]
    return list(reversed(polys))
