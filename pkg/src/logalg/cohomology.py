"""Chevalley-Eilenberg-Rinehart complex of a free algebroid with coefficients."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .algebroids import LieAlgebroid, algebroid_from_foliation
from .errors import ArityError, BasisError, DomainError, NotFreeError
from .exact import Poly, RationalFunction, Submodule
from .exact.linalg import fraction_matrix_inverse, matrix_rank
from .forms import Foliation, VectorField, apply, lie_bracket
from .loggeom import DivisorChart, saito_free_check
from .metrics import _exponents

__all__ = [
    "CECochain",
    "TruncationWindow",
    "CoefficientModule",
    "ce_differential",
    "d_squared_check",
    "truncated_cohomology_ranks",
    "DegreeRank",
    "bott_connection",
    "log_deRham_generators",
    "dual_pairing_check",
]

Vec = Tuple[Poly, ...]


@dataclass(frozen=True)
class TruncationWindow:
    dmax: int

    def __post_init__(self):
        if self.dmax < 0:
            raise ValueError("dmax must be nonnegative")


class CoefficientModule:
    """Free module ``M`` of rank ``q`` with ``nabla_{e_i} m_a = sum_b nabla[i][a][b] m_b``."""

    def __init__(self, algebroid: LieAlgebroid, q: int, nabla=None):
        self.algebroid = algebroid
        self.q = q
        ring = algebroid.ring
        zero = Poly.zero(ring)
        if nabla is None:
            nabla = [[(zero,) * q for _ in range(q)] for _ in range(algebroid.rank)]
        self.nabla = tuple(tuple(tuple(v) for v in row) for row in nabla)
        if len(self.nabla) != algebroid.rank or any(len(row) != q for row in self.nabla):
            raise ValueError("connection data must have shape rank x q x q")

    @classmethod
    def trivial(cls, algebroid: LieAlgebroid, q: int = 1) -> "CoefficientModule":
        return cls(algebroid, q)

    @property
    def ring(self):
        return self.algebroid.ring

    def act(self, i: int, s: Sequence[Poly]) -> Vec:
        """``nabla_{e_i}(sum_a f_a m_a)``."""
        a_i = self.algebroid.anchor[i]
        out = [apply(a_i, f) for f in s]
        for a, f in enumerate(s):
            if f.is_zero():
                continue
            for b, c in enumerate(self.nabla[i][a]):
                if not c.is_zero():
                    out[b] = out[b] + f * c
        return tuple(out)

    def act_section(self, u: Sequence[Poly], s: Sequence[Poly]) -> Vec:
        """``nabla_u s`` for a general algebroid section ``u``."""
        out = [Poly.zero(self.ring)] * self.q
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            out = [o + ui * v for o, v in zip(out, self.act(i, s))]
        return tuple(out)

    def flatness_check(self) -> bool:
        """``nabla_i nabla_j - nabla_j nabla_i = nabla_{[e_i, e_j]}`` on module basis sections."""
        A = self.algebroid
        ring = self.ring
        for i, j in combinations(range(A.rank), 2):
            for a in range(self.q):
                m = tuple(Poly.const(ring, 1 if b == a else 0) for b in range(self.q))
                lhs = [x - y for x, y in zip(self.act(i, self.act(j, m)), self.act(j, self.act(i, m)))]
                rhs = self.act_section(A.structure[i][j], m)
                if any(x != y for x, y in zip(lhs, rhs)):
                    return False
        return True


@dataclass
class CECochain:
    """``k``-cochain: sorted basis index tuples to values in ``M``; zeros are dropped."""

    degree: int
    q: int
    ring: Tuple[str, ...]
    values: Dict[Tuple[int, ...], Vec] = field(default_factory=dict)

    def __post_init__(self):
        self.ring = tuple(self.ring)
        clean = {}
        for idx, v in self.values.items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} is not strictly increasing of length {self.degree}")
            v = tuple(v)
            if len(v) != self.q:
                raise ValueError("value has the wrong module rank")
            if any(not x.is_zero() for x in v):
                clean[idx] = v
        self.values = clean

    def __call__(self, idx: Sequence[int]) -> Vec:
        """Value on an arbitrary index sequence, with the alternating sign."""
        idx = list(idx)
        if len(set(idx)) != len(idx):
            return (Poly.zero(self.ring),) * self.q
        inversions = sum(1 for a in range(len(idx)) for b in range(a + 1, len(idx)) if idx[a] > idx[b])
        v = self.values.get(tuple(sorted(idx)))
        if v is None:
            return (Poly.zero(self.ring),) * self.q
        return tuple(-x for x in v) if inversions % 2 else v

    def is_zero(self) -> bool:
        return not self.values


def _add(a: Vec, b: Vec, sign: int = 1) -> Vec:
    return tuple(x + y if sign > 0 else x - y for x, y in zip(a, b))


def ce_differential(c: CECochain, A: LieAlgebroid, M: CoefficientModule) -> CECochain:
    """``(dc)(e_0..e_k) = sum (-1)^p nabla_p c(..^p..) + sum_{p<q} (-1)^(p+q) c([e_p, e_q], ..)``."""
    if c.q != M.q or M.algebroid is not A and M.algebroid.rank != A.rank:
        raise ValueError("cochain, algebroid and module shapes disagree")
    k = c.degree
    r = A.rank
    zero = (Poly.zero(A.ring),) * c.q
    out: Dict[Tuple[int, ...], Vec] = {}
    for idx in combinations(range(r), k + 1):
        total = zero
        for p in range(k + 1):
            rest = idx[:p] + idx[p + 1:]
            val = c.values.get(rest)
            if val is not None:
                total = _add(total, M.act(idx[p], val), 1 if p % 2 == 0 else -1)
        for p in range(k + 1):
            for q in range(p + 1, k + 1):
                rest = idx[:p] + idx[p + 1:q] + idx[q + 1:]
                br = A.structure[idx[p]][idx[q]]
                sign = 1 if (p + q) % 2 == 0 else -1
                for m, coeff in enumerate(br):
                    if coeff.is_zero():
                        continue
                    val = c((m,) + rest)
                    total = _add(total, tuple(coeff * x for x in val), sign)
        out[idx] = total
    return CECochain(k + 1, c.q, A.ring, out)


def _basis_cochains(A: LieAlgebroid, q: int, k: int, dmax: int):
    """Cochains with a single monomial value on a single index tuple, in a fixed order."""
    ring = A.ring
    monos = _exponents(len(ring), dmax)
    zero = Poly.zero(ring)
    for idx in combinations(range(A.rank), k):
        for a in range(q):
            for e in monos:
                val = tuple(Poly.monomial(ring, e) if b == a else zero for b in range(q))
                yield CECochain(k, q, ring, {idx: val})


def d_squared_check(A: LieAlgebroid, M: CoefficientModule, dmax: int = 2,
                    degrees: Sequence[int] = (0, 1)) -> bool:
    """``d o d = 0`` on every basis cochain of the given degrees with coefficient degree ``<= dmax``."""
    for k in degrees:
        if k + 2 > A.rank:
            continue
        for c in _basis_cochains(A, M.q, k, dmax):
            if not ce_differential(ce_differential(c, A, M), A, M).is_zero():
                return False
    return True


@dataclass(frozen=True)
class DegreeRank:
    degree: int
    slice_dim: int
    kernel: int
    image: int
    estimate: int
    edge: bool

    def as_dict(self) -> dict:
        return {"degree": self.degree, "slice_dim": self.slice_dim, "kernel": self.kernel,
                "image": self.image, "estimate": self.estimate, "edge": self.edge}

    def __str__(self):
        return (f"H^{self.degree}: slice {self.slice_dim}, kernel {self.kernel}, "
                f"image {self.image}, estimate {self.estimate}" + (" (edge)" if self.edge else ""))


def _coordinates(c: CECochain):
    """Sparse coordinates ``(index tuple, module slot, exponent) -> coefficient``."""
    out = {}
    for idx, v in c.values.items():
        for a, p in enumerate(v):
            for e, coeff in p.terms.items():
                out[(idx, a, e)] = coeff
    return out


def _differential_matrix(A, M, k, dmax):
    """Images of the degree-``k`` slice basis under ``d``, as sparse coordinate dicts.

    Also returns the set of degree shifts ``deg(output term) - deg(input monomial)``.
    """
    images = []
    shifts = set()
    for c in _basis_cochains(A, M.q, k, dmax):
        (val,) = c.values.values()
        din = max(p.degree() for p in val if not p.is_zero())
        coords = _coordinates(ce_differential(c, A, M))
        shifts.update(sum(e) - din for (_, _, e) in coords)
        images.append(coords)
    return images, shifts


def _rank_of(columns: List[dict], restrict=None) -> int:
    keys = sorted({key for col in columns for key in col if restrict is None or restrict(key)})
    if not keys or not columns:
        return 0
    rows = [[col.get(key, 0) for col in columns] for key in keys]
    return matrix_rank(rows)


def _degree_report(A, M, k, dmax) -> DegreeRank:
    ring = A.ring
    slice_dim = len(list(combinations(range(A.rank), k))) * M.q * len(_exponents(len(ring), dmax))
    if k < A.rank:
        images_k, _ = _differential_matrix(A, M, k, dmax)
        kernel = slice_dim - _rank_of(images_k)
    else:
        kernel = slice_dim
    if k == 0:
        return DegreeRank(k, slice_dim, kernel, 0, kernel, False)
    prev, shifts = _differential_matrix(A, M, k - 1, dmax)
    outside = lambda key: sum(key[2]) > dmax  # noqa: E731
    # dim(d V ∩ V_k) = nullity(P_out d) - nullity(d)
    n_prev = len(prev)
    image = (n_prev - _rank_of(prev, outside)) - (n_prev - _rank_of(prev))
    edge = len(shifts) > 1 or any(s < 0 for s in shifts)
    return DegreeRank(k, slice_dim, kernel, image, kernel - image, edge)


def truncated_cohomology_ranks(A: LieAlgebroid, M: CoefficientModule, window: TruncationWindow,
                               degrees: Optional[Sequence[int]] = None, all_degrees: bool = False,
                               jobs: int = 1) -> List[DegreeRank]:
    """Kernel, image and difference of ``d`` on the coefficient-degree ``<= dmax`` slices.

    Degrees 0 and 1 by default; ``all_degrees`` extends to ``0..rank``.
    """
    if degrees is None:
        degrees = range(A.rank + 1) if all_degrees else (0, 1)
    degrees = [k for k in degrees if 0 <= k <= A.rank]
    if jobs > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda k: _degree_report(A, M, k, window.dmax), degrees))
    return [_degree_report(A, M, k, window.dmax) for k in degrees]


# ---------------------------------------------------------------------------
# Bott connection
# ---------------------------------------------------------------------------

def bott_connection(F: Foliation, complement: Sequence[VectorField]) -> CoefficientModule:
    """``nabla_D [N] = [[D, N]]`` expanded in the classes of the complement fields.

    The returned module lives over the algebroid of ``F``'s generators.
    """
    if not F.verify():
        raise DomainError("foliation is not involutive")
    complement = list(complement)
    ring = F.ring
    n = len(ring)
    q = len(complement)
    ambient = Submodule([N.coeffs for N in complement] + [D.coeffs for D in F.gens], rank=n, ring=ring)
    nabla = []
    for D in F.gens:
        row = []
        for N in complement:
            cof = ambient.lift(lie_bracket(D, N).coeffs)
            if cof is None:
                raise BasisError(f"[{D}, {N}] is not in the span of the complement and F")
            row.append(tuple(cof[:q]))
        nabla.append(row)
    module = CoefficientModule(algebroid_from_foliation(F), q, nabla)
    module.flat = module.flatness_check()
    return module


# ---------------------------------------------------------------------------
# logarithmic de Rham generators for free divisors
# ---------------------------------------------------------------------------

def log_deRham_generators(chart: DivisorChart, gens: Sequence[VectorField]) -> List[List[RationalFunction]]:
    """Dual basis ``omega_i = sum_k W[i][k] dx_k`` with ``omega_i(D_j) = delta_ij``."""
    try:
        free = saito_free_check(gens, chart)
    except ArityError as exc:
        raise NotFreeError(str(exc)) from exc
    if not free:
        raise NotFreeError(f"generators do not certify <{chart.g}> as a free divisor")
    n = len(chart.ring)
    CT = [[gens[j].coeffs[k] for j in range(n)] for k in range(n)]
    # W C^T = I, so W is the inverse of C^T
    return fraction_matrix_inverse(CT)


def dual_pairing_check(duals: Sequence[Sequence[RationalFunction]], gens: Sequence[VectorField]) -> bool:
    for i, w in enumerate(duals):
        for j, D in enumerate(gens):
            total = RationalFunction(Poly.zero(D.ring))
            for wk, ck in zip(w, D.coeffs):
                total = total + wk * ck
            if total != (1 if i == j else 0):
                return False
    return True
