"""Bilinear and Hermitian metrics, quotient metrics and connections.

Connections and the Koszul formula use the symmetric bilinear form. The
Hermitian form exists for metric tables and conjugate-symmetry checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .errors import (
    DomainError,
    InvalidActionError,
    SingularMatrixError,
    SingularMetricError,
    UnsupportedChartError,
)
from .exact import GaussianRational, Ideal, Poly, RationalFunction, conj, embed, parse_poly
from .exact.linalg import det, fraction_matrix_inverse
from .forms import VectorField, apply
from .loggeom import (
    DivisorChart,
    cond1_check,
    is_logarithmic,
    quotient_representative,
    standard_pairing,
    tangential_projection,
)

__all__ = [
    "standard_bilinear",
    "standard_hermitian",
    "BilinearMetric",
    "HermitianMetric",
    "hermitian_table",
    "quotient_metric",
    "standard_connection",
    "Connection",
    "ChartConnection",
    "koszul_christoffel",
    "levi_civita_check",
    "induced_connection_on_Y",
    "two_canonical_L_connections",
    "GroupAction",
    "group_invariance_check",
]

Section = Tuple[Poly, ...]


def standard_bilinear(D1: VectorField, D2: VectorField) -> Poly:
    """``sum f_i g_i``."""
    return standard_pairing(D1, D2)


def standard_hermitian(D1: VectorField, D2: VectorField) -> Poly:
    """``sum f_i conj(g_i)`` in the doubled ring; antilinear in the second slot."""
    if D1.ring != D2.ring:
        raise ValueError("fields over different rings")
    terms = [embed(f) * conj(g) for f, g in zip(D1.coeffs, D2.coeffs)]
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


class BilinearMetric:
    """Symmetric ``r x r`` matrix of polynomials ``g_ij = <e_i, e_j>``."""

    def __init__(self, matrix: Sequence[Sequence[Poly]]):
        self.matrix: Tuple[Tuple[Poly, ...], ...] = tuple(tuple(row) for row in matrix)
        r = len(self.matrix)
        if r == 0 or any(len(row) != r for row in self.matrix):
            raise ValueError("metric matrix must be square and nonempty")
        for i in range(r):
            for j in range(i + 1, r):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i}, {j})")
        self._inverse = None

    @classmethod
    def identity(cls, ring, r: int) -> "BilinearMetric":
        return cls([[Poly.const(ring, 1 if i == j else 0) for j in range(r)] for i in range(r)])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[str]], ring) -> "BilinearMetric":
        return cls([[parse_poly(s, ring) for s in row] for row in rows])

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def ring(self):
        return self.matrix[0][0].ring

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def det(self) -> Poly:
        return det(self.matrix)

    @property
    def nondegenerate(self) -> bool:
        return not self.det().is_zero()

    def inverse(self) -> List[List[RationalFunction]]:
        if self._inverse is None:
            try:
                self._inverse = fraction_matrix_inverse(self.matrix)
            except SingularMatrixError as exc:
                raise SingularMetricError("degenerate metric (determinant is zero)") from exc
        return self._inverse

    def pair(self, u: Sequence, v: Sequence):
        """``sum u_i g_ij v_j``; entries may be Polys or RationalFunctions."""
        total = None
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                g = self.matrix[i][j]
                if g.is_zero():
                    continue
                t = a * g * b if isinstance(a, RationalFunction) else b * (a * g)
                total = t if total is None else total + t
        return total if total is not None else Poly.zero(self.ring)

    def rows(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.matrix]


class HermitianMetric:
    """Matrix over the doubled ring with ``h_ij = conj(h_ji)``."""

    def __init__(self, matrix: Sequence[Sequence[Poly]]):
        self.matrix = tuple(tuple(row) for row in matrix)
        r = len(self.matrix)
        if r == 0 or any(len(row) != r for row in self.matrix):
            raise ValueError("metric matrix must be square and nonempty")
        for i in range(r):
            for j in range(i, r):
                if self.matrix[i][j] != conj(self.matrix[j][i]):
                    raise ValueError(f"matrix is not conjugate-symmetric at ({i}, {j})")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def det(self) -> Poly:
        return det(self.matrix)

    @property
    def nondegenerate(self) -> bool:
        return not self.det().is_zero()


def hermitian_table(fields: Sequence[VectorField]) -> HermitianMetric:
    return HermitianMetric([[standard_hermitian(a, b) for b in fields] for a in fields])


def quotient_metric(D1: VectorField, D2: VectorField, ideal: Ideal) -> Poly:
    """Pairing of two logarithmic fields reduced modulo ``I``."""
    for D in (D1, D2):
        if not is_logarithmic(D, ideal):
            raise DomainError(f"{D} is not tangent to V({ideal})")
    return ideal.normal_form(standard_bilinear(D1, D2))


def standard_connection(D: VectorField, section: Sequence[Poly]) -> Section:
    """Flat connection on a trivialized module: apply ``D`` to each coefficient."""
    return tuple(apply(D, s) for s in section)


# ---------------------------------------------------------------------------
# connections on algebroids
# ---------------------------------------------------------------------------

@dataclass
class Connection:
    """L-connection data ``nabla_{e_i} e_j = sum_k gamma[k][i][j] e_k``."""

    gamma: List[List[List[RationalFunction]]]

    @property
    def rank(self) -> int:
        return len(self.gamma)

    @classmethod
    def zero(cls, ring, r: int) -> "Connection":
        z = Poly.zero(ring)
        return cls([[[RationalFunction(z) for _ in range(r)] for _ in range(r)] for _ in range(r)])

    @classmethod
    def from_polys(cls, gamma) -> "Connection":
        return cls([[[x if isinstance(x, RationalFunction) else RationalFunction(x) for x in row]
                     for row in mat] for mat in gamma])

    def basis(self, i: int, j: int) -> List[RationalFunction]:
        return [self.gamma[k][i][j] for k in range(self.rank)]

    def covariant(self, algebroid, u: Sequence[Poly], v: Sequence[Poly]) -> List[RationalFunction]:
        """``nabla_u v = sum_i u_i (a_i(v_k) e_k + v_j gamma^k_ij e_k)``."""
        r = self.rank
        out = [RationalFunction(Poly.zero(algebroid.ring)) for _ in range(r)]
        for i in range(r):
            if u[i].is_zero():
                continue
            a_i = algebroid.anchor[i]
            for k in range(r):
                acc = RationalFunction(apply(a_i, v[k]))
                for j in range(r):
                    if not v[j].is_zero():
                        acc = acc + self.gamma[k][i][j] * v[j]
                out[k] = out[k] + acc * u[i]
        return out


def _metric_pair_basis(g: BilinearMetric, vec: Sequence[Poly], l: int) -> Poly:
    """``< sum_m vec_m e_m, e_l >``."""
    out = Poly.zero(g.ring)
    for m, c in enumerate(vec):
        if not c.is_zero():
            out = out + c * g[m, l]
    return out


def koszul_christoffel(algebroid, metric: BilinearMetric) -> Connection:
    """Christoffel symbols of the Levi-Civita L-connection via the Koszul formula."""
    r = algebroid.rank
    if metric.rank != r:
        raise ValueError("metric rank differs from algebroid rank")
    ginv = metric.inverse()
    a = algebroid.anchor
    c = algebroid.structure
    K = {}
    for i, j, l in product(range(r), repeat=3):
        val = apply(a[i], metric[j, l]) + apply(a[j], metric[i, l]) - apply(a[l], metric[i, j])
        val = val + _metric_pair_basis(metric, c[i][j], l)
        val = val - _metric_pair_basis(metric, c[i][l], j)
        val = val - _metric_pair_basis(metric, c[j][l], i)
        K[i, j, l] = val
    half = Poly.const(metric.ring, GaussianRational(1) / 2)
    gamma = []
    for k in range(r):
        mat = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = RationalFunction(Poly.zero(metric.ring))
                for l in range(r):
                    if not K[i, j, l].is_zero() and not ginv[k][l].is_zero():
                        acc = acc + ginv[k][l] * K[i, j, l]
                row.append(acc * half)
            mat.append(row)
        gamma.append(mat)
    return Connection(gamma)


def levi_civita_check(conn: Connection, algebroid, metric: BilinearMetric) -> bool:
    """Metric compatibility and vanishing torsion on all basis triples."""
    r = algebroid.rank
    if conn.rank != r or metric.rank != r:
        return False
    a = algebroid.anchor
    c = algebroid.structure
    G = conn.gamma
    for i, j, k in product(range(r), repeat=3):
        lhs = RationalFunction(apply(a[i], metric[j, k]))
        rhs = RationalFunction(Poly.zero(metric.ring))
        for l in range(r):
            rhs = rhs + G[l][i][j] * metric[l, k] + G[l][i][k] * metric[j, l]
        if lhs != rhs:
            return False
    for i, j, k in product(range(r), repeat=3):
        if G[k][i][j] - G[k][j][i] != RationalFunction(c[i][j][k]):
            return False
    return True


# ---------------------------------------------------------------------------
# induced connection on Y
# ---------------------------------------------------------------------------

def _principal_generator(ideal: Ideal) -> Poly:
    gens = [g for g in ideal.gens if not g.is_zero()]
    if len(gens) != 1:
        raise UnsupportedChartError("the induced connection needs a principal ideal")
    return gens[0]


def induced_connection_on_Y(D1: VectorField, D2: VectorField, ideal: Ideal) -> VectorField:
    """Tangential projection of ``nabla_{D1} D2``, reduced to its quotient representative."""
    chart = DivisorChart(_principal_generator(ideal))
    if not cond1_check(chart):
        raise UnsupportedChartError(
            f"<grad g, grad g> - 1 is not in <{chart.g}>; projection does not land in T(-log Y)")
    for D in (D1, D2):
        if not is_logarithmic(D, ideal):
            raise DomainError(f"{D} is not tangent to V({ideal})")
    nabla = VectorField(standard_connection(D1, D2.coeffs))
    proj = tangential_projection(nabla, chart)
    return quotient_representative(proj.field, chart.ideal)


# ---------------------------------------------------------------------------
# chart connections and the two canonical L-connections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartConnection:
    """Connection on a trivial rank-``q`` module over one chart.

    ``nabla_X(s)_b = X(s_b) + sum_i X_i sum_a s_a forms[i][a][b]``.
    """

    ring: Tuple[str, ...]
    rank: int
    forms: Optional[Tuple] = None

    @classmethod
    def standard(cls, ring, rank: int) -> "ChartConnection":
        return cls(tuple(ring), rank, None)

    def __call__(self, X: VectorField, s: Sequence[Poly]) -> Section:
        out = list(standard_connection(X, s))
        if self.forms is not None:
            for i, Xi in enumerate(X.coeffs):
                if Xi.is_zero():
                    continue
                for a, sa in enumerate(s):
                    if sa.is_zero():
                        continue
                    for b in range(self.rank):
                        A = self.forms[i][a][b]
                        if not A.is_zero():
                            out[b] = out[b] + Xi * sa * A
        return tuple(out)


def two_canonical_L_connections(algebroid, nabla: Optional[ChartConnection] = None):
    """``(nabla0, nabla1)`` acting on sections of the algebroid.

    ``nabla0_u v = nabla_{a(u)} v`` and ``nabla1_u v = nabla_{a(v)} u + [u, v]``.
    """
    if nabla is None:
        nabla = ChartConnection.standard(algebroid.ring, algebroid.rank)

    def nabla0(u, v):
        return nabla(algebroid.anchor_of(u), v)

    def nabla1(u, v):
        first = nabla(algebroid.anchor_of(v), u)
        br = algebroid.bracket(u, v)
        return tuple(x + y for x, y in zip(first, br))

    return nabla0, nabla1


# ---------------------------------------------------------------------------
# finite linear group actions
# ---------------------------------------------------------------------------

def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum((A[i][k] * B[k][j] for k in range(n)), GaussianRational(0))
                       for j in range(n)) for i in range(n))


def _const_det(M) -> GaussianRational:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = GaussianRational(0)
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _const_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class GroupAction:
    """Finite group of linear substitutions ``x_j -> sum_k M[j][k] x_k``.

    ``g . f`` is ``f`` with every ``x_j`` replaced by the image of ``x_j``.
    Invertibility, closure and inverses are checked at construction.
    """

    def __init__(self, ring, matrices):
        self.ring = tuple(ring)
        n = len(self.ring)
        mats = []
        for M in matrices:
            M = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in M)
            if len(M) != n or any(len(row) != n for row in M):
                raise InvalidActionError("substitution matrix has the wrong shape")
            if not _const_det(M):
                raise InvalidActionError("substitution is not invertible")
            if M not in mats:
                mats.append(M)
        if not mats:
            raise InvalidActionError("empty group")
        members = set(mats)
        for A in mats:
            for B in mats:
                if _matmul(A, B) not in members:
                    raise InvalidActionError("element set is not closed under composition")
        ident = tuple(tuple(GaussianRational(1 if i == j else 0) for j in range(n)) for i in range(n))
        self._inverse = {}
        for A in mats:
            inv = next((B for B in mats if _matmul(A, B) == ident), None)
            if inv is None:
                raise InvalidActionError("element set is not closed under inverses")
            self._inverse[A] = inv
        self.elements: Tuple = tuple(mats)

    @classmethod
    def from_strings(cls, ring, substitutions: Sequence[Sequence[str]]) -> "GroupAction":
        """Each element given as images of the variables, e.g. ``["y", "x"]``."""
        ring = tuple(ring)
        mats = []
        for images in substitutions:
            rows = []
            for text in images:
                p = parse_poly(text, ring)
                if any(sum(e) != 1 for e in p.terms):
                    raise InvalidActionError(f"{text!r} is not a linear form")
                rows.append([p.terms.get(tuple(1 if k == j else 0 for k in range(len(ring))),
                                         GaussianRational(0)) for j in range(len(ring))])
            mats.append(rows)
        return cls(ring, mats)

    def inverse(self, M):
        return self._inverse[M]

    def images(self, M) -> List[Poly]:
        out = []
        for row in M:
            p = Poly.zero(self.ring)
            for k, c in enumerate(row):
                if c:
                    p = p + Poly.var(self.ring, k) * c
            out.append(p)
        return out

    def act(self, M, f: Poly) -> Poly:
        return f.subs(self.images(M))

    def act_field(self, M, D: VectorField) -> VectorField:
        """``(g . D)(f) = g . D(g^-1 . f)``, read off on coordinates."""
        inv = self.inverse(M)
        return VectorField(tuple(self.act(M, apply(D, self.act(inv, x))) for x in
                                 (Poly.var(self.ring, j) for j in range(len(self.ring)))))


def group_invariance_check(action: GroupAction, rank: int,
                           connection: Optional[ChartConnection] = None) -> bool:
    """``g . nabla_{g^-1 D}(g^-1 s) = nabla_D s`` on coordinate fields and sections of degree <= 2."""
    ring = action.ring
    n = len(ring)
    if connection is None:
        connection = ChartConnection.standard(ring, rank)
    monomials = [Poly.monomial(ring, e) for e in _exponents(n, 2)]
    zero = Poly.zero(ring)
    for M in action.elements:
        inv = action.inverse(M)
        for i in range(n):
            D = VectorField.partial(ring, i)
            Dinv = action.act_field(inv, D)
            for a in range(rank):
                for m in monomials:
                    s = tuple(m if b == a else zero for b in range(rank))
                    s_inv = tuple(action.act(inv, x) for x in s)
                    moved = tuple(action.act(M, x) for x in connection(Dinv, s_inv))
                    if moved != connection(D, s):
                        return False
    return True


def _exponents(n: int, dmax: int):
    """All exponent tuples of total degree ``<= dmax``, graded then lex."""
    out = []
    for d in range(dmax + 1):
        out.extend(_exact_degree(n, d))
    return out


def _exact_degree(n: int, d: int):
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in _exact_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out
