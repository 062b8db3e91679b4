"""Exact linear algebra: Q(i) row reduction and fraction-field matrices."""
from __future__ import annotations

from typing import List, Sequence, Tuple

from ..errors import RingMismatchError, SingularMatrixError
from .numbers import ZERO, GaussianRational
from .poly import Poly

__all__ = [
    "RationalFunction",
    "det",
    "adjugate",
    "fraction_matrix_inverse",
    "rref",
    "nullspace",
    "matrix_rank",
]


class RationalFunction:
    """``num/den`` with ``den != 0``, compared by cross-multiplication.

    Arithmetic results cancel exact divisors and common monomial factors
    (:meth:`reduced`); there is no multivariate gcd, so the form is not canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(num.ring, 1)
        if num.ring != den.ring:
            raise RingMismatchError("numerator and denominator in different rings")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction(Poly.const(self.ring, other))

    def _simple(self, num: Poly, den: Poly) -> "RationalFunction":
        return RationalFunction(num, den).reduced()

    def reduced(self) -> "RationalFunction":
        num, den = self.num, self.den
        if num.is_zero():
            return RationalFunction(num)
        if not den.is_constant():
            for a, b in ((num, den), (den, num)):
                try:
                    q = a.divexact(b)
                except ValueError:
                    continue
                num, den = (q, Poly.const(num.ring, 1)) if a is num else (Poly.const(num.ring, 1), q)
                break
            else:
                exps = list(num.terms) + list(den.terms)
                common = tuple(min(e[i] for e in exps) for i in range(len(num.ring)))
                if any(common):
                    m = Poly.monomial(num.ring, common)
                    num, den = num.divexact(m), den.divexact(m)
        lead = den.leading()[1].inverse()
        return RationalFunction(num * lead, den * lead)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return self._simple(self.num + o.num, self.den)
        return self._simple(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return self._simple(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return self._simple(self.num * o.den, self.den * o.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable (equality is by cross-multiplication)")

    def __str__(self):
        if self.num.is_zero():
            return "0"
        r = self.reduced()
        if r.den == 1:
            return str(r.num)
        wrap = lambda t: f"({t})" if " " in t or "/" in t else t  # noqa: E731
        return f"{wrap(str(r.num))}/{wrap(str(r.den))}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------

def det(M: Sequence[Sequence[Poly]]):
    """Determinant by cofactor expansion along the first row (small matrices)."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = M[0][0] * 0
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(M: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    n = len(M)
    if n == 1:
        return [[M[0][0] * 0 + 1]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            c = det(minor)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def fraction_matrix_inverse(M: Sequence[Sequence[Poly]]) -> List[List[RationalFunction]]:
    """``adjugate(M)/det(M)`` over the fraction field; SingularMatrixError if ``det M = 0``."""
    M = [list(row) for row in M]
    d = det(M)
    if d.is_zero():
        raise SingularMatrixError("matrix has zero determinant")
    adj = adjugate(M)
    return [[RationalFunction(a, d) for a in row] for row in adj]


# ---------------------------------------------------------------------------
# constant matrices over Q(i)
# ---------------------------------------------------------------------------

def rref(A: Sequence[Sequence[GaussianRational]]) -> Tuple[List[List[GaussianRational]], List[int]]:
    """Reduced row echelon form and pivot columns."""
    R = [[GaussianRational.coerce(x) for x in row] for row in A]
    if not R:
        return R, []
    ncols = len(R[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def matrix_rank(A) -> int:
    return len(rref(A)[1])


def nullspace(A: Sequence[Sequence[GaussianRational]], ncols: int | None = None) -> List[List[GaussianRational]]:
    """Basis of ``{v : A v = 0}``, one vector per free column (free entry = 1)."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[GaussianRational(1) if j == i else ZERO for j in range(ncols)] for i in range(ncols)]
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = GaussianRational(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
