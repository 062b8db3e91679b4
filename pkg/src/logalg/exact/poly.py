"""Sparse multivariate polynomials over Q(i), monomial orders, text I/O.

A :class:`Poly` is a map from exponent tuples to nonzero Gaussian rationals
over an ordered tuple of variable names (its *ring*).  Polynomials are
treated as immutable values: every operation returns a new object.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Sequence, Tuple

from ..errors import ParseError, RingMismatchError
from .numbers import ONE, ZERO, GaussianRational, I

Exp = Tuple[int, ...]
Ring = Tuple[str, ...]

__all__ = [
    "Poly",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "make_ring",
    "parse_poly",
    "doubled_ring",
    "conj",
    "embed",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def make_ring(names: Iterable[str]) -> Ring:
    ring = tuple(names)
    seen = set()
    for name in ring:
        if not _IDENT.fullmatch(name):
            raise ValueError(f"invalid variable name {name!r}")
        if name == "i":
            raise ValueError("'i' is reserved for the imaginary unit")
        if name in seen:
            raise ValueError(f"duplicate variable {name!r}")
        seen.add(name)
    return ring


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

def _grevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e: Exp):
    return e


@dataclass(frozen=True)
class MonomialOrder:
    """A term order; ``module`` selects position-over-term or term-over-position.

    Keys are increasing in the order: ``max(..., key=order.key)`` is the
    leading monomial.  Module position 0 is the most significant.
    """

    kind: str = "grevlex"
    module: str = "pot"

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.module not in ("pot", "top"):
            raise ValueError(f"unknown module extension {self.module!r}")

    @property
    def key(self) -> Callable[[Exp], tuple]:
        return _grevlex_key if self.kind == "grevlex" else _lex_key

    def module_key(self, pos: int, e: Exp):
        if self.module == "pot":
            return (-pos, self.key(e))
        return (self.key(e), -pos)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

def _coerce_coeff(c) -> GaussianRational:
    return c if type(c) is GaussianRational else GaussianRational.coerce(c)


class Poly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Dict[Exp, object] | None = None):
        self.ring: Ring = tuple(ring)
        clean = {}
        if terms:
            n = len(self.ring)
            for e, c in terms.items():
                c = _coerce_coeff(c)
                if c:
                    if len(e) != n:
                        raise ValueError("exponent length does not match ring")
                    clean[tuple(e)] = c
        self.terms: Dict[Exp, GaussianRational] = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, ring: Ring, terms: Dict[Exp, GaussianRational]) -> "Poly":
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring) -> "Poly":
        return cls._from_clean(tuple(ring), {})

    @classmethod
    def const(cls, ring, c) -> "Poly":
        ring = tuple(ring)
        c = _coerce_coeff(c)
        return cls._from_clean(ring, {(0,) * len(ring): c} if c else {})

    @classmethod
    def var(cls, ring, name) -> "Poly":
        ring = tuple(ring)
        idx = name if isinstance(name, int) else ring.index(name)
        e = [0] * len(ring)
        e[idx] = 1
        return cls._from_clean(ring, {tuple(e): ONE})

    @classmethod
    def monomial(cls, ring, exp: Exp, c=1) -> "Poly":
        return cls(ring, {tuple(exp): c})

    @classmethod
    def parse(cls, text: str, ring) -> "Poly":
        return parse_poly(text, ring)

    # -- basic queries ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self) -> GaussianRational:
        return self.terms.get((0,) * len(self.ring), ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self, order: MonomialOrder = GREVLEX) -> Tuple[Exp, GaussianRational]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.ring, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._from_clean(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._from_clean(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = _coerce_coeff(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Poly.zero(self.ring)
            return Poly._from_clean(self.ring, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.ring)
        out: Dict[Exp, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._from_clean(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        """Division by a nonzero constant only."""
        if isinstance(other, Poly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("polynomial division requires a nonzero constant divisor")
            other = other.constant_coeff()
        c = _coerce_coeff(other)
        return self * c.inverse()

    def mul_term(self, exp: Exp, c: GaussianRational) -> "Poly":
        return Poly._from_clean(
            self.ring,
            {tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()},
        )

    def diff(self, var) -> "Poly":
        idx = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[idx]
            if k:
                e2 = list(e)
                e2[idx] = k - 1
                out[tuple(e2)] = c * k
        return Poly._from_clean(self.ring, out)

    def subs(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute ``images[i]`` for variable ``i`` (all images share one ring)."""
        if len(images) != len(self.ring):
            raise ValueError("need one image per variable")
        target = images[0].ring if images else self.ring
        for p in images:
            if p.ring != target:
                raise RingMismatchError("substitution images live in different rings")
        result = Poly.zero(target)
        powers: Dict[Tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for idx, k in enumerate(e):
                if k:
                    key = (idx, k)
                    if key not in powers:
                        powers[key] = images[idx] ** k
                    term = term * powers[key]
            result = result + term
        return result

    def conj_coeffs(self) -> "Poly":
        return Poly._from_clean(self.ring, {e: c.conjugate() for e, c in self.terms.items()})

    def divexact(self, other: "Poly") -> "Poly":
        """Exact quotient ``self / other``; ValueError if ``other`` does not divide."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e, lead_c = other.leading()
        inv = lead_c.inverse()
        rem = self
        quot: Dict[Exp, GaussianRational] = {}
        while rem.terms:
            e, c = rem.leading()
            if any(a < b for a, b in zip(e, lead_e)):
                raise ValueError("polynomial does not divide exactly")
            m = tuple(a - b for a, b in zip(e, lead_e))
            q = c * inv
            quot[m] = q
            rem = rem - other.mul_term(m, q)
        return Poly._from_clean(self.ring, quot)

    def in_ring(self, ring: Sequence[str]) -> "Poly":
        """Re-express in a ring containing every variable that occurs."""
        ring = tuple(ring)
        idx = []
        for j, name in enumerate(self.ring):
            if name in ring:
                idx.append(ring.index(name))
            else:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(ring)
            for j, k in enumerate(e):
                if k:
                    if idx[j] is None:
                        raise RingMismatchError(f"variable {self.ring[j]!r} not in target ring")
                    e2[idx[j]] = k
            out[tuple(e2)] = c
        return Poly._from_clean(ring, out)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            c = _coerce_coeff(other)
        except TypeError:
            return NotImplemented
        if not c:
            return not self.terms
        return self.terms == {(0,) * len(self.ring): c}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- printing ---------------------------------------------------------
    def to_str(self, order: MonomialOrder = GREVLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            parts.append(_term_str(self.ring, e, c))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r}, ring={self.ring})"


def _mono_str(ring: Ring, e: Exp) -> str:
    factors = []
    for name, k in zip(ring, e):
        if k == 1:
            factors.append(name)
        elif k > 1:
            factors.append(f"{name}^{k}")
    return "*".join(factors)


def _term_str(ring: Ring, e: Exp, c: GaussianRational) -> str:
    mono = _mono_str(ring, e)
    if c.is_real:
        if not mono:
            return str(c.re)
        if c.re == 1:
            return mono
        if c.re == -1:
            return "-" + mono
        return f"{c.re}*{mono}"
    if not c.re:
        im = c.im
        if not mono:
            return str(c)
        if im == 1:
            return f"i*{mono}"
        if im == -1:
            return f"-i*{mono}"
        return f"{im}*i*{mono}"
    return f"({c})*{mono}" if mono else f"({c})"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n and not text[pos:].isspace():
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class ExprParser:
    """Recursive-descent parser for ``+ - * / ^`` expressions.

    ``atom(name, pos)`` resolves identifiers, ``number(gr)`` builds constants,
    and ``caret(base, rhs, pos)`` handles ``^`` whose right side is not an
    integer literal (wedge for forms, an error for polynomials).
    """

    def __init__(self, text: str, atom, number, caret=None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.atom = atom
        self.number = number
        self.caret = caret

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.peek()[2]
        raise ParseError(msg, self.text, pos)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("num", "ident") or tok[1] == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected token {tok[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except (ZeroDivisionError, TypeError) as exc:
                    self.error(f"invalid division: {exc}", pos)
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            value = self.unary()
            return -value if tok[1] == "-" else value
        return self.power()

    def power(self):
        base = self.atom_()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            pos = self.take()[2]
            tok = self.peek()
            if tok[0] == "num":
                self.take()
                try:
                    return base ** int(tok[1])
                except (ValueError, TypeError) as exc:
                    self.error(str(exc), pos)
            if self.caret is None:
                self.error("exponent must be a nonnegative integer literal", tok[2])
            rhs = self.power()
            return self.caret(base, rhs, pos)
        return base

    def atom_(self):
        kind, val, pos = self.take()
        if kind == "num":
            return self.number(GaussianRational(int(val)))
        if kind == "ident":
            return self.atom(val, pos)
        if kind == "op" and val == "(":
            value = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return value
        if kind == "end":
            self.error("unexpected end of input", pos)
        self.error(f"unexpected token {val!r}", pos)


def parse_poly(text: str, ring: Sequence[str]) -> Poly:
    """Parse polynomial text over ``ring``.

    >>> str(parse_poly("x^2 + 4*y*z", ("x", "y", "z")))
    'x^2 + 4*y*z'
    """
    ring = tuple(ring)

    def atom(name, pos):
        if name in ring:
            return Poly.var(ring, name)
        if name == "i":
            return Poly.const(ring, I)
        raise ParseError(f"unknown variable {name!r}", text, pos)

    return ExprParser(text, atom, lambda c: Poly.const(ring, c)).parse()


# ---------------------------------------------------------------------------
# doubled ring (conjugate variables)
# ---------------------------------------------------------------------------

def doubled_ring(ring: Sequence[str]) -> Ring:
    """``(x1..xn)`` -> ``(x1..xn, x1bar..xnbar)``."""
    ring = tuple(ring)
    return ring + tuple(name + "bar" for name in ring)


def embed(p: Poly) -> Poly:
    """View ``p`` as a DoubledPoly with no barred variables."""
    n = len(p.ring)
    return Poly._from_clean(
        doubled_ring(p.ring), {e + (0,) * n: c for e, c in p.terms.items()}
    )


def conj(p: Poly) -> Poly:
    """Complex conjugation on a DoubledPoly: swap ``x <-> xbar``, conjugate coefficients.

    A Poly over the undoubled ring is embedded first, so ``conj(f)`` of a
    holomorphic ``f`` is its antiholomorphic partner.
    """
    ring = p.ring
    n2 = len(ring)
    if n2 % 2 or ring[n2 // 2:] != tuple(v + "bar" for v in ring[: n2 // 2]):
        p = embed(p)
        ring = p.ring
        n2 = len(ring)
    n = n2 // 2
    return Poly._from_clean(
        ring, {e[n:] + e[:n]: c.conjugate() for e, c in p.terms.items()}
    )
