"""Polynomial vector fields and differential forms on one affine chart."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DegreeError, ParseError, RingMismatchError
from .exact import Poly, Submodule, parse_poly
from .exact.numbers import I
from .exact.poly import ExprParser

__all__ = [
    "VectorField",
    "DiffForm",
    "Foliation",
    "apply",
    "lie_bracket",
    "gradient",
    "exterior_d",
    "contract",
    "wedge",
    "lie_derivative",
    "is_basic",
    "involutivity_check",
    "parse_form",
]


@dataclass(frozen=True)
class VectorField:
    """The derivation ``sum_i coeffs[i] * d/dx_i``."""

    coeffs: Tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a vector field needs a ring with at least one variable")
        ring = self.coeffs[0].ring
        if len(ring) != len(self.coeffs):
            raise ValueError("coefficient count must equal the number of variables")
        for c in self.coeffs:
            if c.ring != ring:
                raise RingMismatchError("coefficients live in different rings")

    @property
    def ring(self):
        return self.coeffs[0].ring

    @classmethod
    def zero(cls, ring) -> "VectorField":
        return cls(tuple(Poly.zero(ring) for _ in ring))

    @classmethod
    def partial(cls, ring, var) -> "VectorField":
        ring = tuple(ring)
        idx = var if isinstance(var, int) else ring.index(var)
        return cls(tuple(Poly.const(ring, 1 if j == idx else 0) for j in range(len(ring))))

    @classmethod
    def parse(cls, coeffs: Sequence[str], ring) -> "VectorField":
        return cls(tuple(parse_poly(c, ring) for c in coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return VectorField(tuple(-a for a in self.coeffs))

    def __mul__(self, f) -> "VectorField":
        return VectorField(tuple(f * a for a in self.coeffs))

    __rmul__ = __mul__

    def __str__(self):
        parts = []
        for name, c in zip(self.ring, self.coeffs):
            if c.is_zero():
                continue
            s = str(c)
            if len(c.terms) > 1:
                s = f"({s})"
            if s == "1":
                parts.append(f"d{name}")
            elif s == "-1":
                parts.append(f"-d{name}")
            else:
                parts.append(f"{s}*d{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def apply(D: VectorField, f: Poly) -> Poly:
    """``D(f) = sum_i D_i * df/dx_i``."""
    if D.ring != f.ring:
        raise RingMismatchError(f"ring mismatch: {D.ring} vs {f.ring}")
    out = Poly.zero(f.ring)
    for i, c in enumerate(D.coeffs):
        if not c.is_zero():
            out = out + c * f.diff(i)
    return out


def lie_bracket(D1: VectorField, D2: VectorField) -> VectorField:
    """Commutator ``[D1, D2]``; its i-th coefficient is ``D1(D2_i) - D2(D1_i)``."""
    return VectorField(tuple(apply(D1, b) - apply(D2, a) for a, b in zip(D1.coeffs, D2.coeffs)))


def gradient(g: Poly) -> VectorField:
    """Gradient with respect to the standard bilinear metric."""
    return VectorField(tuple(g.diff(i) for i in range(g.nvars)))


# ---------------------------------------------------------------------------
# differential forms
# ---------------------------------------------------------------------------

def _merge_sign(a: Tuple[int, ...], b: Tuple[int, ...]):
    """Sign and sorted index tuple of ``dx_a ^ dx_b``; sign 0 if indices repeat."""
    if set(a) & set(b):
        return 0, ()
    seq = list(a) + list(b)
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


@dataclass(frozen=True)
class DiffForm:
    """Homogeneous k-form ``sum_I coeffs[I] dx_I`` over sorted index tuples ``I``."""

    ring: Tuple[str, ...]
    degree: int
    coeffs: Dict[Tuple[int, ...], Poly] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ring", tuple(self.ring))
        clean = {}
        for idx, c in self.coeffs.items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} is not strictly increasing of length {self.degree}")
            if c.ring != self.ring:
                raise RingMismatchError("coefficient in a different ring")
            if not c.is_zero():
                clean[idx] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def function(cls, f: Poly) -> "DiffForm":
        return cls(f.ring, 0, {(): f})

    @classmethod
    def zero(cls, ring, degree: int) -> "DiffForm":
        return cls(ring, degree, {})

    @classmethod
    def dx(cls, ring, var) -> "DiffForm":
        ring = tuple(ring)
        idx = var if isinstance(var, int) else ring.index(var)
        return cls(ring, 1, {(idx,): Poly.const(ring, 1)})

    @classmethod
    def parse(cls, text: str, ring) -> "DiffForm":
        return parse_form(text, ring)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "DiffForm"):
        if self.ring != other.ring:
            raise RingMismatchError("forms over different rings")
        if self.degree != other.degree:
            raise DegreeError(f"cannot add forms of degree {self.degree} and {other.degree}")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out[idx] + c if idx in out else c
        return DiffForm(self.ring, self.degree, out)

    def __neg__(self):
        return DiffForm(self.ring, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def scale(self, f) -> "DiffForm":
        return DiffForm(self.ring, self.degree, {k: f * c for k, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.ring == other.ring and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.degree, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            wedge_str = "^".join("d" + self.ring[i] for i in idx)
            s = str(c)
            if not idx:
                parts.append(s)
            elif s == "1":
                parts.append(wedge_str)
            elif s == "-1":
                parts.append("-" + wedge_str)
            else:
                if len(c.terms) > 1 or s.startswith("("):
                    s = f"({s})"
                parts.append(f"{s}*{wedge_str}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if a.ring != b.ring:
        raise RingMismatchError("forms over different rings")
    out: Dict[Tuple[int, ...], Poly] = {}
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            sign, idx = _merge_sign(ia, ib)
            if sign:
                term = ca * cb if sign > 0 else -(ca * cb)
                out[idx] = out[idx] + term if idx in out else term
    return DiffForm(a.ring, a.degree + b.degree, out)


def exterior_d(omega: DiffForm) -> DiffForm:
    out: Dict[Tuple[int, ...], Poly] = {}
    for idx, c in omega.coeffs.items():
        for j in range(len(omega.ring)):
            if j in idx:
                continue
            dc = c.diff(j)
            if dc.is_zero():
                continue
            sign, new = _merge_sign((j,), idx)
            term = dc if sign > 0 else -dc
            out[new] = out[new] + term if new in out else term
    return DiffForm(omega.ring, omega.degree + 1, out)


def contract(D: VectorField, omega: DiffForm) -> DiffForm:
    """Interior product ``i_D omega``; degree-0 input raises DegreeError."""
    if omega.degree < 1:
        raise DegreeError("contraction needs a form of degree >= 1")
    if D.ring != omega.ring:
        raise RingMismatchError("field and form over different rings")
    out: Dict[Tuple[int, ...], Poly] = {}
    for idx, c in omega.coeffs.items():
        for m, i in enumerate(idx):
            if D.coeffs[i].is_zero():
                continue
            rest = idx[:m] + idx[m + 1:]
            term = D.coeffs[i] * c
            if m % 2:
                term = -term
            out[rest] = out[rest] + term if rest in out else term
    return DiffForm(omega.ring, omega.degree - 1, out)


def lie_derivative(D: VectorField, omega: DiffForm) -> DiffForm:
    """Cartan's formula ``i_D d omega + d i_D omega``."""
    first = contract(D, exterior_d(omega))
    if omega.degree == 0:
        return first
    return first + exterior_d(contract(D, omega))


# ---------------------------------------------------------------------------
# foliations
# ---------------------------------------------------------------------------

UNKNOWN, VERIFIED, FAILED = "unknown", "verified", "failed"


class Foliation:
    """Finitely generated module of vector fields with a set-once involutivity flag."""

    def __init__(self, gens: Sequence[VectorField], ring: Optional[Sequence[str]] = None):
        self.gens: Tuple[VectorField, ...] = tuple(gens)
        if ring is None:
            if not self.gens:
                raise ValueError("ring must be given for an empty foliation")
            ring = self.gens[0].ring
        self.ring = tuple(ring)
        for g in self.gens:
            if g.ring != self.ring:
                raise RingMismatchError("generators over different rings")
        self._flag = UNKNOWN
        self._lock = threading.Lock()
        self._module: Optional[Submodule] = None

    @property
    def flag(self) -> str:
        return self._flag

    @property
    def module(self) -> Submodule:
        if self._module is None:
            self._module = Submodule([g.coeffs for g in self.gens], rank=len(self.ring), ring=self.ring)
        return self._module

    def contains(self, D: VectorField) -> bool:
        return self.module.contains(D.coeffs)

    def verify(self) -> bool:
        with self._lock:
            if self._flag == UNKNOWN:
                ok = _involutive(self.gens, self.module)
                self._flag = VERIFIED if ok else FAILED
        return self._flag == VERIFIED

    def __len__(self):
        return len(self.gens)


def _involutive(gens: Sequence[VectorField], module: Submodule) -> bool:
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not module.contains(lie_bracket(gens[i], gens[j]).coeffs):
                return False
    return True


def involutivity_check(gens) -> bool:
    """True iff all pairwise brackets lie in the module the fields generate.

    Accepts a Foliation (whose flag is then set) or a plain list of fields.
    """
    if isinstance(gens, Foliation):
        return gens.verify()
    gens = list(gens)
    if not gens:
        return True
    return Foliation(gens).verify()


def is_basic(omega: DiffForm, F: Foliation) -> bool:
    """``i_D omega = 0`` and ``i_D d omega = 0`` for every generator ``D``."""
    if not F.gens:
        raise ValueError("foliation has no generators")
    d_omega = exterior_d(omega)
    for D in F.gens:
        if omega.degree >= 1 and not contract(D, omega).is_zero():
            return False
        if not contract(D, d_omega).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# form text syntax
# ---------------------------------------------------------------------------

class _MixedForm:
    """Possibly inhomogeneous form used only while parsing."""

    __slots__ = ("ring", "parts")

    def __init__(self, ring, parts):
        self.ring = ring
        self.parts = {k: v for k, v in parts.items() if not v.is_zero()}

    @classmethod
    def of_poly(cls, p: Poly):
        return cls(p.ring, {(): p})

    def _combine(self, other, sign):
        other = other if isinstance(other, _MixedForm) else _MixedForm.of_poly(other)
        out = dict(self.parts)
        for k, v in other.parts.items():
            v = v if sign > 0 else -v
            out[k] = out[k] + v if k in out else v
        return _MixedForm(self.ring, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return _MixedForm(self.ring, {k: -v for k, v in self.parts.items()})

    def __mul__(self, other):
        out: Dict[Tuple[int, ...], Poly] = {}
        for ia, ca in self.parts.items():
            for ib, cb in other.parts.items():
                sign, idx = _merge_sign(ia, ib)
                if sign:
                    t = ca * cb if sign > 0 else -(ca * cb)
                    out[idx] = out[idx] + t if idx in out else t
        return _MixedForm(self.ring, out)

    def __truediv__(self, other):
        if any(other.parts.keys() - {()}):
            raise TypeError("cannot divide by a form")
        return _MixedForm(self.ring, {k: v / other.parts.get((), Poly.zero(self.ring))
                                      for k, v in self.parts.items()})

    def __pow__(self, n):
        if any(k for k in self.parts):
            raise TypeError("differentials cannot be exponentiated")
        return _MixedForm(self.ring, {(): self.parts.get((), Poly.zero(self.ring)) ** n})

    def has_differentials(self) -> bool:
        return any(k for k in self.parts)


def parse_form(text: str, ring) -> DiffForm:
    """Parse e.g. ``"x*dy + 2*dx^dz"``; ``^`` between differentials is the wedge."""
    ring = tuple(ring)
    diffs = {"d" + name: i for i, name in enumerate(ring) if "d" + name not in ring}

    def atom(name, pos):
        if name in ring:
            return _MixedForm.of_poly(Poly.var(ring, name))
        if name in diffs:
            return _MixedForm(ring, {(diffs[name],): Poly.const(ring, 1)})
        if name == "i":
            return _MixedForm.of_poly(Poly.const(ring, I))
        raise ParseError(f"unknown symbol {name!r}", text, pos)

    def caret(base, rhs, pos):
        if base.has_differentials() and rhs.has_differentials():
            return base * rhs
        raise ParseError("'^' needs an integer exponent or differentials on both sides", text, pos)

    value = ExprParser(text, atom, lambda c: _MixedForm.of_poly(Poly.const(ring, c)), caret).parse()
    degrees = {len(k) for k in value.parts}
    if len(degrees) > 1:
        raise ParseError("form is not homogeneous", text, 0)
    degree = degrees.pop() if degrees else 0
    return DiffForm(ring, degree, value.parts)
