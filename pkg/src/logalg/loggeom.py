"""Logarithmic derivations and the submodules attached to ``Y = V(I)``.

Everything here works with the standard bilinear pairing
``<sum f_i d_i, sum g_i d_i> = sum f_i g_i`` on one chart.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ArityError, DegenerateIdealError, DomainError
from .exact import Ideal, Poly, Submodule, module_equal, syzygy_module
from .exact.linalg import det
from .forms import VectorField, apply, gradient, involutivity_check

__all__ = [
    "DivisorChart",
    "LogDerivationModule",
    "log_derivations",
    "zero_module",
    "metric_T0_test",
    "normal_module",
    "NormalModuleReport",
    "tangential_projection",
    "ProjectionResult",
    "cond1_witness",
    "cond1_check",
    "saito_determinant",
    "saito_free_check",
    "atiyah_split_report",
    "quotient_representative",
    "is_logarithmic",
    "prune_generators",
    "standard_pairing",
]


def standard_pairing(D1: VectorField, D2: VectorField) -> Poly:
    out = Poly.zero(D1.ring)
    for a, b in zip(D1.coeffs, D2.coeffs):
        out = out + a * b
    return out


@dataclass(frozen=True)
class DivisorChart:
    """Principal chart ``I = <g>`` together with the gradient of ``g``."""

    g: Poly

    @property
    def ideal(self) -> Ideal:
        return _principal(self.g)

    @property
    def grad(self) -> VectorField:
        return gradient(self.g)

    @property
    def ring(self):
        return self.g.ring


@lru_cache(maxsize=256)
def _principal(g: Poly) -> Ideal:
    return Ideal([g])


def prune_generators(vectors: Sequence[Tuple[Poly, ...]], rank: int, ring) -> List[Tuple[Poly, ...]]:
    """Drop zero and redundant generators; the generated module is unchanged.

    Candidates are visited by increasing leading term so the survivors are
    deterministic for a fixed monomial order.
    """
    from .exact.groebner import _to_vec
    from .exact.poly import GREVLEX

    key = lambda t: GREVLEX.module_key(t[0], t[1])  # noqa: E731
    uniq = []
    for v in vectors:
        v = tuple(v)
        if all(p.is_zero() for p in v) or v in uniq:
            continue
        uniq.append(v)
    uniq.sort(key=lambda v: (key(max(_to_vec(v), key=key)), tuple(str(p) for p in v)))
    kept: List[Tuple[Poly, ...]] = []
    for v in uniq:
        if kept and Submodule(kept, rank=rank, ring=ring).contains(v):
            continue
        kept.append(v)
    changed = True
    while changed and len(kept) > 1:
        changed = False
        for idx in range(len(kept) - 1, -1, -1):
            others = kept[:idx] + kept[idx + 1:]
            if Submodule(others, rank=rank, ring=ring).contains(kept[idx]):
                kept = others
                changed = True
                break
    # report in pivot order: generators leading in x_1 first
    kept.sort(key=lambda v: (next(i for i, p in enumerate(v) if not p.is_zero()),
                             key(max(_to_vec(v), key=key))))
    return kept


@dataclass
class LogDerivationModule:
    """``T(-log I)``: generators plus, per generator ``D`` and ideal generator
    ``g_j``, cofactors ``c`` certifying ``D(g_j) = sum_k c_k g_k``."""

    ideal: Ideal
    gens: List[VectorField]
    witnesses: Dict[Tuple[int, int], Tuple[Poly, ...]] = field(default_factory=dict)

    @property
    def module(self) -> Submodule:
        if not hasattr(self, "_module"):
            self._module = Submodule([D.coeffs for D in self.gens], rank=len(self.ideal.ring),
                                     ring=self.ideal.ring)
        return self._module

    def contains(self, D: VectorField) -> bool:
        return self.module.contains(D.coeffs)

    def check_witnesses(self) -> bool:
        for (s, j), cof in self.witnesses.items():
            lhs = apply(self.gens[s], self.ideal.gens[j])
            rhs = Poly.zero(self.ideal.ring)
            for c, g in zip(cof, self.ideal.gens):
                rhs = rhs + c * g
            if lhs != rhs:
                return False
        return True

    def is_involutive(self) -> bool:
        return involutivity_check(self.gens)


def _check_nondegenerate(ideal: Ideal):
    if ideal.is_zero():
        raise DegenerateIdealError("zero ideal")
    if ideal.is_unit():
        raise DegenerateIdealError("unit ideal")


_LOG_CACHE: Dict[Tuple, LogDerivationModule] = {}


def log_derivations(ideal: Ideal) -> LogDerivationModule:
    """Generators of ``{D : D(g_j) in I for all generators g_j}``.

    One syzygy computation covers all generators at once: unknowns are the
    ``n`` coefficients of ``D`` and cofactors ``h_jk`` with
    ``D(g_j) + sum_k h_jk g_k = 0``.
    """
    _check_nondegenerate(ideal)
    cache_key = (ideal.ring, ideal.gens)
    cached = _LOG_CACHE.get(cache_key)
    if cached is not None:
        return cached
    ring = ideal.ring
    n = len(ring)
    gens = [g for g in ideal.gens]
    m = len(gens)
    zero = Poly.zero(ring)
    columns = []
    for i in range(n):
        columns.append(tuple(g.diff(i) for g in gens))
    for j in range(m):
        for k in range(m):
            col = [zero] * m
            col[j] = gens[k]
            columns.append(tuple(col))
    syz = syzygy_module(columns, rank=m, ring=ring)
    fields = prune_generators([s[:n] for s in syz.gens], n, ring)
    result = LogDerivationModule(ideal, [VectorField(v) for v in fields])
    for s, D in enumerate(result.gens):
        for j, g in enumerate(gens):
            cof = _cofactors(apply(D, g), ideal)
            if cof is None:
                raise AssertionError("syzygy produced a non-logarithmic field")
            result.witnesses[(s, j)] = cof
    _LOG_CACHE[cache_key] = result
    return result


def _cofactors(f: Poly, ideal: Ideal) -> Optional[Tuple[Poly, ...]]:
    module = Submodule([(g,) for g in ideal.gens], rank=1, ring=ideal.ring)
    return module.lift((f,))


def zero_module(ideal: Ideal) -> Submodule:
    """``I * Poly^n``, generated by ``g_j e_i``."""
    ring = ideal.ring
    n = len(ring)
    zero = Poly.zero(ring)
    gens = []
    for g in ideal.gens:
        if g.is_zero():
            continue
        for i in range(n):
            v = [zero] * n
            v[i] = g
            gens.append(tuple(v))
    return Submodule(gens, rank=n, ring=ring)


def metric_T0_test(D: VectorField, ideal: Ideal) -> bool:
    """Whether ``<D, d_j> in I`` for every coordinate field ``d_j``."""
    ring = D.ring
    return all(ideal.contains(standard_pairing(D, VectorField.partial(ring, j)))
               for j in range(len(ring)))


@dataclass
class NormalModuleReport:
    module: Submodule
    gradient_module: Submodule
    equals_gradient_plus_zero: bool
    equals_gradient: bool
    gradients_are_members: bool
    degenerate: bool = False

    @property
    def gens(self):
        return self.module.gens


def normal_module(ideal: Ideal) -> NormalModuleReport:
    """``{D : <L, D> in I for all L in T(-log I)}`` and its comparison with ``<grad g_j>``."""
    ring = ideal.ring
    n = len(ring)
    zero = Poly.zero(ring)
    grad_vecs = [gradient(g).coeffs for g in ideal.gens if not g.is_zero()]
    grad_mod = Submodule(grad_vecs, rank=n, ring=ring)
    if ideal.is_unit() or ideal.is_zero():
        if ideal.is_unit():
            module = Submodule([VectorField.partial(ring, i).coeffs for i in range(n)], rank=n, ring=ring)
        else:
            module = Submodule([], rank=n, ring=ring)
        return NormalModuleReport(module, grad_mod, False, False, True, degenerate=True)
    logs = log_derivations(ideal).gens
    gens = [g for g in ideal.gens]
    r, m = len(logs), len(gens)
    columns = []
    for i in range(n):
        columns.append(tuple(L.coeffs[i] for L in logs))
    for s in range(r):
        for k in range(m):
            col = [zero] * r
            col[s] = gens[k]
            columns.append(tuple(col))
    syz = syzygy_module(columns, rank=r, ring=ring)
    module = Submodule(prune_generators([v[:n] for v in syz.gens], n, ring), rank=n, ring=ring)
    with_zero = Submodule(list(grad_vecs) + list(zero_module(ideal).gens), rank=n, ring=ring)
    return NormalModuleReport(
        module=module,
        gradient_module=grad_mod,
        equals_gradient_plus_zero=module_equal(module, with_zero),
        equals_gradient=module_equal(module, grad_mod),
        gradients_are_members=all(module.contains(v) for v in grad_vecs),
    )


@dataclass
class ProjectionResult:
    field: VectorField
    normal_part: VectorField
    is_logarithmic: bool


def tangential_projection(D: VectorField, chart: DivisorChart) -> ProjectionResult:
    """``D - <D, grad g> grad g`` with a verdict on membership in ``T(-log <g>)``.

    Never raises when the gradient condition fails; the verdict says whether
    the result is tangent.
    """
    grad = chart.grad
    normal = grad * standard_pairing(D, grad)
    DT = D - normal
    verdict = chart.ideal.contains(apply(DT, chart.g))
    return ProjectionResult(DT, normal, verdict)


def cond1_witness(chart: DivisorChart) -> Poly:
    """Normal form of ``1 - <grad g, grad g>`` modulo ``<g>``."""
    grad = chart.grad
    return chart.ideal.normal_form(Poly.const(chart.ring, 1) - standard_pairing(grad, grad))


def cond1_check(chart: DivisorChart) -> bool:
    return cond1_witness(chart).is_zero()


def saito_determinant(gens: Sequence[VectorField]) -> Poly:
    return det([list(D.coeffs) for D in gens])


def saito_free_check(gens: Sequence[VectorField], chart: DivisorChart) -> bool:
    """Saito's criterion: ``det(coefficients) = c * g`` for a nonzero constant ``c``."""
    n = len(chart.ring)
    if len(gens) != n:
        raise ArityError(f"Saito's criterion needs exactly {n} fields, got {len(gens)}")
    d = saito_determinant(gens)
    if d.is_zero() or chart.g.is_zero():
        return False
    e, c = d.leading()
    e2, c2 = chart.g.leading()
    if e != e2:
        return False
    return d == chart.g * (c / c2)


def atiyah_split_report(chart: DivisorChart) -> List[dict]:
    """Generator-level checks behind ``At(N) = T(-log Y) + I`` for ``I = <g>``.

    Records, each with ``check``, ``subject`` and ``passed``:
      * ``gradient-correspondence``: ``q*g -> q*grad g`` is well defined and
        O-linear on test coefficients ``q`` in ``{1, x_1..x_n}``;
      * ``log-leibniz``: for each log generator ``D``,
        ``D(q g) = q D(g) + D(q) g`` with both summands in ``I``;
      * ``ideal-symbol``: multiplication by ``g`` has zero symbol.
    """
    g = chart.g
    ring = chart.ring
    ideal = chart.ideal
    grad = chart.grad
    tests = [Poly.const(ring, 1)] + [Poly.var(ring, v) for v in ring]
    records = []

    ok = not grad.is_zero()
    for q in tests:
        for h in tests:
            qg = q * g
            image = grad * qg.divexact(g)
            image_h = grad * (h * qg).divexact(g)
            ok = ok and image_h == image * h and image == grad * q
    records.append({"check": "gradient-correspondence", "subject": str(g), "passed": ok})

    for D in log_derivations(ideal).gens:
        ok = True
        for q in tests:
            lhs = apply(D, q * g)
            s1, s2 = q * apply(D, g), apply(D, q) * g
            ok = ok and lhs == s1 + s2 and ideal.contains(s1) and ideal.contains(s2)
        records.append({"check": "log-leibniz", "subject": str(D), "passed": ok})

    for h in ideal.gens:
        ok = True
        for q in tests:
            for f in tests:
                # sigma(f) * (q g) = h(f q g) - f h(q g) must vanish
                ok = ok and (h * (f * q * g) - f * (h * (q * g))).is_zero()
        records.append({"check": "ideal-symbol", "subject": str(h), "passed": ok})
    return records


def is_logarithmic(D: VectorField, ideal: Ideal) -> bool:
    """Definitional test ``D(g_j) in I`` for every generator."""
    return all(ideal.contains(apply(D, g)) for g in ideal.gens)


def quotient_representative(D: VectorField, ideal: Ideal) -> VectorField:
    """Canonical representative of ``D`` modulo ``I * T`` (coefficient-wise normal form)."""
    if not is_logarithmic(D, ideal):
        raise DomainError(f"{D} is not a logarithmic derivation of {ideal}")
    reduced = tuple(ideal.normal_form(c) for c in D.coeffs)
    return VectorField(zero_module(ideal).normal_form(reduced))
