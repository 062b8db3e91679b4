"""Buchberger's algorithm for ideals and submodules of free modules.

Internally a vector in ``Poly^k`` is a dict ``{(pos, exp): coeff}``; an ideal
is the rank-1 case.  Reduced bases are normalized (leading coefficient 1)
and sorted by decreasing leading term, so results are reproducible.
"""
from __future__ import annotations

import threading
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import RingMismatchError
from .numbers import ONE, GaussianRational
from .poly import GREVLEX, Exp, MonomialOrder, Poly, Ring

__all__ = [
    "Ideal",
    "Submodule",
    "groebner_basis",
    "normal_form",
    "ideal_member",
    "syzygy_module",
    "module_member",
    "module_equal",
    "module_lift",
    "module_intersection",
]

Term = Tuple[int, Exp]
Vec = Dict[Term, GaussianRational]


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def _to_vec(v: Sequence[Poly], offset: int = 0) -> Vec:
    out: Vec = {}
    for pos, p in enumerate(v):
        for e, c in p.terms.items():
            out[(pos + offset, e)] = c
    return out


def _from_vec(vec: Vec, ring: Ring, rank: int, offset: int = 0) -> Tuple[Poly, ...]:
    parts: List[dict] = [{} for _ in range(rank)]
    for (pos, e), c in vec.items():
        parts[pos - offset][e] = c
    return tuple(Poly._from_clean(ring, d) for d in parts)


def _common_ring(polys: Sequence[Poly], ring: Optional[Ring] = None) -> Ring:
    for p in polys:
        if ring is None:
            ring = p.ring
        elif p.ring != ring:
            raise RingMismatchError(f"ring mismatch: {ring} vs {p.ring}")
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    return ring


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

class _Elem:
    __slots__ = ("vec", "lpos", "lexp", "lc")

    def __init__(self, vec: Vec, key):
        self.vec = vec
        (self.lpos, self.lexp) = max(vec, key=key)
        self.lc = vec[(self.lpos, self.lexp)]


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_scaled(f: Vec, g: Vec, shift: Exp, c: GaussianRational) -> None:
    """In place: ``f -= c * x^shift * g``."""
    for (pos, e), v in g.items():
        t = (pos, tuple(a + b for a, b in zip(e, shift)))
        w = f.get(t)
        if w is None:
            f[t] = -(c * v)
        else:
            w = w - c * v
            if w:
                f[t] = w
            else:
                del f[t]


def _reduce(f: Vec, basis: Sequence[_Elem], key, full: bool = True) -> Vec:
    f = dict(f)
    rem: Vec = {}
    while f:
        t = max(f, key=key)
        pos, e = t
        c = f[t]
        for g in basis:
            if g.lpos == pos and _divides(g.lexp, e):
                shift = tuple(a - b for a, b in zip(e, g.lexp))
                _sub_scaled(f, g.vec, shift, c / g.lc)
                break
        else:
            if not full:
                rem.update(f)
                return rem
            rem[t] = c
            del f[t]
    return rem


def _monic(vec: Vec, key) -> Vec:
    lc = vec[max(vec, key=key)]
    if lc == ONE:
        return vec
    inv = lc.inverse()
    return {t: c * inv for t, c in vec.items()}


def _buchberger(vecs: Sequence[Vec], order: MonomialOrder, rank: int) -> List[Vec]:
    key = lambda t: order.module_key(t[0], t[1])  # noqa: E731
    G: List[_Elem] = []
    pairs = set()

    def add(vec: Vec):
        elem = _Elem(_monic(vec, key), key)
        idx = len(G)
        G.append(elem)
        for j in range(idx):
            if G[j] is not None and G[j].lpos == elem.lpos:
                pairs.add((j, idx))

    for v in vecs:
        if v:
            r = _reduce(v, [g for g in G if g is not None], key)
            if r:
                add(r)

    def pair_key(p):
        a, b = G[p[0]], G[p[1]]
        return (key((a.lpos, _lcm(a.lexp, b.lexp))), p)

    while pairs:
        p = min(pairs, key=pair_key)
        pairs.discard(p)
        i, j = p
        a, b = G[i], G[j]
        L = _lcm(a.lexp, b.lexp)
        if rank == 1 and all(x == 0 or y == 0 for x, y in zip(a.lexp, b.lexp)):
            continue
        skip = False
        for k, g in enumerate(G):
            if k in (i, j) or g.lpos != a.lpos or not _divides(g.lexp, L):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                skip = True
                break
        if skip:
            continue
        s: Vec = {}
        _sub_scaled(s, a.vec, tuple(x - y for x, y in zip(L, a.lexp)), -(b.lc))
        _sub_scaled(s, b.vec, tuple(x - y for x, y in zip(L, b.lexp)), a.lc)
        h = _reduce(s, G, key)
        if h:
            add(h)

    # minimal basis, then interreduce
    elems = list(G)
    minimal = []
    for idx, g in enumerate(elems):
        redundant = False
        for jdx, h in enumerate(elems):
            if jdx == idx or h.lpos != g.lpos or not _divides(h.lexp, g.lexp):
                continue
            if h.lexp != g.lexp or jdx < idx:
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [h for jdx, h in enumerate(minimal) if jdx != idx]
        lead = {(g.lpos, g.lexp): g.lc}
        tail = {t: c for t, c in g.vec.items() if t != (g.lpos, g.lexp)}
        r = _reduce(tail, others, key)
        r.update(lead)
        reduced.append(_Elem(_monic(r, key), key))
    reduced.sort(key=lambda g: key((g.lpos, g.lexp)), reverse=True)
    return [g.vec for g in reduced]


# ---------------------------------------------------------------------------
# public types
# ---------------------------------------------------------------------------

class Ideal:
    """Ideal given by generators; the reduced Groebner basis is computed lazily."""

    def __init__(self, gens: Sequence[Poly], ring: Optional[Sequence[str]] = None,
                 order: MonomialOrder = GREVLEX):
        gens = tuple(gens)
        self.ring: Ring = _common_ring(gens, tuple(ring) if ring is not None else None)
        self.gens: Tuple[Poly, ...] = gens
        self.order = order
        self._gb: Optional[Tuple[Poly, ...]] = None
        self._elems: Optional[List[_Elem]] = None
        self._lock = threading.Lock()

    def _compute(self):
        with self._lock:
            if self._gb is None:
                vecs = _buchberger([_to_vec([g]) for g in self.gens], self.order, 1)
                key = self._key
                self._elems = [_Elem(v, key) for v in vecs]
                self._gb = tuple(_from_vec(v, self.ring, 1)[0] for v in vecs)

    def _key(self, t):
        return self.order.module_key(t[0], t[1])

    @property
    def gb(self) -> Tuple[Poly, ...]:
        if self._gb is None:
            self._compute()
        return self._gb

    def is_zero(self) -> bool:
        return not self.gb

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.gb)

    def normal_form(self, f: Poly) -> Poly:
        if f.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {f.ring} vs {self.ring}")
        self.gb
        r = _reduce(_to_vec([f]), self._elems, self._key)
        return _from_vec(r, self.ring, 1)[0]

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    __contains__ = contains

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and all(other.contains(g) for g in self.gens) and all(
            self.contains(g) for g in other.gens)

    __hash__ = object.__hash__

    def __repr__(self):
        return f"Ideal([{', '.join(str(g) for g in self.gens)}])"


class Submodule:
    """Submodule of ``Poly^rank`` given by generator vectors."""

    def __init__(self, gens: Sequence[Sequence[Poly]], rank: Optional[int] = None,
                 ring: Optional[Sequence[str]] = None, order: MonomialOrder = GREVLEX):
        gens = tuple(tuple(v) for v in gens)
        if rank is None:
            if not gens:
                raise ValueError("rank must be given for an empty generator list")
            rank = len(gens[0])
        for v in gens:
            if len(v) != rank:
                raise ValueError(f"generator of length {len(v)} in a rank-{rank} module")
        flat = [p for v in gens for p in v]
        if ring is None and not flat:
            raise ValueError("ring must be given for an empty generator list")
        self.ring: Ring = _common_ring(flat, tuple(ring) if ring is not None else None)
        self.rank = rank
        self.gens: Tuple[Tuple[Poly, ...], ...] = gens
        self.order = order
        self._gb = None
        self._elems = None
        self._lift_elems = None
        self._lock = threading.Lock()

    def _key(self, t):
        return self.order.module_key(t[0], t[1])

    def _compute(self):
        with self._lock:
            if self._gb is None:
                vecs = _buchberger([_to_vec(v) for v in self.gens], self.order, self.rank)
                self._elems = [_Elem(v, self._key) for v in vecs]
                self._gb = tuple(_from_vec(v, self.ring, self.rank) for v in vecs)

    @property
    def gb(self):
        if self._gb is None:
            self._compute()
        return self._gb

    def is_zero(self) -> bool:
        return not self.gb

    def normal_form(self, v: Sequence[Poly]) -> Tuple[Poly, ...]:
        v = tuple(v)
        if len(v) != self.rank:
            raise ValueError("rank mismatch")
        _common_ring(v, self.ring)
        self.gb
        return _from_vec(_reduce(_to_vec(v), self._elems, self._key), self.ring, self.rank)

    def contains(self, v: Sequence[Poly]) -> bool:
        return all(p.is_zero() for p in self.normal_form(v))

    __contains__ = contains

    def lift(self, v: Sequence[Poly]) -> Optional[Tuple[Poly, ...]]:
        """Coefficients ``a`` with ``v = sum a_i gens[i]``, or None if ``v`` is not a member."""
        v = tuple(v)
        k, m = self.rank, len(self.gens)
        if self._lift_elems is None:
            order = MonomialOrder(self.order.kind, "pot")
            key = lambda t: order.module_key(t[0], t[1])  # noqa: E731
            ring = self.ring
            unit = Poly.const(ring, 1)
            zero = Poly.zero(ring)
            rows = []
            for i, g in enumerate(self.gens):
                e = [zero] * m
                e[i] = unit
                rows.append(_to_vec(list(g) + e))
            vecs = _buchberger(rows, order, k + m)
            self._lift_elems = ([_Elem(x, key) for x in vecs], key)
        elems, key = self._lift_elems
        r = _reduce(_to_vec(list(v)), elems, key)
        parts = _from_vec(r, self.ring, k + m)
        if any(not p.is_zero() for p in parts[:k]):
            return None
        return tuple(-p for p in parts[k:])

    def __repr__(self):
        body = ", ".join("(" + ", ".join(str(p) for p in v) + ")" for v in self.gens)
        return f"Submodule(rank={self.rank}, [{body}])"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def groebner_basis(gens: Sequence[Poly], order: MonomialOrder = GREVLEX,
                   ring: Optional[Sequence[str]] = None) -> Ideal:
    """Ideal with its reduced Groebner basis computed; raises on mixed rings."""
    ideal = Ideal(gens, ring=ring, order=order)
    ideal.gb
    return ideal


def normal_form(f: Poly, ideal: Ideal) -> Poly:
    return ideal.normal_form(f)


def ideal_member(f: Poly, ideal: Ideal) -> bool:
    return ideal.contains(f)


def syzygy_module(vectors: Sequence[Sequence[Poly]], rank: Optional[int] = None,
                  ring: Optional[Sequence[str]] = None,
                  order: MonomialOrder = GREVLEX) -> Submodule:
    """Relations ``{a : sum a_i v_i = 0}`` among ``m`` vectors in ``Poly^k``.

    Computed by elimination: a POT basis of the module spanned by
    ``(v_i, e_i)`` in ``Poly^(k+m)``; basis elements whose leading position
    lies among the last ``m`` coordinates project to syzygy generators.
    """
    vectors = [tuple(v) for v in vectors]
    m = len(vectors)
    flat = [p for v in vectors for p in v]
    ring = _common_ring(flat, tuple(ring) if ring is not None else None)
    if rank is None:
        rank = len(vectors[0]) if vectors else 0
    k = rank
    elim = MonomialOrder(order.kind, "pot")
    zero = Poly.zero(ring)
    unit = Poly.const(ring, 1)
    rows = []
    for i, v in enumerate(vectors):
        if len(v) != k:
            raise ValueError("vectors have inconsistent rank")
        e = [zero] * m
        e[i] = unit
        rows.append(_to_vec(list(v) + e))
    basis = _buchberger(rows, elim, k + m)
    key = lambda t: elim.module_key(t[0], t[1])  # noqa: E731
    gens = []
    for vec in basis:
        lpos, _ = max(vec, key=key)
        if lpos >= k:
            gens.append(_from_vec({t: c for t, c in vec.items()}, ring, k + m)[k:])
    return Submodule(gens, rank=m, ring=ring, order=order)


def module_member(v: Sequence[Poly], module: Submodule) -> bool:
    return module.contains(v)


def module_equal(a: Submodule, b: Submodule) -> bool:
    if a.rank != b.rank:
        raise ValueError("modules live in free modules of different rank")
    return all(b.contains(v) for v in a.gens) and all(a.contains(v) for v in b.gens)


def module_lift(v: Sequence[Poly], module: Submodule):
    return module.lift(v)


def module_intersection(a: Submodule, b: Submodule) -> Submodule:
    """Generators of ``a ∩ b`` via syzygies of ``[a.gens; -b.gens]``."""
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    vecs = list(a.gens) + [tuple(-p for p in v) for v in b.gens]
    if not a.gens or not b.gens:
        return Submodule([], rank=a.rank, ring=a.ring)
    syz = syzygy_module(vecs, rank=a.rank, ring=a.ring)
    zero = Poly.zero(a.ring)
    gens = []
    for s in syz.gens:
        vec = [zero] * a.rank
        for coeff, g in zip(s[: len(a.gens)], a.gens):
            vec = [x + coeff * y for x, y in zip(vec, g)]
        if any(not p.is_zero() for p in vec):
            gens.append(tuple(vec))
    return Submodule(gens, rank=a.rank, ring=a.ring)
