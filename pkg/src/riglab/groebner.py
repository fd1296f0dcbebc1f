"""Buchberger's algorithm, normal forms, solvability and elimination."""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ArgumentError, RegistryError, ResourceExceeded
from .polyring import (
    GREVLEX,
    LEX,
    MonomialOrder,
    Polynomial,
    VarRegistry,
    block_order,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    parse_polynomial,
)


@dataclass(frozen=True)
class Caps:
    """Resource caps for a single Groebner computation."""

    max_basis: int = 10_000
    max_terms: int = 100_000

    def __post_init__(self):
        if self.max_basis < 1 or self.max_terms < 1:
            raise ArgumentError("resource caps must be positive")

    @classmethod
    def from_env(cls, var="RIGLAB_CAPS"):
        """Read caps from e.g. ``RIGLAB_CAPS="max_basis=500,max_terms=2000"``."""
        raw = os.environ.get(var, "").strip()
        if not raw:
            return cls()
        kwargs = {}
        for part in raw.split(","):
            name, _, value = part.partition("=")
            name = name.strip()
            if name not in ("max_basis", "max_terms"):
                raise ArgumentError(f"unknown cap {name!r} in {var}")
            kwargs[name] = int(value)
        return cls(**kwargs)


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class Ideal:
    registry: VarRegistry
    generators: tuple = ()

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.registry != self.registry:
                raise RegistryError("generator over a different registry")
            if not g.is_zero():
                gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    def is_zero(self) -> bool:
        return not self.generators

    def to_json(self) -> dict:
        return {"vars": list(self.registry.names), "generators": [str(g) for g in self.generators]}

    @classmethod
    def from_json(cls, data) -> "Ideal":
        if isinstance(data, str):
            data = json.loads(data)
        reg = VarRegistry(data["vars"])
        return cls(reg, tuple(parse_polynomial(s, reg) for s in data["generators"]))


@dataclass(frozen=True)
class GroebnerBasis:
    registry: VarRegistry
    order: MonomialOrder
    basis: tuple
    reduced: bool = True
    stats: dict = field(default_factory=dict, compare=False, repr=False)

    def leading_monomials(self):
        return [g.lm for g in self.basis]

    def ideal(self) -> Ideal:
        return Ideal(self.registry, self.basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


# -- reduction kernel ---------------------------------------------------------
# Basis elements are kept as (lm, terms) with monic leading term, where terms
# is the tuple of (exps, coeff) in descending order.


def _reduce(p: dict, basis, key, max_terms=None) -> dict:
    """Fully reduce the term dict ``p`` (consumed) modulo monic ``basis``."""
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for glm, gterms in basis:
            if mono_divides(glm, m):
                shift = mono_div(m, glm)
                for gm, gc in gterms:
                    t = mono_mul(gm, shift)
                    v = p.get(t, 0) - c * gc
                    if v:
                        p[t] = v
                    else:
                        del p[t]
                break
        else:
            rem[m] = c
            del p[m]
        if max_terms is not None and len(p) + len(rem) > max_terms:
            raise ResourceExceeded(
                "term count cap exceeded during reduction",
                {"terms": len(p) + len(rem), "max_terms": max_terms},
            )
    return rem


def _monic(d: dict, order):
    key = order.key
    lm = max(d, key=key)
    inv = 1 / d[lm]
    items = sorted(((m, c * inv) for m, c in d.items()), key=lambda t: key(t[0]), reverse=True)
    return lm, tuple(items)


def _spoly(f, g):
    flm, fterms = f
    glm, gterms = g
    l = mono_lcm(flm, glm)
    sf, sg = mono_div(l, flm), mono_div(l, glm)
    d = {}
    for m, c in fterms[1:]:
        d[mono_mul(m, sf)] = c
    for m, c in gterms[1:]:
        t = mono_mul(m, sg)
        v = d.get(t, 0) - c
        if v:
            d[t] = v
        else:
            d.pop(t, None)
    return d


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """S-polynomial of ``f`` and ``g`` in ``f``'s order."""
    order = f.order
    g = g.with_order(order)
    a = (f.lm, tuple((m, c / f.lc) for m, c in f.terms))
    b = (g.lm, tuple((m, c / g.lc) for m, c in g.terms))
    return Polynomial(f.registry, _spoly(a, b), order)


def _to_polys(registry, order, elems):
    return tuple(Polynomial._raw(registry, order, dict(terms)) for _, terms in elems)


def _interreduce(elems, order):
    """Minimal, fully inter-reduced, monic basis sorted by descending lm."""
    key = order.key
    elems = sorted(elems, key=lambda e: key(e[0]))
    minimal = []
    for i, (lm, terms) in enumerate(elems):
        if any(mono_divides(olm, lm) for olm, _ in minimal):
            continue
        if any(mono_divides(olm, lm) for olm, _ in elems[i + 1:] if olm != lm):
            continue
        minimal.append((lm, terms))
    out = []
    for i, (lm, terms) in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = _reduce(dict(terms[1:]), others, key)
        tail[lm] = Fraction(1)
        out.append(_monic(tail, order))
    out.sort(key=lambda e: key(e[0]), reverse=True)
    return out


def buchberger(ideal: Ideal, order: MonomialOrder = LEX, caps: Caps = None,
               selection: str = "normal", seed: int = 0) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order``.

    ``selection`` picks the next S-pair: ``"normal"`` (smallest lcm in the order),
    ``"fifo"`` (creation order) or ``"random"`` (normal, with seeded
    tie-breaking among pairs sharing the least lcm; a fully random order
    swells badly).  Pairs are pruned
    with Buchberger's coprime and chain criteria.
    """
    caps = caps or DEFAULT_CAPS
    if selection not in ("normal", "fifo", "random"):
        raise ArgumentError(f"unknown selection strategy {selection!r}")
    reg = ideal.registry
    key = order.key
    rng = random.Random(seed)

    basis = []
    for g in ideal.generators:
        d = _reduce(dict(g.with_order(order).terms), basis, key)
        if d:
            basis.append(_monic(d, order))
    stats = {"pairs_processed": 0, "pairs_skipped": 0, "zero_reductions": 0}
    one = (0,) * len(reg)
    if any(lm == one for lm, _ in basis):
        unit = Polynomial.constant(reg, 1, order)
        return GroebnerBasis(reg, order, (unit,), True, stats)

    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    counter = 0
    birth = {p: 0 for p in pending}

    def pair_key(p):
        i, j = p
        l = mono_lcm(basis[i][0], basis[j][0])
        return (key(l), i, j)

    while pending:
        if selection == "normal":
            pair = min(pending, key=pair_key)
        elif selection == "fifo":
            pair = min(pending, key=lambda p: (birth[p], p))
        else:
            lcms = {p: key(mono_lcm(basis[p[0]][0], basis[p[1]][0])) for p in pending}
            low = min(lcms.values())
            pair = rng.choice(sorted(p for p in pending if lcms[p] == low))
        pending.discard(pair)
        i, j = pair
        ilm, jlm = basis[i][0], basis[j][0]
        if not any(a and b for a, b in zip(ilm, jlm)):
            stats["pairs_skipped"] += 1
            continue
        l = mono_lcm(ilm, jlm)
        chain = False
        for k, (klm, _) in enumerate(basis):
            if k == i or k == j or not mono_divides(klm, l):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            stats["pairs_skipped"] += 1
            continue
        stats["pairs_processed"] += 1
        h = _reduce(_spoly(basis[i], basis[j]), basis, key, caps.max_terms)
        if not h:
            stats["zero_reductions"] += 1
            continue
        elem = _monic(h, order)
        if elem[0] == one:
            unit = Polynomial.constant(reg, 1, order)
            return GroebnerBasis(reg, order, (unit,), True, stats)
        basis.append(elem)
        if len(basis) > caps.max_basis:
            raise ResourceExceeded(
                "basis size cap exceeded",
                {"basis_size": len(basis), "pending_pairs": len(pending),
                 "max_basis": caps.max_basis, **stats},
            )
        counter += 1
        n = len(basis) - 1
        for k in range(n):
            pending.add((k, n))
            birth[(k, n)] = counter

    reduced = _interreduce(basis, order)
    return GroebnerBasis(reg, order, _to_polys(reg, order, reduced), True, stats)


def groebner(polys, order: MonomialOrder = LEX, **kwargs) -> GroebnerBasis:
    """Convenience wrapper: reduced GB of the ideal generated by ``polys``."""
    polys = list(polys)
    if not polys:
        raise ArgumentError("need at least one polynomial to infer the registry")
    return buchberger(Ideal(polys[0].registry, tuple(polys)), order, **kwargs)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on division by ``gb``; zero iff ``f`` is in the ideal."""
    if f.registry != gb.registry:
        raise RegistryError("polynomial and basis over different registries")
    elems = [(g.lm, g.terms) for g in gb.basis]
    rem = _reduce(dict(f.with_order(gb.order).terms), elems, gb.order.key)
    return Polynomial._raw(gb.registry, gb.order, rem)


def is_groebner(polys, order: MonomialOrder) -> bool:
    """Independent check: every pairwise S-polynomial reduces to zero."""
    polys = [p.with_order(order) for p in polys if not p.is_zero()]
    elems = [(p.lm, tuple((m, c / p.lc) for m, c in p.terms)) for p in polys]
    for j in range(len(elems)):
        for i in range(j):
            if _reduce(_spoly(elems[i], elems[j]), elems, order.key):
                return False
    return True


def contains_one(gb: GroebnerBasis) -> bool:
    """True iff the ideal is the whole ring, i.e. its variety over C is empty."""
    return any(g.is_constant() for g in gb.basis)


def ideals_equal(a: Ideal, b: Ideal, order: MonomialOrder = LEX, caps: Caps = None) -> bool:
    if a.registry != b.registry:
        raise RegistryError("ideals over different registries")
    ga = buchberger(a, order, caps)
    gb = buchberger(b, order, caps)
    return ga.basis == gb.basis


def eliminate(ideal: Ideal, drop_vars, caps: Caps = None, inner: str = "lex") -> Ideal:
    """Elimination ideal ``I ∩ Q[remaining variables]``.

    The ideal is re-registered with ``drop_vars`` first and a Groebner basis
    is computed under the block order with the dropped variables on top.
    Elements free of dropped variables form a Groebner basis of the
    elimination ideal under the induced order on the remaining variables;
    the returned ideal lives over the remaining variables only.
    """
    drop = set(drop_vars)
    names = ideal.registry.names
    unknown = drop - set(names)
    if unknown:
        raise RegistryError(f"cannot eliminate unknown variables {sorted(unknown)}")
    top = [n for n in names if n in drop]
    rest = [n for n in names if n not in drop]
    rest_reg = VarRegistry(rest)
    rest_order = LEX if inner == "lex" else GREVLEX
    if not top:
        gb = buchberger(ideal, rest_order, caps)
        return Ideal(rest_reg, gb.basis)
    reg2 = VarRegistry(top + rest)
    order = block_order(len(top), inner)
    gens = tuple(g.embed(reg2, order) for g in ideal.generators)
    gb = buchberger(Ideal(reg2, gens), order, caps)
    k = len(top)
    kept = [g for g in gb.basis if all(not any(m[:k]) for m, _ in g.terms)]
    return Ideal(rest_reg, tuple(g.embed(rest_reg, rest_order) for g in kept))
