"""Sparse multivariate polynomials over the rationals.

A polynomial is an immutable, sorted tuple of ``(exponents, coefficient)``
pairs.  Exponents are tuples of non-negative ints indexed by a
:class:`VarRegistry`; coefficients are :class:`fractions.Fraction`, which
is always gcd-reduced with a positive denominator.  Terms are kept strictly
descending in the polynomial's :class:`MonomialOrder`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import ArgumentError, RegistryError

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, strings like ``"-7/2"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class VarRegistry:
    """Ordered, immutable list of variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names):
        names = tuple(names)
        index = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
                raise ArgumentError(f"invalid variable name {name!r}")
            if name in index:
                raise ArgumentError(f"duplicate variable name {name!r}")
            index[name] = i
        self.names = names
        self.index = index

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.index

    def __eq__(self, other):
        return isinstance(other, VarRegistry) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarRegistry({list(self.names)!r})"

    def __reduce__(self):
        return (VarRegistry, (self.names,))

    def position(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise RegistryError(f"unknown variable {name!r}") from None

    def monomial(self, **powers) -> tuple:
        """Exponent tuple from keyword powers, e.g. ``reg.monomial(x=2, y=1)``."""
        exps = [0] * len(self.names)
        for name, e in powers.items():
            exps[self.position(name)] = e
        return tuple(exps)

    def subset(self, names) -> "VarRegistry":
        """Registry over ``names`` kept in this registry's relative order."""
        keep = set(names)
        unknown = keep - set(self.names)
        if unknown:
            raise RegistryError(f"unknown variables {sorted(unknown)}")
        return VarRegistry(n for n in self.names if n in keep)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on exponent tuples.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"block"``.  A block order
    compares the first ``split`` variables (with ``inner``) and breaks ties
    on the remaining variables (again with ``inner``).
    """

    kind: str = "lex"
    split: int = 0
    inner: str = "lex"

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ArgumentError(f"unknown monomial order {self.kind!r}")
        if self.inner not in ("lex", "grevlex"):
            raise ArgumentError(f"unknown inner order {self.inner!r}")
        if self.split < 0:
            raise ArgumentError("block split must be non-negative")

    def key(self, exps: tuple):
        """Sort key: ``a > b`` in this order iff ``key(a) > key(b)``."""
        if self.kind == "lex":
            return exps
        return _order_key(self, exps)

    def __str__(self):
        if self.kind == "block":
            return f"block({self.split},{self.inner})"
        return self.kind


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


@lru_cache(maxsize=1 << 18)
def _order_key(order, exps):
    if order.kind == "grevlex":
        return _grevlex_key(exps)
    s = order.split
    if order.inner == "lex":
        return (exps[:s], exps[s:])
    return (_grevlex_key(exps[:s]), _grevlex_key(exps[s:]))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(split: int, inner: str = "lex") -> MonomialOrder:
    return MonomialOrder("block", split, inner)


def compare(order: MonomialOrder, a: tuple, b: tuple) -> int:
    """Three-way comparison of monomials: -1, 0 or 1."""
    if len(a) != len(b):
        raise RegistryError("monomials of different lengths")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    """True iff monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: tuple, a: tuple) -> tuple:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _sorted_terms(d: dict, order: MonomialOrder) -> tuple:
    if order.kind == "lex":
        return tuple(sorted(d.items(), reverse=True))
    key = order.key
    return tuple(sorted(d.items(), key=lambda t: key(t[0]), reverse=True))


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("registry", "order", "terms")

    def __init__(self, registry: VarRegistry, terms=(), order: MonomialOrder = LEX):
        nvars = len(registry)
        d = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exps, c in items:
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise RegistryError(f"bad exponent vector {exps} for {registry!r}")
            c = as_rational(c)
            d[exps] = d.get(exps, 0) + c
        d = {m: c for m, c in d.items() if c}
        self.registry = registry
        self.order = order
        self.terms = _sorted_terms(d, order)

    @classmethod
    def _raw(cls, registry, order, d):
        # d: exps -> nonzero Fraction, already validated
        p = cls.__new__(cls)
        p.registry = registry
        p.order = order
        p.terms = _sorted_terms(d, order)
        return p

    @classmethod
    def zero(cls, registry, order=LEX):
        return cls._raw(registry, order, {})

    @classmethod
    def constant(cls, registry, value, order=LEX):
        c = as_rational(value)
        return cls._raw(registry, order, {(0,) * len(registry): c} if c else {})

    @classmethod
    def var(cls, registry, name, order=LEX):
        exps = [0] * len(registry)
        exps[registry.position(name)] = 1
        return cls._raw(registry, order, {tuple(exps): Fraction(1)})

    def __reduce__(self):
        return (Polynomial, (self.registry, self.terms, self.order))

    # -- inspection -------------------------------------------------------

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    @property
    def lm(self) -> tuple:
        if not self.terms:
            raise ArgumentError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    @property
    def lc(self) -> Fraction:
        if not self.terms:
            raise ArgumentError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m, _ in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.registry.position(name)
        return max((m[i] for m, _ in self.terms), default=-1)

    def variables(self) -> set:
        used = set()
        for m, _ in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return {self.registry.names[i] for i in used}

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Polynomial):
            return self.constant(self.registry, other, self.order)
        if other.registry != self.registry:
            raise RegistryError("polynomials over different registries")
        return other

    def __add__(self, other):
        other = self._check(other)
        d = dict(self.terms)
        for m, c in other.terms:
            v = d.get(m, 0) + c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial._raw(self.registry, self.order, d)

    __radd__ = __add__

    def __neg__(self):
        p = Polynomial.__new__(Polynomial)
        p.registry, p.order = self.registry, self.order
        p.terms = tuple((m, -c) for m, c in self.terms)
        return p

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.registry, self.order)
        p = Polynomial.__new__(Polynomial)
        p.registry, p.order = self.registry, self.order
        p.terms = tuple((m, c * a) for m, a in self.terms)
        return p

    def mul_term(self, mono: tuple, c) -> "Polynomial":
        """Multiply by ``c * mono``; order is preserved so no re-sort."""
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self.registry, self.order)
        p = Polynomial.__new__(Polynomial)
        p.registry, p.order = self.registry, self.order
        p.terms = tuple((mono_mul(m, mono), c * a) for m, a in self.terms)
        return p

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._check(other)
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(x + y for x, y in zip(m1, m2))
                d[m] = d.get(m, 0) + c1 * c2
        return Polynomial._raw(self.registry, self.order, {m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ArgumentError("negative power")
        result = Polynomial.constant(self.registry, 1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.registry == other.registry and dict(self.terms) == dict(other.terms)
        return NotImplemented

    def __hash__(self):
        return hash((self.registry, frozenset(self.terms)))

    def constant_term(self) -> Fraction:
        zero = (0,) * len(self.registry)
        for m, c in self.terms:
            if m == zero:
                return c
        return Fraction(0)

    # -- normalizations ---------------------------------------------------

    def with_order(self, order: MonomialOrder) -> "Polynomial":
        if order == self.order:
            return self
        return Polynomial._raw(self.registry, order, dict(self.terms))

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.lc)

    def primitive(self) -> "Polynomial":
        """Integer-content-cleared form with positive leading coefficient."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for _, c in self.terms))
        ints = [int(c * den) for _, c in self.terms]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if self.lc < 0:
            g = -g
        return self.scale(Fraction(den, g))

    # -- evaluation, substitution, calculus -------------------------------

    def evaluate(self, point) -> Fraction:
        """Exact value at a point given as a sequence in registry order."""
        point = [as_rational(v) for v in point]
        if len(point) != len(self.registry):
            raise RegistryError("point length does not match registry size")
        total = Fraction(0)
        for m, c in self.terms:
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= x**e
            total += v
        return total

    def substitute(self, values: dict, target: VarRegistry, order: MonomialOrder = LEX) -> "Polynomial":
        """Substitute rationals for some variables and land in ``target``.

        Every variable of this registry must be either a key of ``values``
        or a name in ``target``.
        """
        src = self.registry.names
        vals = {self.registry.position(k): as_rational(v) for k, v in values.items()}
        mapping = []
        for i, name in enumerate(src):
            if i in vals:
                mapping.append(None)
            elif name in target:
                mapping.append(target.position(name))
            else:
                raise RegistryError(f"variable {name!r} neither substituted nor in target")
        d = {}
        width = len(target)
        for m, c in self.terms:
            out = [0] * width
            for i, e in enumerate(m):
                if not e:
                    continue
                j = mapping[i]
                if j is None:
                    c = c * vals[i] ** e
                else:
                    out[j] += e
            if c:
                key = tuple(out)
                d[key] = d.get(key, 0) + c
        return Polynomial._raw(target, order, {m: c for m, c in d.items() if c})

    def embed(self, target: VarRegistry, order: MonomialOrder = None, rename: dict = None) -> "Polynomial":
        """Move into ``target`` by variable name (optionally renamed).

        Variables of degree zero need not exist in ``target``.
        """
        order = self.order if order is None else order
        rename = rename or {}
        src = self.registry.names
        width = len(target)
        used = sorted({i for m, _ in self.terms for i, e in enumerate(m) if e})
        pos = {i: target.position(rename.get(src[i], src[i])) for i in used}
        d = {}
        for m, c in self.terms:
            out = [0] * width
            for i in used:
                out[pos[i]] += m[i]
            key = tuple(out)
            d[key] = d.get(key, 0) + c
        return Polynomial._raw(target, order, {m: c for m, c in d.items() if c})

    def diff(self, name: str) -> "Polynomial":
        i = self.registry.position(name)
        d = {}
        for m, c in self.terms:
            e = m[i]
            if e:
                m2 = m[:i] + (e - 1,) + m[i + 1:]
                d[m2] = d.get(m2, 0) + c * e
        return Polynomial._raw(self.registry, self.order, {m: c for m, c in d.items() if c})

    # -- text form --------------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r})"


def normalize(f: Polynomial) -> Polynomial:
    """Rebuild ``f`` from its raw term list; idempotent."""
    return Polynomial(f.registry, list(f.terms), f.order)


# -- division --------------------------------------------------------------


def divide(f: Polynomial, divisors, order: MonomialOrder = None):
    """Multivariate division with the leftmost-divisor-first rule.

    Returns ``(quotients, remainder)`` with ``f == sum(q*g) + r`` and no
    term of ``r`` divisible by a leading monomial of a divisor.
    """
    divisors = list(divisors)
    if not divisors:
        raise ArgumentError("empty divisor list")
    order = f.order if order is None else order
    reg = f.registry
    gs = []
    for g in divisors:
        if g.registry != reg:
            raise RegistryError("divisor over a different registry")
        if g.is_zero():
            raise ArgumentError("zero divisor")
        g = g.with_order(order)
        gs.append((g.lm, g.lc, g.terms))
    key = order.key
    p = dict(f.terms)
    quots = [{} for _ in gs]
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for qi, (glm, glc, gterms) in zip(quots, gs):
            if mono_divides(glm, m):
                shift = mono_div(m, glm)
                coef = c / glc
                qi[shift] = qi.get(shift, 0) + coef
                for gm, gc in gterms:
                    t = mono_mul(gm, shift)
                    v = p.get(t, 0) - coef * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    qs = [Polynomial._raw(reg, order, q) for q in quots]
    return qs, Polynomial._raw(reg, order, rem)


# -- text serialization ------------------------------------------------------


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(m, names):
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def to_text(f: Polynomial) -> str:
    """Render as e.g. ``b*f*g - c*d*h`` or ``1/2*x^2 + 3``."""
    if not f.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(f.terms):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        mono = _fmt_mono(m, f.registry.names)
        if not mono:
            body = _fmt_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_rational(a)}*{mono}"
        if k == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def parse_polynomial(text: str, registry: VarRegistry, order: MonomialOrder = LEX) -> Polynomial:
    """Parse the text form produced by :func:`to_text`.

    Accepts sums of products of rationals and ``var^e`` factors.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("var", name))
        else:
            tokens.append(("sym", sym))
        pos = m.end()
    if not tokens:
        raise ArgumentError("empty polynomial text")

    d = {}
    i = 0
    width = len(registry)

    def take(kind=None, value=None):
        nonlocal i
        if i >= len(tokens):
            raise ArgumentError(f"unexpected end of input in {text!r}")
        tok = tokens[i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ArgumentError(f"unexpected token {tok[1]!r} in {text!r}")
        i += 1
        return tok

    sign = 1
    if tokens[0] == ("sym", "-"):
        sign = -1
        i = 1
    elif tokens[0] == ("sym", "+"):
        i = 1
    while True:
        coef = Fraction(sign)
        exps = [0] * width
        while True:
            tok = take()
            if tok[0] == "num":
                coef *= Fraction(tok[1])
            elif tok[0] == "var":
                e = 1
                if i < len(tokens) and tokens[i] == ("sym", "^"):
                    i += 1
                    e = int(take("num")[1])
                exps[registry.position(tok[1])] += e
            else:
                raise ArgumentError(f"unexpected token {tok[1]!r} in {text!r}")
            if i < len(tokens) and tokens[i] == ("sym", "*"):
                i += 1
                continue
            break
        key = tuple(exps)
        d[key] = d.get(key, 0) + coef
        if i >= len(tokens):
            break
        tok = take("sym")
        if tok[1] == "+":
            sign = 1
        elif tok[1] == "-":
            sign = -1
        else:
            raise ArgumentError(f"unexpected token {tok[1]!r} in {text!r}")
    return Polynomial(registry, d, order)
