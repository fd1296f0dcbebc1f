"""Root-of-unity matrices, degree bounds and finite-field nonvanishing certificates.

A polynomial with integer coefficients evaluated at primitive roots of unity
of prime orders ``p`` is mapped to ``Z/q`` for a prime ``q = 1 mod p`` by
sending each root to an element of multiplicative order ``p``.  That map is
a ring homomorphism (reduction modulo a prime above ``q``), so a nonzero
residue proves the exact value is nonzero.  A zero residue proves nothing.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod

from .errors import ArgumentError, SearchExhausted
from .polyring import Polynomial, VarRegistry


def _isprime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


# -- matrices with root-of-unity entries -------------------------------------


@dataclass(frozen=True)
class RootEntry:
    """``zeta_p^e``, or ``zeta_p^e + zeta_p^-e`` when ``real_part``."""

    p: int
    e: int = 1
    real_part: bool = False

    def __post_init__(self):
        if not _isprime(self.p):
            raise ArgumentError(f"{self.p} is not prime")
        if not 1 <= self.e <= self.p - 1:
            raise ArgumentError(f"exponent {self.e} outside 1..{self.p - 1}")

    def token(self) -> str:
        head = "rezeta" if self.real_part else "zeta"
        return f"{head}({self.p})^{self.e}"

    @classmethod
    def parse(cls, token: str) -> "RootEntry":
        m = _TOKEN_RE.fullmatch(token.strip())
        if not m:
            raise ArgumentError(f"bad root-of-unity token {token!r}")
        head, p, e = m.groups()
        return cls(int(p), int(e) if e else 1, head == "rezeta")


_TOKEN_RE = re.compile(r"(zeta|rezeta)\((\d+)\)(?:\^(\d+))?")


@dataclass(frozen=True)
class RootOfUnityMatrix:
    n: int
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ArgumentError("entries must form an n x n grid")
        primes = [e.p for r in rows for e in r]
        if len(set(primes)) != len(primes):
            raise ArgumentError("entry primes must be distinct")
        object.__setattr__(self, "entries", rows)

    @property
    def flat(self):
        return [e for r in self.entries for e in r]

    @property
    def primes(self):
        return [e.p for e in self.flat]

    def to_json(self) -> dict:
        return {"rows": self.n, "cols": self.n,
                "entries": [[e.token() for e in r] for r in self.entries]}

    @classmethod
    def from_json(cls, data) -> "RootOfUnityMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        rows = [[RootEntry.parse(t) for t in r] for r in data["entries"]]
        return cls(len(rows), tuple(tuple(r) for r in rows))


def build_root_matrix(n: int, primes, real_part: bool = False) -> RootOfUnityMatrix:
    """Entry (i, j) is the primitive root of order ``primes[i*n + j]``."""
    primes = list(primes)
    if len(primes) != n * n:
        raise ArgumentError(f"need {n * n} primes, got {len(primes)}")
    if len(set(primes)) != len(primes):
        raise ArgumentError("primes must be distinct")
    for p in primes:
        if not _isprime(p):
            raise ArgumentError(f"{p} is not prime")
    flat = [RootEntry(p, 1, real_part) for p in primes]
    return RootOfUnityMatrix(n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))


def primes_from(start: int, count: int):
    out = []
    p = start
    while len(out) < count:
        if _isprime(p):
            out.append(p)
        p += 1
    return out


# -- degree bounds -------------------------------------------------------------


@dataclass(frozen=True)
class FactoredInt:
    """A product of ``base ** exponent`` factors."""

    factors: tuple

    @property
    def value(self) -> int:
        return prod(b**e for b, e in self.factors)

    def to_json(self, digit_budget: int = 5000) -> dict:
        out = {"factored": " * ".join(f"{b}^{e}" for b, e in self.factors)}
        v = self.value
        digits = len(str(v)) if v.bit_length() < digit_budget * 4 else None
        if digits is not None and digits <= digit_budget:
            out["decimal"] = str(v)
        else:
            out["decimal_digits_over"] = digit_budget
        return out


def delta_thm7(n: int) -> FactoredInt:
    """Prime-size threshold n^(4 n^2) of the original construction."""
    if n < 1:
        raise ArgumentError("n must be positive")
    return FactoredInt(((n, 4 * n * n),))


def delta_thm17(n: int) -> FactoredInt:
    """Improved threshold 2 n^(2 n^2) using only the n^2 matrix variables."""
    if n < 1:
        raise ArgumentError("n must be positive")
    return FactoredInt(((2, 1), (n, 2 * n * n)))


def dfgs_parameters(n: int, r: int, variant: str = "thm7"):
    """``(m, d)``: number of variables and degree parameter of the bound."""
    if not 1 <= r <= n - 1:
        raise ArgumentError(f"need 1 <= r <= n-1, got r={r}, n={n}")
    d = max(r + 1, 3)
    if variant == "thm7":
        m = n * n + (n - r) ** 2 - 1
    elif variant == "thm17":
        m = n * n
    else:
        raise ArgumentError(f"unknown variant {variant!r}")
    return m, d


def dfgs_bound(n: int, r: int, variant: str = "thm7") -> int:
    """Degree bound d^m (d^m + 1) for a nonzero element of the elimination ideal."""
    m, d = dfgs_parameters(n, r, variant)
    dm = d**m
    return dm * (dm + 1)


def bound_chain_holds(n: int, r: int, variant: str = "thm7") -> bool:
    """Exact check that the degree bound sits strictly below the prime threshold."""
    delta = delta_thm7(n) if variant == "thm7" else delta_thm17(n)
    return dfgs_bound(n, r, variant) < delta.value


@dataclass(frozen=True)
class BoundReport:
    n: int
    r: int
    delta_thm7: FactoredInt
    delta_thm17: FactoredInt
    dfgs_thm7: int
    dfgs_thm17: int

    def to_json(self) -> dict:
        m7, d7 = dfgs_parameters(self.n, self.r, "thm7")
        m17, d17 = dfgs_parameters(self.n, self.r, "thm17")
        return {
            "n": self.n, "r": self.r,
            "delta_thm7": self.delta_thm7.to_json(),
            "delta_thm17": self.delta_thm17.to_json(),
            "dfgs_thm7": {"m": m7, "d": d7, "factored": f"{d7}^{m7}*({d7}^{m7}+1)",
                          "decimal": str(self.dfgs_thm7)},
            "dfgs_thm17": {"m": m17, "d": d17, "factored": f"{d17}^{m17}*({d17}^{m17}+1)",
                           "decimal": str(self.dfgs_thm17)},
            "chain_thm7": self.dfgs_thm7 < self.delta_thm7.value,
            "chain_thm17": self.dfgs_thm17 < self.delta_thm17.value,
        }


def bound_report(n: int, r: int) -> BoundReport:
    return BoundReport(n, r, delta_thm7(n), delta_thm17(n),
                       dfgs_bound(n, r, "thm7"), dfgs_bound(n, r, "thm17"))


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class NonvanishingCertificate:
    q: int
    root_assignment: dict
    residue: int
    attempts: int

    def verify(self) -> bool:
        """Re-check the certificate's structural invariants."""
        if not _isprime(self.q) or not self.residue % self.q:
            return False
        for p, w in self.root_assignment.items():
            if (self.q - 1) % p or pow(w, p, self.q) != 1 or w % self.q == 1:
                return False
            if sum(pow(w, i, self.q) for i in range(p)) % self.q:
                return False
        return True

    def to_json(self) -> dict:
        return {"q": self.q, "roots": {str(p): w for p, w in sorted(self.root_assignment.items())},
                "residue": self.residue, "attempts": self.attempts}


@dataclass(frozen=True)
class Inconclusive:
    """Every attempted reduction gave zero; the value is probably zero."""

    attempts: int
    moduli: tuple = field(default=())
    reason: str = "probably zero"

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"inconclusive": True, "attempts": self.attempts, "reason": self.reason}


def integer_terms(g: Polynomial):
    """Terms of ``g`` scaled by the lcm of its denominators."""
    den = lcm(*(c.denominator for _, c in g.terms)) if g.terms else 1
    return [(m, int(c * den)) for m, c in g.terms]


def _entry_specs(M):
    if isinstance(M, RootOfUnityMatrix):
        return M.flat
    return [e if isinstance(e, RootEntry) else RootEntry(*e) for e in M]


def prime_moduli(primes, start: int = 1, budget: int = 100_000):
    """Primes ``q = 1 + m * prod(primes)`` for m = start, start+1, ..."""
    base = prod(sorted(set(primes)))
    for m in range(start, start + budget):
        q = 1 + m * base
        if _isprime(q):
            yield q


def certify_nonzero(g: Polynomial, M, max_attempts: int = 8, seed=0, search_budget: int = 100_000):
    """Try to prove ``g(M) != 0`` by reduction modulo primes ``q``.

    ``M`` is a :class:`RootOfUnityMatrix` (variables map to entries
    row-major) or a list of :class:`RootEntry`, one per variable of ``g``.
    Returns a :class:`NonvanishingCertificate` or :class:`Inconclusive`.
    """
    specs = _entry_specs(M)
    if len(specs) != len(g.registry):
        raise ArgumentError(f"polynomial has {len(g.registry)} variables but {len(specs)} entries")
    terms = integer_terms(g)
    if not terms:
        return Inconclusive(0, (), "polynomial is identically zero")
    primes = sorted({s.p for s in specs})
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    moduli = prime_moduli(primes, budget=search_budget)
    tried = []
    for attempt in range(1, max_attempts + 1):
        q = next(moduli, None)
        if q is None:
            if tried:
                break
            raise SearchExhausted(f"no prime q = 1 mod {primes} within {search_budget} candidates")
        tried.append(q)
        roots = {}
        for p in primes:
            while True:
                w = pow(rng.randrange(2, q), (q - 1) // p, q)
                if w != 1:
                    break
            roots[p] = w
        vals = []
        for s in specs:
            w = pow(roots[s.p], s.e, q)
            vals.append((w + pow(w, -1, q)) % q if s.real_part else w)
        residue = 0
        for m, c in terms:
            t = c % q
            for v, e in zip(vals, m):
                if e:
                    t = t * pow(v, e, q) % q
            residue = (residue + t) % q
        if residue:
            return NonvanishingCertificate(q, roots, residue, attempt)
    return Inconclusive(len(tried), tuple(tried))


# -- exact fallback for at most two distinct primes --------------------------------


def exact_is_zero(g: Polynomial, M) -> bool:
    """Exact zero test of ``g`` at root-of-unity values using at most two primes.

    Values live in Q[x, y] / (Phi_p(x), Phi_q(y)), which is the field
    Q(zeta_pq) with basis x^i y^j (i < p-1, j < q-1).
    """
    specs = _entry_specs(M)
    if len(specs) != len(g.registry):
        raise ArgumentError("entry count does not match the polynomial's variables")
    used = sorted({s.p for s, e in zip(specs, _used_mask(g)) if e})
    if len(used) > 2:
        raise ArgumentError("exact fallback supports at most two distinct primes")
    p1 = used[0] if used else 1
    p2 = used[1] if len(used) > 1 else 1

    def axis(s):
        return 0 if s.p == p1 else 1

    def value(s):
        # element of the group ring Q[Z_p1 x Z_p2]
        ex = (s.e, 0) if axis(s) == 0 else (0, s.e)
        if not s.real_part:
            return {ex: Fraction(1)}
        neg = ((p1 - ex[0]) % p1, 0) if axis(s) == 0 else (0, (p2 - ex[1]) % p2)
        out = {ex: Fraction(1)}
        out[neg] = out.get(neg, 0) + 1
        return out

    def mul(a, b):
        out = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                k = ((i1 + i2) % p1, (j1 + j2) % p2)
                out[k] = out.get(k, 0) + c1 * c2
        return out

    total = {}
    for m, c in g.terms:
        acc = {(0, 0): Fraction(c)}
        for s, e in zip(specs, m):
            for _ in range(e):
                acc = mul(acc, value(s))
        for k, v in acc.items():
            total[k] = total.get(k, 0) + v

    def coeff(i, j):
        return total.get((i % p1, j % p2), 0)

    # reduce x^(p1-1) and y^(p2-1) via Phi; zero iff every reduced coefficient vanishes
    top1, top2 = p1 - 1, p2 - 1
    for i in range(max(top1, 1)):
        for j in range(max(top2, 1)):
            v = coeff(i, j)
            if p1 > 1:
                v -= coeff(top1, j)
            if p2 > 1:
                v -= coeff(i, top2)
            if p1 > 1 and p2 > 1:
                v += coeff(top1, top2)
            if v:
                return False
    return True


def _used_mask(g):
    used = [False] * len(g.registry)
    for m, _ in g.terms:
        for i, e in enumerate(m):
            if e:
                used[i] = True
    return used


# -- low-degree nonvanishing property check ------------------------------------------


def check_degree_precondition(g: Polynomial, primes) -> None:
    """Reject ``g`` unless deg(g) < min(p) - 1 = [Q(zeta_p) : Q]."""
    bound = min(primes) - 1
    if g.total_degree() >= bound:
        raise ArgumentError(
            f"degree {g.total_degree()} is not below {bound}; nonvanishing is not guaranteed")


def random_integer_polynomial(registry: VarRegistry, degree_bound: int, rng, max_coeff: int = 9):
    """Random nonzero integer polynomial of total degree < ``degree_bound``."""
    from itertools import product

    nv = len(registry)
    monos = [m for m in product(range(degree_bound), repeat=nv) if sum(m) < degree_bound]
    while True:
        k = rng.randint(1, len(monos))
        chosen = rng.sample(monos, k)
        terms = {m: rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c]) for m in chosen}
        g = Polynomial(registry, terms)
        if not g.is_zero():
            return g


def lemma11_property_test(primes, degree_bound: int, trials: int, rng_seed=0, max_attempts: int = 8):
    """Certify random low-degree polynomials nonzero at distinct prime-order roots.

    Variable ``z{i+1}`` takes the value zeta_{primes[i]}.  Every trial should
    be certified; failures are reported as counterexample candidates.
    """
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ArgumentError("primes must be distinct")
    if not degree_bound < min(primes) - 1:
        raise ArgumentError(f"degree bound {degree_bound} must be below {min(primes) - 1}")
    rng = random.Random(rng_seed)
    reg = VarRegistry(f"z{i + 1}" for i in range(len(primes)))
    specs = [RootEntry(p) for p in primes]
    certified = 0
    exact_checked = 0
    candidates = []
    for trial in range(trials):
        g = random_integer_polynomial(reg, degree_bound, rng)
        cert = certify_nonzero(g, specs, max_attempts, seed=rng.randrange(1 << 30))
        if cert:
            certified += 1
            if len(primes) <= 2:
                exact_checked += 1
                if exact_is_zero(g, specs):
                    candidates.append({"trial": trial, "g": str(g), "issue": "certificate unsound"})
        else:
            candidates.append({"trial": trial, "g": str(g), "issue": "not certified"})
    return {"primes": primes, "degree_bound": degree_bound, "trials": trials,
            "certified": certified, "exact_confirmed": exact_checked - sum(
                c["issue"] == "certificate unsound" for c in candidates),
            "counterexample_candidates": candidates}
