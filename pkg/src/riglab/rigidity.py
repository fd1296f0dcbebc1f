"""Exact rigidity of small rational matrices and closure-membership tests.

Rigidity here is over the algebraic closure: a pattern is usable when some
complex change supported on it drops the rank to ``r``.  Solvability is
decided by the Nullstellensatz (the substituted minor system generates the
unit ideal iff it has no complex solution).  Evaluating elimination-ideal
generators only ever certifies *non*-membership in the Zariski closure.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .cyclo import Inconclusive, RootOfUnityMatrix, certify_nonzero
from .detideals import (
    Pattern,
    all_patterns,
    build_symbolic,
    elimination_ideal_reduced,
    minors,
)
from .errors import ArgumentError, ResourceExceeded
from .exactla import RationalMatrix, bareiss_det, bareiss_rank, random_rational
from .groebner import Caps, Ideal, buchberger, contains_one
from .polyring import GREVLEX, Polynomial, VarRegistry

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RigidityResult:
    value: int
    witness_pattern: Pattern
    ruled_out: int
    counts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness_pattern.to_json(),
            "ruled_out_at_value_minus_one": self.ruled_out,
            "patterns_examined": {str(k): v for k, v in sorted(self.counts.items())},
            "field": "complex (changes over the algebraic closure)",
        }


@dataclass(frozen=True)
class MembershipDecision:
    in_closure: bool
    separating_generator: Polynomial = None
    value: Fraction = None

    def __bool__(self):
        return self.in_closure


def _as_matrix(A) -> RationalMatrix:
    A = A if isinstance(A, RationalMatrix) else RationalMatrix(A)
    if A.n_rows != A.n_cols:
        raise ArgumentError("rigidity is defined here for square matrices")
    return A


def substituted_system(A: RationalMatrix, r: int, pattern: Pattern) -> Ideal:
    """The (r+1)-minors of A + T_pattern as an ideal in the t-variables only."""
    A = _as_matrix(A)
    n = A.n_rows
    m = build_symbolic(n, pattern)
    treg = VarRegistry(m.t_names)
    values = {f"x{i * n + j + 1}": A[i, j] for i in range(n) for j in range(n)}
    gens = [g.substitute(values, treg, GREVLEX) for g in minors(m, r + 1)]
    return Ideal(treg, tuple(gens))


def pattern_solvable(A, r: int, pattern: Pattern, caps: Caps = None) -> bool:
    """True iff some complex T supported on ``pattern`` gives rank(A + T) <= r."""
    A = _as_matrix(A)
    n = A.n_rows
    if not 0 <= r <= n:
        raise ArgumentError(f"target rank {r} outside 0..{n}")
    if bareiss_rank(A) <= r:
        return True
    if r == n:
        return True
    system = substituted_system(A, r, pattern)
    if system.is_zero():
        return True
    return not contains_one(buchberger(system, GREVLEX, caps))


def _solvable_task(args):
    A, r, pattern, caps = args
    return pattern_solvable(A, r, pattern, caps)


def canonical_pattern(pattern: Pattern) -> tuple:
    """Least position list over all row and column relabelings."""
    n = pattern.n
    best = None
    for rp in permutations(range(n)):
        for cp in permutations(range(n)):
            cand = tuple(sorted((rp[i], cp[j]) for i, j in pattern.positions))
            if best is None or cand < best:
                best = cand
    return best


def rig_exact(A, r: int, max_n: int = 4, jobs: int = 1, caps: Caps = None,
              orbit_reduction: bool = False) -> RigidityResult:
    """Smallest number of entries whose change brings the rank to <= r.

    Patterns are tried by size, then lexicographically; the first solvable
    one is the witness.  With ``jobs > 1`` solvability tests run in a
    process pool, and the result is still the lexicographically least witness.

    ``orbit_reduction`` tests one pattern per row/column-permutation class.
    That is only sound when the answer is known to be invariant under
    relabeling for this particular matrix, so it is off by default.
    """
    A = _as_matrix(A)
    n = A.n_rows
    if n > max_n:
        raise ArgumentError(f"n={n} exceeds the enumeration cap max_n={max_n}")
    if not 0 <= r <= n:
        raise ArgumentError(f"target rank {r} outside 0..{n}")
    if jobs < 1:
        raise ArgumentError("jobs must be at least 1")
    if bareiss_rank(A) <= r:
        return RigidityResult(0, Pattern(n, ()), 0, {0: 1})
    counts = {}
    prev_count = 0
    for k in range(1, (n - r) ** 2 + 1):
        patterns = list(all_patterns(n, k))
        if orbit_reduction:
            seen = set()
            reps = []
            for p in patterns:
                c = canonical_pattern(p)
                if c not in seen:
                    seen.add(c)
                    reps.append(p)
            patterns = reps
        witness, examined = _first_solvable(A, r, patterns, caps, jobs)
        counts[k] = examined
        if witness is not None:
            return RigidityResult(k, witness, prev_count, counts)
        prev_count = examined
    raise AssertionError("no pattern of size (n-r)^2 works; this contradicts Rig <= (n-r)^2")


def _first_solvable(A, r, patterns, caps, jobs):
    if jobs == 1:
        for idx, p in enumerate(patterns):
            try:
                ok = pattern_solvable(A, r, p, caps)
            except ResourceExceeded as exc:
                exc.diagnostics["pattern"] = str(p)
                raise
            if ok:
                return p, idx + 1
        return None, len(patterns)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = pool.map(_solvable_task, [(A, r, p, caps) for p in patterns], chunksize=4)
        for idx, ok in enumerate(results):
            if ok:
                pool.shutdown(wait=False, cancel_futures=True)
                return patterns[idx], idx + 1
    return None, len(patterns)


def witness_changes(A, r: int, pattern: Pattern):
    """Explicit change matrix T on ``pattern`` with rank(A + T) = r, best effort.

    Looks for an invertible r x r minor of A whose complementary block holds
    the pattern and whose forced completion differs from A only on the
    pattern.  Returns None when no such minor exists.
    """
    A = _as_matrix(A)
    n = A.n_rows
    pos = set(pattern.positions)
    for rows in combinations(range(n), r):
        for cols in combinations(range(n), r):
            if any(i in rows or j in cols for i, j in pos):
                continue
            C11 = A.submatrix(rows, cols)
            if r and not bareiss_det(C11):
                continue
            orows = [i for i in range(n) if i not in rows]
            ocols = [j for j in range(n) if j not in cols]
            if r:
                S = A.submatrix(orows, cols) @ C11.inverse() @ A.submatrix(rows, ocols)
            else:
                S = RationalMatrix.zeros(n - r)
            T = [[Fraction(0)] * n for _ in range(n)]
            good = True
            for a, i in enumerate(orows):
                for b, j in enumerate(ocols):
                    d = S[a, b] - A[i, j]
                    if d and (i, j) not in pos:
                        good = False
                        break
                    T[i][j] = d
                if not good:
                    break
            if good:
                return RationalMatrix(T)
    return None


# -- closure membership and maximal-rigidity certificates ----------------------------


def closure_member(A, r: int, pattern: Pattern, caps: Caps = None) -> MembershipDecision:
    """Is A in the Zariski closure of the matrices fixable on ``pattern``?

    Checks every generator of the elimination ideal at A; a nonvanishing
    generator is returned as a separating certificate.
    """
    A = _as_matrix(A)
    ei = elimination_ideal_reduced(A.n_rows, r, pattern, caps)
    point = A.flat()
    for g in ei.generators:
        v = g.evaluate(point)
        if v:
            return MembershipDecision(False, g, v)
    return MembershipDecision(True)


@dataclass
class CertificateReport:
    n: int
    r: int
    pattern_size: int
    certified_patterns: list = field(default_factory=list)
    inconclusive_patterns: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.inconclusive_patterns

    @property
    def total(self) -> int:
        return len(self.certified_patterns) + len(self.inconclusive_patterns)

    def to_json(self) -> dict:
        return {
            "n": self.n, "r": self.r, "pattern_size": self.pattern_size,
            "certified": self.certified,
            "certified_count": len(self.certified_patterns),
            "total": self.total,
            "inconclusive": [str(p) for p in self.inconclusive_patterns],
        }


def max_rigidity_certificate(A, r: int, caps: Caps = None, max_attempts: int = 8,
                             seed: int = 0) -> CertificateReport:
    """Certify Rig(A, r) = (n-r)^2 by showing A avoids every size-((n-r)^2 - 1) closure.

    For each such pattern one elimination-ideal generator must be nonzero
    at A: exactly for rational A, by a finite-field certificate for a
    root-of-unity matrix.
    """
    if isinstance(A, RootOfUnityMatrix):
        n = A.n
    else:
        A = _as_matrix(A)
        n = A.n_rows
    if not 0 <= r < n:
        raise ArgumentError(f"target rank {r} outside 0..{n - 1}")
    size = (n - r) ** 2 - 1
    report = CertificateReport(n, r, size)
    rng = random.Random(seed)
    for pattern in all_patterns(n, size):
        ei = elimination_ideal_reduced(n, r, pattern, caps)
        found = None
        for g in ei.generators:
            if isinstance(A, RootOfUnityMatrix):
                cert = certify_nonzero(g, A, max_attempts, seed=rng.randrange(1 << 30))
                if not isinstance(cert, Inconclusive):
                    found = (g, cert)
                    break
            else:
                v = g.evaluate(A.flat())
                if v:
                    found = (g, v)
                    break
        if found:
            report.certified_patterns.append((pattern, found[0], found[1]))
        else:
            report.inconclusive_patterns.append(pattern)
    return report


# -- matrix families used in the worked examples ------------------------------------


def _nonzero(**vals):
    out = {}
    for k, v in vals.items():
        v = Fraction(v)
        if not v:
            raise ArgumentError(f"parameter {k} must be nonzero")
        out[k] = v
    return out


def eq8(a=1, b=1, c=1, d=1, e=1) -> RationalMatrix:
    p = _nonzero(a=a, b=b, c=c, d=d, e=e)
    return RationalMatrix([[p["a"], p["b"], p["c"]], [p["d"], 0, 0], [p["e"], 0, 0]])


def eq8_delta(a=1, b=1, c=1, d=1, e=1, delta=Fraction(1, 2)) -> RationalMatrix:
    p = _nonzero(a=a, b=b, c=c, d=d, e=e, delta=delta)
    a, b, c, d, e, t = (p[k] for k in ("a", "b", "c", "d", "e", "delta"))
    if t == 1 / a:
        raise ArgumentError("delta must differ from 1/a")
    return RationalMatrix([[a, b, c], [d, b * d * t, c * d * t], [e, b * e * t, c * e * t]])


def _family_vectors(n, alpha, a, b):
    a = list(a) if a is not None else [1] * (n - 1)
    b = list(b) if b is not None else [1] * (n - 1)
    if len(a) != n - 1 or len(b) != n - 1:
        raise ArgumentError(f"need {n - 1} values for each of a and b")
    _nonzero(alpha=alpha, **{f"a{i}": v for i, v in enumerate(a)}, **{f"b{i}": v for i, v in enumerate(b)})
    return Fraction(alpha), [Fraction(v) for v in a], [Fraction(v) for v in b]


def An(n: int, alpha=1, a=None, b=None) -> RationalMatrix:
    """First row (alpha, a...), first column (alpha, b...), zeros elsewhere."""
    if n < 2:
        raise ArgumentError("n must be at least 2")
    alpha, a, b = _family_vectors(n, alpha, a, b)
    rows = [[alpha] + a] + [[b[i]] + [0] * (n - 1) for i in range(n - 1)]
    return RationalMatrix(rows)


def An_delta(n: int, alpha=1, a=None, b=None, delta=Fraction(1, 2)) -> RationalMatrix:
    """An with the zero block replaced by the rank-one block delta * b a^T."""
    if n < 2:
        raise ArgumentError("n must be at least 2")
    alpha, a, b = _family_vectors(n, alpha, a, b)
    t = Fraction(delta)
    if not t or t == 1 / alpha:
        raise ArgumentError("delta must be nonzero and differ from 1/alpha")
    rows = [[alpha] + a] + [[b[i]] + [a[j] * b[i] * t for j in range(n - 1)] for i in range(n - 1)]
    return RationalMatrix(rows)


def m511(a=1, b=2, c=3, d=5, e=7, g=11, i=13) -> RationalMatrix:
    p = _nonzero(a=a, b=b, c=c, d=d, e=e, g=g, i=i)
    return RationalMatrix([[p["a"], p["b"], p["c"]], [p["d"], p["e"], 0], [p["g"], 0, p["i"]]])


def m511_delta(a=1, b=2, c=3, d=5, e=7, g=11, i=13, delta=Fraction(1, 2)) -> RationalMatrix:
    p = _nonzero(a=a, b=b, c=c, d=d, e=e, g=g, i=i, delta=delta)
    t = p["delta"]
    return RationalMatrix([[p["a"], p["b"], p["c"]],
                           [p["d"], p["e"], p["c"] * p["d"] * t],
                           [p["g"], p["b"] * p["g"] * t, p["i"]]])


def primeM() -> RationalMatrix:
    return RationalMatrix([[2, 3, 5], [7, 11, 13], [17, 19, 23]])


def vandermonde_primes(p=2, q=3, r=5) -> RationalMatrix:
    from .cyclo import _isprime

    if len({p, q, r}) != 3 or not all(_isprime(x) for x in (p, q, r)):
        raise ArgumentError("p, q, r must be distinct primes")
    return RationalMatrix([[1, x, x * x] for x in (p, q, r)])


FAMILIES = {
    "eq8": eq8, "eq8_delta": eq8_delta, "An": An, "An_delta": An_delta,
    "m511": m511, "m511_delta": m511_delta, "primeM": primeM,
    "vandermonde_primes": vandermonde_primes,
}


def paper_families(kind: str, **params) -> RationalMatrix:
    try:
        build = FAMILIES[kind]
    except KeyError:
        raise ArgumentError(f"unknown family {kind!r}; choose from {sorted(FAMILIES)}") from None
    return build(**params)


def random_nonzero(rng) -> Fraction:
    return random_rational(rng, nonzero=True)
