"""Exact rational matrices, Bareiss rank and rank-variety samplers."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

from .detideals import MinorSpec, Pattern, determinant
from .errors import ArgumentError, PatternError
from .polyring import Polynomial, VarRegistry, as_rational


class RationalMatrix:
    """Immutable rectangular matrix of Fractions."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(as_rational(v) for v in row) for row in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ArgumentError("ragged matrix rows")
        self.rows = rows

    @classmethod
    def zeros(cls, n_rows, n_cols=None):
        n_cols = n_rows if n_cols is None else n_cols
        return cls([[0] * n_cols for _ in range(n_rows)])

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def n_rows(self):
        return len(self.rows)

    @property
    def n_cols(self):
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self.rows)
        return f"RationalMatrix([{body}])"

    def __add__(self, other):
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return RationalMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other):
        if self.n_cols != other.n_rows:
            raise ArgumentError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                               for r in self.rows] if cols else [[] for _ in self.rows])

    def transpose(self):
        return RationalMatrix(list(zip(*self.rows)))

    def submatrix(self, rows, cols):
        return RationalMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def with_entry(self, i, j, value):
        rows = [list(r) for r in self.rows]
        rows[i][j] = as_rational(value)
        return RationalMatrix(rows)

    def permuted(self, row_perm, col_perm):
        """Matrix B with ``B[row_perm[i]][col_perm[j]] = self[i][j]``."""
        out = [[None] * self.n_cols for _ in range(self.n_rows)]
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                out[row_perm[i]][col_perm[j]] = v
        return RationalMatrix(out)

    def flat(self):
        return [v for row in self.rows for v in row]

    def rank(self):
        return bareiss_rank(self)

    def det(self):
        return bareiss_det(self)

    def inverse(self):
        n = self.n_rows
        if n != self.n_cols:
            raise ArgumentError("only square matrices are invertible")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((r for r in range(c, n) if aug[r][c]), None)
            if p is None:
                raise ArgumentError("matrix is singular")
            aug[c], aug[p] = aug[p], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [v * inv for v in aug[c]]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
        return RationalMatrix([row[n:] for row in aug])

    def to_json(self) -> dict:
        return {"rows": self.n_rows, "cols": self.n_cols,
                "entries": [[_fmt(v) for v in row] for row in self.rows]}

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        m = cls([[Fraction(str(v)) for v in row] for row in data["entries"]])
        if m.n_rows != data.get("rows", m.n_rows) or m.n_cols != data.get("cols", m.n_cols):
            raise ArgumentError("declared shape does not match entries")
        return m


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _integer_rows(M: RationalMatrix):
    out = []
    for row in M.rows:
        den = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * den) for v in row])
    return out


def _bareiss(A):
    """In-place fraction-free echelon of an integer matrix.

    Returns ``(rank, sign)`` where ``sign`` tracks row swaps.
    """
    m = len(A)
    n = len(A[0]) if A else 0
    prev = 1
    row = 0
    sign = 1
    for col in range(n):
        if row == m:
            break
        p = next((r for r in range(row, m) if A[r][col]), None)
        if p is None:
            continue
        if p != row:
            A[row], A[p] = A[p], A[row]
            sign = -sign
        piv = A[row][col]
        for r in range(row + 1, m):
            arc = A[r][col]
            Ar, Arow = A[r], A[row]
            for c in range(col + 1, n):
                Ar[c] = (Ar[c] * piv - arc * Arow[c]) // prev
            Ar[col] = 0
        prev = piv
        row += 1
    return row, sign


def bareiss_rank(M: RationalMatrix) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination."""
    if M.n_rows == 0 or M.n_cols == 0:
        return 0
    rank, _ = _bareiss(_integer_rows(M))
    return rank


def bareiss_det(M: RationalMatrix) -> Fraction:
    n = M.n_rows
    if n != M.n_cols:
        raise ArgumentError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    for row in M.rows:
        scale *= lcm(*(v.denominator for v in row))
    A = _integer_rows(M)
    rank, sign = _bareiss(A)
    if rank < n:
        return Fraction(0)
    return Fraction(sign * A[n - 1][n - 1]) / scale


def support(M: RationalMatrix) -> Pattern:
    """Positions of the nonzero entries."""
    if M.n_rows != M.n_cols:
        raise ArgumentError("support patterns are defined for square matrices")
    return Pattern(M.n_rows, tuple((i, j) for i, row in enumerate(M.rows)
                                   for j, v in enumerate(row) if v))


# -- random sampling -----------------------------------------------------------


def random_rational(rng: random.Random, nonzero=False) -> Fraction:
    """Numerator in [-20, 20], denominator in {1, 2, 3}."""
    while True:
        v = Fraction(rng.randint(-20, 20), rng.choice((1, 2, 3)))
        if v or not nonzero:
            return v


def random_matrix(rng, n_rows, n_cols=None) -> RationalMatrix:
    n_cols = n_rows if n_cols is None else n_cols
    return RationalMatrix([[random_rational(rng) for _ in range(n_cols)] for _ in range(n_rows)])


def random_invertible(rng, n) -> RationalMatrix:
    while True:
        G = random_matrix(rng, n)
        if bareiss_det(G):
            return G


def sample_rank_variety(n: int, s: int, tau: MinorSpec = None, rng_seed=0) -> RationalMatrix:
    """Random matrix of rank exactly ``s`` whose ``tau`` minor is invertible.

    The tau block C11 is sampled invertible, C12 and C21 freely, and the
    complementary block is forced to C21 C11^-1 C12.
    """
    if not 0 <= s <= n:
        raise ArgumentError(f"rank {s} outside 0..{n}")
    if tau is None:
        tau = MinorSpec(tuple(range(s)), tuple(range(s)))
    if tau.size != s or any(not 0 <= v < n for v in tau.rows + tau.cols):
        raise ArgumentError("tau must select s rows and s columns of the matrix")
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    rows = list(tau.rows) + [i for i in range(n) if i not in tau.rows]
    cols = list(tau.cols) + [j for j in range(n) if j not in tau.cols]
    C11 = random_invertible(rng, s)
    C12 = random_matrix(rng, s, n - s)
    C21 = random_matrix(rng, n - s, s)
    C22 = C21 @ C11.inverse() @ C12 if 0 < s < n else RationalMatrix.zeros(n - s)
    out = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a < s and b < s:
                v = C11[a, b]
            elif a < s:
                v = C12[a, b - s]
            elif b < s:
                v = C21[a - s, b]
            else:
                v = C22[a - s, b - s]
            out[rows[a]][cols[b]] = v
    return RationalMatrix(out)


# -- the parametrization of rank-r-plus-pattern matrices ------------------------


@dataclass(frozen=True)
class ParamPoint:
    G: RationalMatrix
    A: RationalMatrix
    B: RationalMatrix
    xpi: tuple

    def __post_init__(self):
        if self.G.n_rows and not bareiss_det(self.G):
            raise ArgumentError("G must be invertible")


def corner_pattern(n: int, r: int, k: int) -> Pattern:
    """First ``k`` cells (row-major) of the bottom-right (n-r)x(n-r) block."""
    cells = [(i, j) for i in range(r, n) for j in range(r, n)]
    if not 0 <= k <= len(cells):
        raise PatternError(f"k={k} outside 0..{len(cells)}")
    return Pattern(n, tuple(cells[:k]))


def _check_corner(n, r, pattern):
    if pattern.n != n:
        raise PatternError("pattern size mismatch")
    for i, j in pattern.positions:
        if i < r or j < r:
            raise PatternError(f"position {(i, j)} outside the bottom-right block")


def random_param_point(n: int, r: int, k: int, rng) -> ParamPoint:
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    G = random_invertible(rng, r) if r else RationalMatrix([])
    return ParamPoint(G, random_matrix(rng, r, n - r), random_matrix(rng, n - r, r),
                      tuple(random_rational(rng) for _ in range(k)))


def sample_U(n: int, r: int, pattern: Pattern, point: ParamPoint) -> RationalMatrix:
    """Block matrix [[G, A], [B, X_pattern + B G^-1 A]]."""
    _check_corner(n, r, pattern)
    if len(point.xpi) != len(pattern):
        raise ArgumentError("point carries the wrong number of pattern values")
    m = n - r
    if r:
        S = point.B @ point.G.inverse() @ point.A
    else:
        S = RationalMatrix.zeros(m)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(r):
        for j in range(r):
            out[i][j] = point.G[i, j]
        for j in range(m):
            out[i][r + j] = point.A[i, j]
    for i in range(m):
        for j in range(r):
            out[r + i][j] = point.B[i, j]
        for j in range(m):
            out[r + i][r + j] = S[i, j]
    for (i, j), v in zip(pattern.positions, point.xpi):
        out[i][j] += v
    return RationalMatrix(out)


def pattern_part(n: int, pattern: Pattern, point: ParamPoint) -> RationalMatrix:
    out = [[0] * n for _ in range(n)]
    for (i, j), v in zip(pattern.positions, point.xpi):
        out[i][j] = v
    return RationalMatrix(out)


def param_names(n: int, r: int, k: int):
    m = n - r
    return ([f"g{i}_{j}" for i in range(r) for j in range(r)]
            + [f"a{i}_{j}" for i in range(r) for j in range(m)]
            + [f"b{i}_{j}" for i in range(m) for j in range(r)]
            + [f"p{l}" for l in range(k)])


def param_vector(point: ParamPoint):
    return point.G.flat() + point.A.flat() + point.B.flat() + list(point.xpi)


@lru_cache(maxsize=64)
def _symbolic_jacobian(n, r, positions):
    """Jacobian rows of the parametrization with denominators cleared.

    Entries of B G^-1 A equal (B adj(G) A)_ij / det(G).  For such an entry
    P/D the true gradient is (D dP - P dD) / D^2; we keep D dP - P dD, which
    scales the row by D^2.  Row scaling by a nonzero constant does not change
    rank, so at any point with det(G) != 0 the rank is exact.
    """
    k = len(positions)
    m = n - r
    names = param_names(n, r, k)
    reg = VarRegistry(names)
    v = lambda s: Polynomial.var(reg, s)  # noqa: E731
    G = [[v(f"g{i}_{j}") for j in range(r)] for i in range(r)]
    D = determinant(G, registry=reg) if r else Polynomial.constant(reg, 1)
    adj = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            rows = tuple(x for x in range(r) if x != j)
            cols = tuple(x for x in range(r) if x != i)
            c = determinant(G, rows, cols, reg)
            adj[i][j] = c if (i + j) % 2 == 0 else -c
    A = [[v(f"a{i}_{j}") for j in range(m)] for i in range(r)]
    B = [[v(f"b{i}_{j}") for j in range(r)] for i in range(m)]
    pvar = {pos: v(f"p{l}") for l, pos in enumerate(positions)}

    # (numerator, has_denominator) per output entry, row-major
    entries = []
    for i in range(n):
        for j in range(n):
            if i < r and j < r:
                entries.append((G[i][j], False))
            elif i < r:
                entries.append((A[i][j - r], False))
            elif j < r:
                entries.append((B[i - r][j], False))
            else:
                a, b = i - r, j - r
                num = Polynomial.zero(reg)
                for s in range(r):
                    for t in range(r):
                        num = num + B[a][s] * adj[s][t] * A[t][b]
                if (i, j) in pvar:
                    num = num + D * pvar[(i, j)]
                entries.append((num, bool(r)))
    dD = [D.diff(x) for x in names]
    rows = []
    for num, frac in entries:
        if frac:
            rows.append([D * num.diff(x) - num * dDx for x, dDx in zip(names, dD)])
        else:
            rows.append([num.diff(x) for x in names])
    return rows


def jacobian_at(n: int, r: int, pattern: Pattern, point: ParamPoint) -> RationalMatrix:
    """Row-scaled Jacobian of (G, A, B, X_pattern) -> U evaluated at ``point``."""
    _check_corner(n, r, pattern)
    rows = _symbolic_jacobian(n, r, pattern.positions)
    x = param_vector(point)
    return RationalMatrix([[p.evaluate(x) if p else 0 for p in row] for row in rows])


def jacobian_rank_at(n: int, r: int, pattern: Pattern, point: ParamPoint) -> int:
    """Exact rank of the parametrization's differential at ``point``."""
    return bareiss_rank(jacobian_at(n, r, pattern, point))


def expected_dimension(n: int, r: int, k: int) -> int:
    return n * n - (n - r) ** 2 + k


def dimension_witness(n: int, r: int, k: int, points: int = 5, seed=0, max_resamples: int = 10):
    """Jacobian-rank lower bound for the rigidity variety at random points.

    Returns a dict with the expected dimension, the parameter count (an
    upper bound on the image dimension), the ranks observed and the number
    of non-generic samples that were drawn again.
    """
    if not 0 <= r <= n or not 0 <= k <= (n - r) ** 2:
        raise ArgumentError("need 0 <= r <= n and 0 <= k <= (n-r)^2")
    rng = random.Random(seed)
    pattern = corner_pattern(n, r, k)
    expected = expected_dimension(n, r, k)
    ranks = []
    resamples = 0
    for _ in range(points):
        for attempt in range(max_resamples + 1):
            pt = random_param_point(n, r, k, rng)
            rank = jacobian_rank_at(n, r, pattern, pt)
            if rank == expected or attempt == max_resamples:
                break
            resamples += 1
        ranks.append(rank)
    return {
        "n": n, "r": r, "k": k,
        "expected": expected,
        "upper_bound": len(param_names(n, r, k)),
        "ranks": ranks,
        "resamples": resamples,
        "ok": all(x == expected for x in ranks),
    }
