"""Generic matrices, minor ideals and rigidity elimination ideals.

Matrix cells are named row-major: cell ``(i, j)`` of an ``n x n`` matrix is
``x{i*n + j + 1}``.  Pattern cells carry extra variables ``t1..tk`` assigned
in sorted position order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .errors import ArgumentError, PatternError, ResourceExceeded
from .groebner import Caps, Ideal, buchberger, eliminate
from .polyring import LEX, Polynomial, VarRegistry


@dataclass(frozen=True)
class Pattern:
    """A set of 0-based ``(row, col)`` positions inside an ``n x n`` matrix."""

    n: int
    positions: tuple = ()

    def __post_init__(self):
        pos = tuple(sorted({(int(i), int(j)) for i, j in self.positions}))
        for i, j in pos:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise PatternError(f"position {(i, j)} outside a {self.n}x{self.n} matrix")
        object.__setattr__(self, "positions", pos)

    def __len__(self):
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def __contains__(self, pos):
        return tuple(pos) in self.positions

    def __str__(self):
        return ";".join(f"{i},{j}" for i, j in self.positions)

    @classmethod
    def diagonal(cls, n):
        return cls(n, tuple((i, i) for i in range(n)))

    @classmethod
    def parse(cls, text: str, n: int) -> "Pattern":
        """Parse ``"i,j;i,j"``, ``"diag"`` or ``""`` (empty pattern)."""
        text = text.strip().strip('"').strip("'")
        if text == "":
            return cls(n, ())
        if text == "diag":
            return cls.diagonal(n)
        pos = []
        for chunk in text.split(";"):
            try:
                i, j = (int(s) for s in chunk.split(","))
            except ValueError:
                raise PatternError(f"bad pattern item {chunk!r}; expected 'i,j'") from None
            pos.append((i, j))
        if len(set(pos)) != len(pos):
            raise PatternError("pattern repeats a position")
        return cls(n, tuple(pos))

    def permuted(self, row_perm, col_perm) -> "Pattern":
        """Image under ``(i, j) -> (row_perm[i], col_perm[j])``."""
        return Pattern(self.n, tuple((row_perm[i], col_perm[j]) for i, j in self.positions))

    def to_json(self):
        return [list(p) for p in self.positions]


def all_patterns(n: int, k: int):
    """Patterns of size ``k``, lexicographic in their sorted position lists."""
    cells = [(i, j) for i in range(n) for j in range(n)]
    for combo in combinations(cells, k):
        yield Pattern(n, combo)


def x_name(n: int, i: int, j: int) -> str:
    return f"x{i * n + j + 1}"


def x_registry(n: int) -> VarRegistry:
    return VarRegistry(x_name(n, i, j) for i in range(n) for j in range(n))


@dataclass(frozen=True)
class MinorSpec:
    rows: tuple
    cols: tuple

    def __post_init__(self):
        if len(self.rows) != len(self.cols):
            raise ArgumentError("minor needs as many rows as columns")

    @property
    def size(self):
        return len(self.rows)


@dataclass(frozen=True)
class SymbolicRigidityMatrix:
    n: int
    pattern: Pattern
    registry: VarRegistry
    entries: tuple

    def t_name(self, pos) -> str:
        return f"t{self.pattern.positions.index(tuple(pos)) + 1}"

    @property
    def t_names(self):
        return [f"t{k + 1}" for k in range(len(self.pattern))]


def build_symbolic(n: int, pattern: Pattern) -> SymbolicRigidityMatrix:
    """The matrix X + T_pattern; t-variables come first in the registry."""
    if n < 1:
        raise ArgumentError("n must be positive")
    if pattern.n != n:
        raise PatternError(f"pattern is for {pattern.n}x{pattern.n}, not {n}x{n}")
    tnames = [f"t{k + 1}" for k in range(len(pattern))]
    reg = VarRegistry(tnames + list(x_registry(n).names))
    tpos = dict(zip(pattern.positions, tnames))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = Polynomial.var(reg, x_name(n, i, j))
            if (i, j) in tpos:
                e = e + Polynomial.var(reg, tpos[(i, j)])
            row.append(e)
        rows.append(tuple(row))
    return SymbolicRigidityMatrix(n, pattern, reg, tuple(rows))


def generic_matrix(n: int):
    """``(registry, entries)`` of the plain generic matrix X."""
    reg = x_registry(n)
    entries = tuple(tuple(Polynomial.var(reg, x_name(n, i, j)) for j in range(n)) for i in range(n))
    return reg, entries


def determinant(entries, rows=None, cols=None, registry=None):
    """Determinant of the (rows, cols) submatrix by cofactor expansion.

    Expands along the row with the most zero entries and memoizes
    sub-determinants.  The empty minor has determinant 1.
    """
    rows = tuple(range(len(entries))) if rows is None else tuple(rows)
    cols = tuple(range(len(entries[0]) if entries else 0)) if cols is None else tuple(cols)
    if registry is None:
        registry = entries[0][0].registry if entries else VarRegistry(())
    memo = {}

    def det(rs, cs):
        if not rs:
            return Polynomial.constant(registry, 1)
        if len(rs) == 1:
            return entries[rs[0]][cs[0]]
        hit = memo.get((rs, cs))
        if hit is not None:
            return hit
        pivot = max(rs, key=lambda r: sum(entries[r][c].is_zero() for c in cs))
        sub_rows = tuple(r for r in rs if r != pivot)
        sign0 = -1 if rs.index(pivot) % 2 else 1
        total = Polynomial.zero(registry)
        for k, c in enumerate(cs):
            e = entries[pivot][c]
            if e.is_zero():
                continue
            minor = det(sub_rows, cs[:k] + cs[k + 1:])
            term = e * minor
            total = total + term if (sign0 * (-1) ** k) > 0 else total - term
        memo[(rs, cs)] = total
        return total

    return det(rows, cols)


def minors(matrix, size: int) -> list:
    """All ``size x size`` minors, zero ones included, in lexicographic (rows, cols) order."""
    if isinstance(matrix, SymbolicRigidityMatrix):
        reg, entries = matrix.registry, matrix.entries
    else:
        reg, entries = matrix
    n = len(entries)
    if not 1 <= size <= n:
        raise ArgumentError(f"minor size {size} outside 1..{n}")
    return [determinant(entries, rs, cs, reg)
            for rs in combinations(range(n), size) for cs in combinations(range(n), size)]


def minors_ideal(matrix, size: int) -> Ideal:
    """Ideal generated by all ``size x size`` minors."""
    reg = matrix.registry if isinstance(matrix, SymbolicRigidityMatrix) else matrix[0]
    return Ideal(reg, tuple(minors(matrix, size)))


def _check_rank(n, r):
    if not 0 <= r < n:
        raise ArgumentError(f"target rank r={r} outside 0..{n - 1}")


def rigidity_ideal(n: int, r: int, pattern: Pattern) -> Ideal:
    """Ideal of the (r+1)-minors of X + T_pattern."""
    _check_rank(n, r)
    return minors_ideal(build_symbolic(n, pattern), r + 1)


def elimination_ideal_direct(n: int, r: int, pattern: Pattern, caps: Caps = None) -> Ideal:
    """Eliminate the t-variables from the rigidity ideal."""
    m = build_symbolic(n, pattern)
    _check_rank(n, r)
    ideal = minors_ideal(m, r + 1)
    return eliminate(ideal, m.t_names, caps)


@lru_cache(maxsize=4096)
def _reduced_cached(n, r, positions, caps):
    pattern = Pattern(n, positions)
    reg, entries = generic_matrix(n)
    ideal = minors_ideal((reg, entries), r + 1)
    drop = [x_name(n, i, j) for i, j in pattern.positions]
    ei = eliminate(ideal, drop, caps)
    return Ideal(reg, tuple(g.embed(reg, LEX) for g in ei.generators))


def elimination_ideal_reduced(n: int, r: int, pattern: Pattern, caps: Caps = None) -> Ideal:
    """Eliminate the pattern's x-variables from the generic (r+1)-minor ideal.

    The result is regarded as an ideal of the full x-registry.  It generates
    the same ideal as :func:`elimination_ideal_direct` and needs only n^2
    variables, so it is the path used everywhere downstream.
    """
    _check_rank(n, r)
    if pattern.n != n:
        raise PatternError(f"pattern is for {pattern.n}x{pattern.n}, not {n}x{n}")
    return _reduced_cached(n, r, pattern.positions, caps)


def crosscheck_prop14(n: int, r: int, pattern: Pattern, caps: Caps = None):
    """Compare the two elimination routes by their reduced lex bases.

    Returns True or False, or None when a route exceeds the resource caps.
    """
    try:
        direct = elimination_ideal_direct(n, r, pattern, caps)
        short = elimination_ideal_reduced(n, r, pattern, caps)
        a = buchberger(direct, LEX, caps)
        b = buchberger(short, LEX, caps)
    except ResourceExceeded:
        return None
    return a.basis == b.basis
