"""Exact linear algebra.

Systems with polynomial entries are solved over the fraction field Q(x) by
fraction-free Gauss-Jordan elimination: every division is exact, so no
rational functions are ever formed.  A solution comes back as polynomial
numerators over one common polynomial denominator.

Constant systems use sparse row reduction over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomial import NotDivisible, Poly


@dataclass
class PolySolution:
    """``x_j = numerators[j] / denominator`` solves the system over Q(x)."""

    numerators: list[Poly]
    denominator: Poly
    rank: int
    pivots: list[int]

    def is_polynomial(self) -> bool:
        return all(self.denominator.divides(p) for p in self.numerators)

    def polynomial_values(self) -> list[Poly]:
        return [p.divexact(self.denominator) for p in self.numerators]

    def denominator_vanishes_at(self, points) -> list:
        return [p for p in points if self.denominator.evaluate(p) == 0]


def _pivot_score(p: Poly):
    return (0 if p.is_constant() else 1, p.total_degree(), len(p))


def echelon(rows: Sequence[Sequence[Poly]], ncols: int, nvars: int):
    """Fraction-free Gauss-Jordan on ``rows`` restricted to the first ``ncols`` columns.

    Extra columns are carried along.  Returns ``(matrix, pivots, last_pivot)``;
    after reduction every pivot entry equals ``last_pivot`` and pivot columns are
    otherwise zero.
    """
    M = [list(r) for r in rows]
    m = len(M)
    width = len(M[0]) if M else ncols
    prev = Poly.one(nvars)
    pivots: list[int] = []
    pr = 0
    for col in range(ncols):
        if pr >= m:
            break
        best = None
        for i in range(pr, m):
            if M[i][col]:
                score = _pivot_score(M[i][col])
                if best is None or score < best[0]:
                    best = (score, i)
        if best is None:
            continue
        i0 = best[1]
        M[pr], M[i0] = M[i0], M[pr]
        prow = M[pr]
        p = prow[col]
        for i in range(m):
            if i == pr:
                continue
            row = M[i]
            a = row[col]
            if not a:
                if p != prev:
                    try:
                        M[i] = [(p * v).divexact(prev) if v else v for v in row]
                    except NotDivisible as exc:  # pragma: no cover - would be an elimination bug
                        raise ArithmeticError("fraction-free elimination lost exactness") from exc
                continue
            M[i] = [((p * row[j] - a * prow[j]).divexact(prev)) for j in range(width)]
        prev = p
        pivots.append(col)
        pr += 1
    return M, pivots, prev


def solve_over_fractions(rows: Sequence[Sequence[Poly]], rhs: Sequence[Poly], nvars: int) -> PolySolution | None:
    """Solve ``A x = b`` over Q(x1..xn); ``None`` when inconsistent.

    Free variables are set to zero.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not aug:
        return PolySolution([Poly.zero(nvars)] * ncols, Poly.one(nvars), 0, [])
    M, pivots, d = echelon(aug, ncols, nvars)
    for i in range(len(pivots), len(M)):
        if M[i][ncols]:
            return None
    nums = [Poly.zero(nvars)] * ncols
    for k, col in enumerate(pivots):
        nums[col] = M[k][ncols]
    return PolySolution(nums, d, len(pivots), pivots)


def rank_over_fractions(rows: Sequence[Sequence[Poly]], nvars: int) -> int:
    if not rows or not rows[0]:
        return 0
    _, pivots, _ = echelon(rows, len(rows[0]), nvars)
    return len(pivots)


def inverse_matrix(P: Sequence[Sequence[Poly]], nvars: int) -> tuple[list[list[Poly]], Poly] | None:
    """``(adjugate-like numerators, denominator)`` with ``P^{-1} = N / d``; ``None`` if singular."""
    k = len(P)
    if k == 0:
        return [], Poly.one(nvars)
    ident = [[Poly.const(nvars, 1 if i == j else 0) for j in range(k)] for i in range(k)]
    aug = [list(P[i]) + ident[i] for i in range(k)]
    M, pivots, d = echelon(aug, k, nvars)
    if len(pivots) < k:
        return None
    return [row[k:] for row in M], d


def rank_at(rows: Sequence[Sequence[Poly]], point) -> int:
    return rank_rational([[p.evaluate(point) for p in row] for row in rows])


def rank_rational(rows: Sequence[Sequence[Fraction]]) -> int:
    basis = SparseRowReducer()
    for row in rows:
        basis.add({j: Fraction(v) for j, v in enumerate(row) if v})
    return basis.rank


class SparseRowReducer:
    """Incremental reduced row echelon form over Q with dict rows.

    Pivot rows are kept fully reduced against each other and normalized to a
    leading 1.  ``order`` maps a column to its priority (lower pivots first).
    """

    def __init__(self, order=None):
        self.rows: dict[int, dict[int, Fraction]] = {}
        self.order = order or (lambda c: c)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        r = dict(row)
        for col in [c for c in r if c in self.rows]:
            f = r.get(col)
            if not f:
                continue
            for j, v in self.rows[col].items():
                s = r.get(j, 0) - f * v
                if s:
                    r[j] = s
                else:
                    r.pop(j, None)
        return r

    def add(self, row: dict[int, Fraction]) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        col = min(r, key=self.order)
        inv = 1 / r[col]
        r = {j: v * inv for j, v in r.items()}
        for prow in self.rows.values():
            f = prow.get(col)
            if f:
                for j, v in r.items():
                    s = prow.get(j, 0) - f * v
                    if s:
                        prow[j] = s
                    else:
                        prow.pop(j, None)
        self.rows[col] = r
        return True

    def nullspace(self, ncols: int) -> list[dict[int, Fraction]]:
        free = [c for c in range(ncols) if c not in self.rows]
        out = []
        for f in free:
            v = {f: Fraction(1)}
            for pcol, prow in self.rows.items():
                c = prow.get(f)
                if c:
                    v[pcol] = -c
            out.append(v)
        return out


def canonical_basis(vectors: Sequence[dict[int, Fraction]], order=None) -> list[dict[int, Fraction]]:
    """Reduced row echelon basis of the span of ``vectors`` (a canonical form)."""
    red = SparseRowReducer(order)
    for v in vectors:
        red.add(v)
    key = order or (lambda c: c)
    return [red.rows[c] for c in sorted(red.rows, key=key)]


def rational_nullspace(rows: Sequence[dict[int, Fraction]], ncols: int, order=None) -> list[dict[int, Fraction]]:
    red = SparseRowReducer()
    for row in rows:
        red.add(row)
    return canonical_basis(red.nullspace(ncols), order)


def solve_rational(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """A particular solution of a constant system, or ``None``."""
    ncols = len(rows[0]) if rows else 0
    red = SparseRowReducer()
    for row, b in zip(rows, rhs):
        d = {j: Fraction(v) for j, v in enumerate(row) if v}
        if b:
            d[ncols] = Fraction(b)
        red.add(d)
    if ncols in red.rows:
        return None
    x = [Fraction(0)] * ncols
    for col, row in red.rows.items():
        x[col] = row.get(ncols, Fraction(0))
    return x
