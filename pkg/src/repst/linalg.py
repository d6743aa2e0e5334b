"""Exact linear algebra over Q(t).

Dense routines (``rank``, ``det``, ``solve``, ``solve_right_inverse``) clear
denominators row by row and run fraction-free Bareiss elimination over Q[t];
every division inside the elimination is exact.  :class:`SparseEchelon` is an
incremental variant on sparse vectors used to pick independent subsets of
morphisms without materialising dense matrices.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Mapping, Sequence

from .scalars import (
    Poly,
    RatFun,
    Scalar,
    _coeffs,
    _norm_poly,
    _pdivmod,
    _pgcd,
    _pmul,
    as_scalar,
    evaluate,
)

__all__ = [
    "Matrix",
    "SparseEchelon",
    "det",
    "identity_matrix",
    "rank",
    "rank_at_point",
    "solve",
    "solve_right_inverse",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Matrix:
    """Dense matrix of scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        self.entries = [[as_scalar(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else (cols or 0)
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for row in self.entries:
            new = []
            for j in range(other.cols):
                acc: Scalar = _ZERO
                for k, x in enumerate(row):
                    if x:
                        y = other.entries[k][j]
                        if y:
                            acc = acc + x * y
                new.append(acc)
            out.append(new)
        return Matrix(out, cols=other.cols)

    def transpose(self) -> "Matrix":
        return Matrix([list(col) for col in zip(*self.entries)], cols=self.rows)

    def evaluate(self, t0) -> "Matrix":
        return Matrix([[evaluate(x, t0) for x in row] for row in self.entries], cols=self.cols)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def identity_matrix(n: int) -> Matrix:
    return Matrix([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)], cols=n)


# polynomial helpers -----------------------------------------------------------

def _den(x: Scalar) -> tuple[Fraction, ...]:
    if isinstance(x, RatFun):
        return x.den.coeffs
    if isinstance(x, Poly):
        return (_ONE,)
    return (Fraction(x.denominator),)


def _plcm(a: tuple, b: tuple) -> tuple:
    if len(a) == 1 and len(b) == 1:
        return (Fraction(lcm(a[0].numerator, b[0].numerator)),)
    g = _pgcd(a, b)
    q, _ = _pdivmod(_pmul(a, b), g)
    return tuple(q)


def _clear_row(row: Sequence[Scalar]) -> list[Scalar]:
    """Scale a row by a common denominator so every entry lies in Q[t]."""
    m: tuple = (_ONE,)
    for x in row:
        if x:
            m = _plcm(m, _den(x))
    if m == (_ONE,):
        return list(row)
    mul = _norm_poly(m)
    return [as_scalar(x * mul) if x else _ZERO for x in row]


def _exact_div(a: Scalar, b: Scalar) -> Scalar:
    if not a:
        return _ZERO
    if not isinstance(b, Poly):
        return a / b if not isinstance(a, Poly) else as_scalar(a / b)
    q, r = _pdivmod(_coeffs(a), b.coeffs)
    if r:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return _norm_poly(q)


def _bareiss(m: list[list[Scalar]], ncols: int | None = None) -> tuple[list[int], int]:
    """In-place fraction-free echelon form on the first ``ncols`` columns.

    Returns the pivot columns and the sign of the row permutation.
    """
    rows = len(m)
    if rows == 0:
        return [], 1
    total = len(m[0])
    ncols = total if ncols is None else ncols
    prev: Scalar = _ONE
    r = 0
    sign = 1
    pivots: list[int] = []
    for col in range(ncols):
        if r == rows:
            break
        best = None
        for i in range(r, rows):
            x = m[i][col]
            if x:
                # prefer constant pivots to slow degree growth
                if best is None or (not isinstance(x, Poly) and isinstance(m[best][col], Poly)):
                    best = i
                    if not isinstance(x, Poly):
                        break
        if best is None:
            continue
        if best != r:
            m[r], m[best] = m[best], m[r]
            sign = -sign
        piv = m[r][col]
        prow = m[r]
        for i in range(r + 1, rows):
            row = m[i]
            lead = row[col]
            for j in range(col + 1, total):
                x = row[j]
                y = prow[j]
                if lead and y:
                    v = piv * x - lead * y if x else -(lead * y)
                elif x:
                    v = piv * x
                else:
                    continue
                row[j] = _exact_div(v, prev)
            row[col] = _ZERO
        prev = piv
        pivots.append(col)
        r += 1
    return pivots, sign


def rank(M: Matrix) -> int:
    """Rank over Q(t)."""
    work = [_clear_row(r) for r in M.entries]
    pivots, _ = _bareiss(work)
    return len(pivots)


def det(M: Matrix) -> Scalar:
    if M.rows != M.cols:
        raise ValueError(f"determinant of a non-square {M.rows}x{M.cols} matrix")
    if M.rows == 0:
        return _ONE
    scale: Scalar = _ONE
    work = []
    for row in M.entries:
        cleared = _clear_row(row)
        nz = next((j for j, x in enumerate(row) if x), None)
        if nz is not None and row[nz] != cleared[nz]:
            scale = scale * (cleared[nz] / row[nz])
        work.append(cleared)
    pivots, sign = _bareiss(work)
    if len(pivots) < M.rows:
        return _ZERO
    return as_scalar(sign * work[-1][-1] / scale)


def solve(A: Matrix, B: Matrix) -> Matrix | None:
    """Some X with A X = B over Q(t), or None when inconsistent."""
    if A.rows != B.rows:
        raise ValueError("row count mismatch")
    n, k = A.cols, B.cols
    work = [_clear_row(list(ra) + list(rb)) for ra, rb in zip(A.entries, B.entries)]
    pivots, _ = _bareiss(work, ncols=n)
    r = len(pivots)
    for i in range(r, A.rows):
        if any(work[i][n + j] for j in range(k)):
            return None
    X = [[_ZERO] * k for _ in range(n)]
    for i in range(r - 1, -1, -1):
        col = pivots[i]
        row = work[i]
        piv = row[col]
        for j in range(k):
            acc = row[n + j]
            for i2 in range(i + 1, r):
                c2 = pivots[i2]
                if row[c2] and X[c2][j]:
                    acc = acc - row[c2] * X[c2][j]
            X[col][j] = as_scalar(acc / piv) if acc else _ZERO
    return Matrix(X, cols=k)


def solve_right_inverse(M: Matrix) -> Matrix | None:
    """X with M X = I, if M has full row rank."""
    return solve(M, identity_matrix(M.rows))


def rank_at_point(M: Matrix, t0) -> int:
    return rank(M.evaluate(t0))


def random_rank_check(M: Matrix, rng: random.Random, points: int = 3) -> int:
    """Rank at ``points`` random rationals avoiding denominator roots; all must agree."""
    found = set()
    tries = 0
    while len(found) < points and tries < 50 * points:
        tries += 1
        t0 = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000))
        try:
            found.add((t0, rank_at_point(M, t0)))
        except ZeroDivisionError:
            continue
    ranks = {r for _, r in found}
    if len(ranks) != 1:
        raise ArithmeticError(f"rank disagrees across random points: {sorted(found)}")
    return ranks.pop()


# sparse incremental elimination ---------------------------------------------------

def _content_normalise(vec: dict) -> dict:
    """Divide out the Q[t]-content so entries stay small; pivot-free scaling."""
    vals = list(vec.values())
    if all(not isinstance(v, Poly) for v in vals):
        first = vals[0]
        return {k: v / first for k, v in vec.items()}
    g: tuple = ()
    for v in vals:
        g = _pgcd(g, _coeffs(v)) if g else _pgcd(_coeffs(v), ())
        if len(g) == 1:
            break
    return {k: _exact_div(v, _norm_poly(g)) for k, v in vec.items()}


def _order(k):
    return k.sort_key() if hasattr(k, "sort_key") else k


class SparseEchelon:
    """Fraction-free echelon basis of sparse vectors (dict key -> scalar) over Q(t)."""

    def __init__(self):
        self.rows: list[tuple[Hashable, dict]] = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: Mapping[Hashable, Scalar]) -> dict:
        v = {k: x for k, x in zip(vec.keys(), _clear_row(list(vec.values()))) if x}
        for key, row in self.rows:
            c = v.get(key)
            if not c:
                continue
            a = row[key]
            out = {}
            for k in v.keys() | row.keys():
                x = v.get(k, _ZERO)
                y = row.get(k, _ZERO)
                val = a * x - c * y if y else a * x
                if val:
                    out[k] = as_scalar(val)
            v = _content_normalise(out) if out else out
        return v

    def add(self, vec: Mapping[Hashable, Scalar]) -> bool:
        """Insert ``vec``; True when it was independent of the current rows."""
        v = self.reduce(vec)
        if not v:
            return False
        key = min(v, key=lambda k: (isinstance(v[k], Poly), _order(k)))
        self.rows.append((key, v))
        return True
