"""Integer fibers: diagrams as 0/1 matrices on (Q^n)^{tensor a}, and algebra specialisation.

Multi-indices are ordered mixed radix with leg 0 most significant, so the
fiber of ``f.tensor(g)`` is ``numpy.kron`` of the fibers.  Matrices are kept
as an integer numerator array plus one common positive denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm
from typing import Optional, Sequence

import numpy as np

from .config import LIMITS
from .diagrams import Diagram, Morphism
from .errors import InconsistentData, LimitExceeded
from .scalars import evaluate
from .symgroup import EquivariantAlgebra, Perm, Vec, _QEchelon, standard_generators

__all__ = [
    "FiberMatrix",
    "fiber_diagram",
    "fiber_morphism",
    "frobenius_functor",
    "leg_permutation_matrix",
    "pointwise_frobenius",
    "specialize_algebra",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)
_INT_SAFE = 2**52


def _budget(n: int, legs: int) -> None:
    if n**legs > LIMITS.fiber_entries:
        raise LimitExceeded(f"fiber with n^{legs} = {n**legs} entries exceeds {LIMITS.fiber_entries}")


def _safe(arr: np.ndarray) -> np.ndarray:
    """Switch to Python ints before int64 could overflow."""
    if arr.dtype != object and arr.size and int(np.abs(arr).max()) > 2**31:
        return arr.astype(object)
    return arr


@dataclass(frozen=True, eq=False)
class FiberMatrix:
    """An n^cod x n^dom rational matrix stored as ``num / den``."""

    n: int
    dom_power: int
    cod_power: int
    num: np.ndarray
    den: int = 1

    def normalised(self) -> "FiberMatrix":
        if self.num.size == 0:
            return FiberMatrix(self.n, self.dom_power, self.cod_power, self.num, 1)
        g = reduce(gcd, (int(x) for x in np.unique(self.num)), self.den)
        if g > 1:
            return FiberMatrix(self.n, self.dom_power, self.cod_power, _safe(self.num // g), self.den // g)
        return self

    def __matmul__(self, other: "FiberMatrix") -> "FiberMatrix":
        if self.dom_power != other.cod_power or self.n != other.n:
            raise ValueError("fiber shapes do not compose")
        a, b = _safe(self.num), _safe(other.num)
        if a.dtype == object or b.dtype == object:
            a, b = a.astype(object), b.astype(object)
        return FiberMatrix(self.n, other.dom_power, self.cod_power, _safe(a @ b),
                           self.den * other.den).normalised()

    def kron(self, other: "FiberMatrix") -> "FiberMatrix":
        return FiberMatrix(self.n, self.dom_power + other.dom_power, self.cod_power + other.cod_power,
                           _safe(np.kron(self.num, other.num)), self.den * other.den).normalised()

    def __eq__(self, other):
        if not isinstance(other, FiberMatrix):
            return NotImplemented
        if (self.n, self.dom_power, self.cod_power) != (other.n, other.dom_power, other.cod_power):
            return False
        a = self.num.astype(object) * other.den
        b = other.num.astype(object) * self.den
        return bool(np.array_equal(a, b))

    __hash__ = None  # type: ignore[assignment]

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.num.astype(object))), self.den)

    def entry(self, row: int, col: int) -> Fraction:
        return Fraction(int(self.num[row, col]), self.den)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self.den) for x in row] for row in self.num]

    def to_json(self) -> dict:
        rows, cols = self.num.shape
        nz = np.argwhere(self.num != 0)
        return {
            "rows": int(rows),
            "cols": int(cols),
            "entries": [[int(r), int(c), str(Fraction(int(self.num[r, c]), self.den))] for r, c in nz],
        }


def _radix(n: int, legs: int) -> np.ndarray:
    return np.array([n ** (legs - 1 - i) for i in range(legs)], dtype=np.int64)


def fiber_diagram(pi: Diagram, n: int) -> FiberMatrix:
    """Entry (J, I) is 1 iff labelling domain legs by I and codomain legs by J is constant on blocks."""
    a, b = pi.dom, pi.cod
    _budget(n, a + b)
    mat = np.zeros((n**b, n**a), dtype=np.int64)
    nblocks = max(pi.labels) + 1 if pi.labels else 0
    if a + b == 0:
        mat[0, 0] = 1
        return FiberMatrix(n, a, b, mat)
    if n == 0:
        return FiberMatrix(n, a, b, mat)
    assign = np.array(list(product(range(n), repeat=nblocks)), dtype=np.int64).reshape(-1, nblocks)
    vals = assign[:, list(pi.labels)]
    cols = vals[:, :a] @ _radix(n, a) if a else np.zeros(len(vals), dtype=np.int64)
    rows = vals[:, a:] @ _radix(n, b) if b else np.zeros(len(vals), dtype=np.int64)
    mat[rows, cols] = 1
    return FiberMatrix(n, a, b, mat)


def fiber_morphism(f: Morphism, n: int) -> FiberMatrix:
    """Evaluate coefficients at t = n and sum the diagram fibers."""
    _budget(n, f.dom + f.cod)
    values = [(dg, evaluate(c, n)) for dg, c in f.items()]
    den = 1
    for _, v in values:
        den = lcm(den, v.denominator)
    acc = np.zeros((n**f.cod, n**f.dom), dtype=object)
    for dg, v in values:
        if v:
            acc = acc + fiber_diagram(dg, n).num * int(v * den)
    try:
        num = acc.astype(np.int64) if acc.size == 0 or int(np.abs(acc).max()) < _INT_SAFE else acc
    except OverflowError:
        num = acc
    return FiberMatrix(n, f.dom, f.cod, _safe(num), den).normalised()


def leg_permutation_matrix(sigma: Perm, n: int, legs: int) -> np.ndarray:
    """Integer matrix of e_{x_0..x_{k-1}} -> e_{sigma(x_0)..sigma(x_{k-1})}."""
    size = n**legs
    mat = np.zeros((size, size), dtype=np.int64)
    idx = np.array(list(product(range(n), repeat=legs)), dtype=np.int64).reshape(size, legs)
    image = np.array(sigma, dtype=np.int64)[idx] if legs else idx
    src = idx @ _radix(n, legs) if legs else np.zeros(size, dtype=np.int64)
    dst = image @ _radix(n, legs) if legs else np.zeros(size, dtype=np.int64)
    mat[dst, src] = 1
    return mat


# algebra specialisation ------------------------------------------------------------------

def _column(mat: FiberMatrix, j: int) -> Vec:
    col = mat.num[:, j]
    return {int(i): Fraction(int(col[i]), mat.den) for i in np.nonzero(col)[0]}


def _vec_to_int(v: Vec, size: int) -> tuple[np.ndarray, int]:
    den = 1
    for c in v.values():
        den = lcm(den, c.denominator)
    arr = np.zeros(size, dtype=np.int64)
    for i, c in v.items():
        arr[i] = int(c * den)
    return arr, den


def _int_to_vec(arr: np.ndarray, den: int) -> Vec:
    return {int(i): Fraction(int(arr[i]), den) for i in np.nonzero(arr)[0]}


class _Coordinates:
    """Coordinates in the span of given independent vectors, via an invertible row selection."""

    def __init__(self, basis: list[Vec]):
        self.dim = len(basis)
        self._ech = _QEchelon()
        for i, b in enumerate(basis):
            if not self._ech.add(b, {i: _ONE}):
                raise InconsistentData("coordinate basis is dependent")

    def __call__(self, v: Vec) -> Vec:
        rem, prov = self._ech.reduce(v, {})
        if rem:
            raise InconsistentData("vector lies outside the fiber image")
        return {i: -c for i, c in prov.items() if c}


def specialize_algebra(A, n: int) -> EquivariantAlgebra:
    """Fiber of an algebra object at t = n, as a Q-algebra with S_n action.

    Basis: independent columns of the fiber of the carrier idempotent.
    """
    k = A.carrier.ambient
    _budget(n, 3 * k)
    F = fiber_morphism(A.carrier.idem, n)
    M = fiber_morphism(A.mult, n)
    U = fiber_morphism(A.unit, n)
    size = n**k
    ech = _QEchelon()
    basis: list[Vec] = []
    for j in range(size):
        col = _column(F, j)
        if col and ech.add(col):
            basis.append(col)
    if not basis:
        raise InconsistentData(f"carrier fiber at n = {n} is zero")
    coords = _Coordinates(basis)
    ints = [_vec_to_int(b, size) for b in basis]
    d = len(basis)
    Mnum = M.num.astype(object) if M.num.dtype == object else M.num
    mult: dict[tuple[int, int], Vec] = {}
    for i in range(d):
        for j in range(i, d):
            (ai, di), (aj, dj) = ints[i], ints[j]
            prod = Mnum @ np.kron(ai, aj)
            v = coords(_int_to_vec(prod, M.den * di * dj))
            mult[(i, j)] = v
            mult[(j, i)] = v
    unit = coords(_column(U, 0))
    gens = standard_generators(n)
    action = []
    for s in gens:
        P = leg_permutation_matrix(s, n, k)
        act = {}
        for j in range(d):
            a, den = ints[j]
            act[j] = coords(_int_to_vec(P @ a, den))
        action.append(act)
    return EquivariantAlgebra(d, mult, unit, gens, action, labels=[f"col{j}" for j in range(d)])


# Frobenius-algebra functor -----------------------------------------------------------------

@dataclass
class FrobeniusData:
    """A commutative algebra with a counit whose pairing eps(xy) is nondegenerate."""

    algebra: EquivariantAlgebra
    counit: Vec


def pointwise_frobenius(n: int) -> FrobeniusData:
    """Q^n with pointwise product and counit summing coordinates."""
    mult = {(i, i): {i: _ONE} for i in range(n)}
    alg = EquivariantAlgebra(n, mult, {i: _ONE for i in range(n)}, standard_generators(n),
                             [], labels=list(range(n)))
    alg.action = [{j: {s[j]: _ONE} for j in range(n)} for s in alg.generators]
    return FrobeniusData(alg, {i: _ONE for i in range(n)})


def _matinv(m: list[list[Fraction]]) -> list[list[Fraction]]:
    size = len(m)
    aug = [list(row) + [_ONE if i == j else _ZERO for j in range(size)] for i, row in enumerate(m)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col]), None)
        if piv is None:
            raise InconsistentData("degenerate Frobenius form")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def _phi_tables(T: FrobeniusData, max_r: int, max_s: int) -> dict[tuple[int, int], dict]:
    """phi_{r,s}: T^r -> T -> T^s as dicts (out_multi, in_multi) -> value."""
    A = T.algebra
    d = A.dim
    gram = [[sum((T.counit.get(l, _ZERO) * c for l, c in A.product({i: _ONE}, {j: _ONE}).items()), _ZERO)
             for j in range(d)] for i in range(d)]
    ginv = _matinv(gram)
    # dual basis: b^i = sum_j ginv[j][i] b_j  (eps(b^i b_k) = delta)
    dual = [{j: ginv[j][i] for j in range(d) if ginv[j][i]} for i in range(d)]

    def mult_many(idx: tuple[int, ...]) -> Vec:
        acc = dict(A.unit)
        for i in idx:
            acc = A.product(acc, {i: _ONE})
        return acc

    def comult_many(x: Vec, s: int) -> dict[tuple[int, ...], Fraction]:
        if s == 0:
            return {(): sum((T.counit.get(l, _ZERO) * c for l, c in x.items()), _ZERO)}
        if s == 1:
            return {(l,): c for l, c in x.items()}
        # Delta(x) = sum_i x b^i (x) b_i, applied to the first leg repeatedly
        out: dict[tuple[int, ...], Fraction] = {}
        for i in range(d):
            left = A.product(x, dual[i])
            for rest, c in comult_many(left, s - 1).items():
                key = rest + (i,)
                out[key] = out.get(key, _ZERO) + c
        return {k: v for k, v in out.items() if v}

    tables = {}
    for r in range(max_r + 1):
        for s in range(max_s + 1):
            tab = {}
            for idx in product(range(d), repeat=r):
                for out_idx, c in comult_many(mult_many(idx), s).items():
                    if c:
                        tab[(out_idx, idx)] = c
            tables[(r, s)] = tab
    return tables


def frobenius_functor(T: FrobeniusData, pi: Diagram) -> list[list[Fraction]]:
    """Matrix of the image of ``pi`` under the functor determined by the Frobenius algebra T.

    Each block with r domain and s codomain points contributes phi_{r,s}; the
    entry for output multi-index J and input multi-index I is the product of
    the block factors evaluated on the legs of that block.
    """
    a, b = pi.dom, pi.cod
    d = T.algebra.dim
    _budget(d, a + b)
    blocks = pi.blocks
    dom_legs = [[p for p in blk if p < a] for blk in blocks]
    cod_legs = [[p - a for p in blk if p >= a] for blk in blocks]
    tables = _phi_tables(T, max((len(x) for x in dom_legs), default=0),
                         max((len(x) for x in cod_legs), default=0))
    out = [[_ZERO] * d**a for _ in range(d**b)]
    for I in product(range(d), repeat=a):
        col = sum(i * d ** (a - 1 - p) for p, i in enumerate(I))
        for J in product(range(d), repeat=b):
            val = _ONE
            for dl, cl in zip(dom_legs, cod_legs):
                key = (tuple(J[p] for p in cl), tuple(I[p] for p in dl))
                val *= tables[(len(dl), len(cl))].get(key, _ZERO)
                if not val:
                    break
            if val:
                row = sum(j * d ** (b - 1 - p) for p, j in enumerate(J))
                out[row][col] = val
    return out
