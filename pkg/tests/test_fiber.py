import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from repst.algebras import build_induced_algebra, generating_algebra
from repst.diagrams import (
    Diagram,
    Morphism,
    all_diagrams,
    closure_trace,
    compose,
    frobenius_generators,
    identity,
    tensor,
)
from repst.errors import InconsistentData, LimitExceeded
from repst.fiber import (
    FiberMatrix,
    fiber_diagram,
    fiber_morphism,
    frobenius_functor,
    leg_permutation_matrix,
    pointwise_frobenius,
    specialize_algebra,
)
from repst.scalars import T, Poly, evaluate
from repst.selftest import random_diagram
from repst.symgroup import group_from_string, symmetric_group

G = frobenius_generators()
D = Diagram.from_blocks(1, 1, [[0], [1]])


def brute_fiber(pi: Diagram, n: int) -> np.ndarray:
    """Direct scan over all index assignments (the slow definition)."""
    a, b = pi.dom, pi.cod
    out = np.zeros((n**b, n**a), dtype=np.int64)
    for I in product(range(n), repeat=a):
        for J in product(range(n), repeat=b):
            legs = I + J
            if all(len({legs[p] for p in blk}) == 1 for blk in pi.blocks):
                col = sum(i * n ** (a - 1 - p) for p, i in enumerate(I))
                row = sum(j * n ** (b - 1 - p) for p, j in enumerate(J))
                out[row, col] = 1
    return out


def test_fiber_examples():
    for n in (1, 2, 4):
        assert np.array_equal(fiber_diagram(next(iter(identity(1).terms)), n).num, np.eye(n, dtype=np.int64))
        assert np.array_equal(fiber_diagram(D, n).num, np.ones((n, n), dtype=np.int64))
    three_j = FiberMatrix(3, 1, 1, 3 * np.ones((3, 3), dtype=np.int64))
    assert fiber_morphism(Morphism.from_diagram(D, T), 3) == three_j
    mu = fiber_diagram(next(iter(G["mu"].terms)), 3).num
    for i, j, l in product(range(3), repeat=3):
        assert mu[i, 3 * j + l] == (i == j == l)


@pytest.mark.parametrize("n", [2, 3])
def test_fiber_matches_brute_force_scan(n):
    for a in range(3):
        for b in range(3):
            for pi in all_diagrams(a, b):
                assert np.array_equal(fiber_diagram(pi, n).num, brute_fiber(pi, n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_functoriality_exhaustive(n):
    for a, b, c in product(range(3), repeat=3):
        for pi in all_diagrams(a, b):
            for rho in all_diagrams(b, c):
                lhs = fiber_morphism(compose(Morphism.from_diagram(rho), Morphism.from_diagram(pi)), n)
                assert lhs == fiber_diagram(rho, n) @ fiber_diagram(pi, n)


def test_functoriality_random():
    rng = random.Random(7)
    for _ in range(150):
        a, b, c = (rng.randint(0, 3) for _ in range(3))
        n = rng.randint(2, 5)
        pi, rho = random_diagram(rng, a, b), random_diagram(rng, b, c)
        lhs = fiber_morphism(compose(Morphism.from_diagram(rho), Morphism.from_diagram(pi)), n)
        assert lhs == fiber_diagram(rho, n) @ fiber_diagram(pi, n)


def diagrams(max_side=2):
    return st.tuples(st.integers(0, max_side), st.integers(0, max_side), st.randoms(use_true_random=False)).map(
        lambda x: random_diagram(x[2], x[0], x[1]))


@given(diagrams(), diagrams(), st.integers(1, 3))
def test_monoidality(f, g, n):
    F, Gm = Morphism.from_diagram(f), Morphism.from_diagram(g)
    assert fiber_morphism(tensor(F, Gm), n) == fiber_morphism(F, n).kron(fiber_morphism(Gm, n))


@given(diagrams(), st.integers(2, 4), st.randoms(use_true_random=False))
def test_equivariance(pi, n, rng):
    sigma = list(range(n))
    rng.shuffle(sigma)
    M = fiber_diagram(pi, n).num
    left = leg_permutation_matrix(tuple(sigma), n, pi.cod)
    right = leg_permutation_matrix(tuple(sigma), n, pi.dom)
    assert np.array_equal(left @ M, M @ right)


@given(st.integers(0, 2), st.lists(st.tuples(st.randoms(use_true_random=False),
                                            st.lists(st.integers(-3, 3), min_size=1, max_size=3)),
                                  min_size=1, max_size=4), st.integers(1, 4))
def test_trace_matches_closure(k, terms, n):
    f = Morphism.zero(k, k)
    for rng, coeffs in terms:
        f = f + Morphism.from_diagram(random_diagram(rng, k, k), Poly(coeffs))
    assert fiber_morphism(f, n).trace() == evaluate(closure_trace(f), n)


def test_rational_coefficients():
    F = fiber_morphism(identity(1).scale(Fraction(1, 3)), 2)
    assert F.den == 3 and F.entry(0, 0) == Fraction(1, 3)


def test_budget():
    with pytest.raises(LimitExceeded):
        fiber_morphism(identity(6), 11)


def test_json_triplets():
    data = fiber_morphism(identity(1).scale(Fraction(1, 2)), 2).to_json()
    assert data == {"rows": 2, "cols": 2, "entries": [[0, 0, "1/2"], [1, 1, "1/2"]]}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_frobenius_functor_agrees_with_fiber(n):
    T_n = pointwise_frobenius(n)
    for a in range(5):
        for b in range(5 - a):
            for pi in all_diagrams(a, b):
                got = np.array(frobenius_functor(T_n, pi), dtype=object).reshape(n**b, n**a)
                assert np.array_equal(got, fiber_diagram(pi, n).num.astype(object))


def test_frobenius_functor_dimension():
    # the closed loop eps o eta has value dim T
    T2 = pointwise_frobenius(2)
    cap = frobenius_functor(T2, Diagram(1, 0, [0]))
    cup = frobenius_functor(T2, Diagram(0, 1, [0]))
    assert sum(cap[0][i] * cup[i][0] for i in range(2)) == 2
    assert frobenius_functor(T2, Diagram(1, 1, [0, 0])) == [[1, 0], [0, 1]]


def test_frobenius_functor_is_functorial():
    rng = random.Random(3)
    T3 = pointwise_frobenius(3)
    for _ in range(40):
        a, b, c = (rng.randint(0, 2) for _ in range(3))
        pi, rho = random_diagram(rng, a, b), random_diagram(rng, b, c)
        comp = compose(Morphism.from_diagram(rho), Morphism.from_diagram(pi))
        lhs = np.zeros((3**c, 3**a), dtype=object)
        for dg, coeff in comp.items():
            lhs = lhs + evaluate(coeff, 3) * np.array(frobenius_functor(T3, dg), dtype=object).reshape(3**c, 3**a)
        rhs = (np.array(frobenius_functor(T3, rho), dtype=object).reshape(3**c, 3**b)
               @ np.array(frobenius_functor(T3, pi), dtype=object).reshape(3**b, 3**a))
        assert np.array_equal(lhs, rhs)


def test_specialize_examples():
    h3 = specialize_algebra(generating_algebra(), 3)
    assert h3.dim == 3 and not h3.check_laws()
    A = specialize_algebra(build_induced_algebra(2, group_from_string("()", 2)), 4)
    assert A.dim == 12 and not A.check_laws()
    B = specialize_algebra(build_induced_algebra(2, symmetric_group(2)), 5)
    assert B.dim == 10


def test_zero_carrier_is_reported():
    with pytest.raises(InconsistentData, match="zero"):
        specialize_algebra(build_induced_algebra(2, symmetric_group(2)), 1)
