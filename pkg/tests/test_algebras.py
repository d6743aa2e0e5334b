from fractions import Fraction
from itertools import product

import numpy as np
import pytest
import sympy

from repst.algebras import (
    AlgebraObject,
    build_induced_algebra,
    certify_simple,
    check_axioms,
    connectedness,
    distinct_idempotent,
    generating_algebra,
    pairing_nondegenerate,
    pairing_operator,
    pointwise_power_algebra,
    subgroup_average,
    trace_pairing,
)
from repst.diagrams import Diagram, Morphism, closure_trace, compose, frobenius_generators, identity
from repst.errors import LimitExceeded, NotASubgroup
from repst.fiber import fiber_morphism
from repst.karoubi import dimension_poly
from repst.scalars import T
from repst.selftest import corrupted_controls
from repst.symgroup import PermGroup, group_from_string, subgroups_up_to_conjugacy, symmetric_group

S2 = symmetric_group(2)
TRIV2 = group_from_string("()", 2)


def distinct_projection(n: int, k: int) -> np.ndarray:
    size = n**k
    diag = [1 if len(set(idx)) == k else 0 for idx in product(range(n), repeat=k)]
    return np.diag(diag).reshape(size, size)


def test_distinct_idempotent_examples():
    assert distinct_idempotent(1) == identity(1)
    M = Morphism.from_diagram(Diagram(2, 2, [0, 0, 0, 0]))
    assert distinct_idempotent(2) == identity(2) - M
    e3 = distinct_idempotent(3)
    coeffs = sorted(c for _, c in e3.items())
    assert coeffs == [-1, -1, -1, 1, 2]
    assert e3.coefficient(Diagram(3, 3, [0] * 6)) == 2


@pytest.mark.parametrize("k,n", [(1, 3), (2, 3), (2, 4), (3, 3), (3, 4)])
def test_distinct_idempotent_fiber_is_diagonal_projection(k, n):
    F = fiber_morphism(distinct_idempotent(k), n)
    assert F.den == 1
    assert np.array_equal(F.num.astype(np.int64), distinct_projection(n, k))


def test_distinct_idempotent_limit():
    with pytest.raises(LimitExceeded):
        distinct_idempotent(6)


@pytest.mark.parametrize("k", range(1, 5))
def test_subgroup_average_commutes_and_is_idempotent(k):
    e = distinct_idempotent(k)
    for H in subgroups_up_to_conjugacy(k):
        p = subgroup_average(H)
        assert compose(p, p) == p
        assert compose(p, e) == compose(e, p)


def test_induced_algebra_examples():
    h = build_induced_algebra(1, group_from_string("()", 1))
    g = frobenius_generators()
    assert h.idem == identity(1) and h.mult == g["mu"] and h.unit == g["eta"]
    assert dimension_poly(build_induced_algebra(2, TRIV2).carrier) == T * T - T
    assert dimension_poly(build_induced_algebra(2, S2).carrier) == (T * T - T) / 2


@pytest.mark.parametrize("k", range(1, 5))
def test_dimension_polynomials_for_every_subgroup(k):
    ff = T
    for i in range(1, k):
        ff = ff * (T - i)
    for H in subgroups_up_to_conjugacy(k):
        f = compose(distinct_idempotent(k), subgroup_average(H))
        assert closure_trace(f) == ff / H.order


def test_not_a_subgroup():
    with pytest.raises(NotASubgroup):
        build_induced_algebra(3, S2)
    bogus = PermGroup(2, [(1, 0)], elements=[(0, 1)])  # generator missing from the element list
    with pytest.raises(NotASubgroup):
        build_induced_algebra(2, bogus)


@pytest.mark.parametrize("algebra", [
    generating_algebra(),
    build_induced_algebra(2, TRIV2),
    build_induced_algebra(2, S2),
    pointwise_power_algebra(2),
], ids=["h", "k2-trivial", "k2-S2", "h-squared"])
def test_axioms_hold(algebra):
    laws = check_axioms(algebra)
    assert all(r.holds for r in laws), [r.to_json() for r in laws if not r.holds]


def test_corrupted_inputs_are_detected():
    assert corrupted_controls() == {"associativity": True, "unit": True, "commutativity": True}


def test_failure_witness_is_reported():
    A = build_induced_algebra(2, S2)
    law = check_axioms(AlgebraObject(A.carrier, A.mult, A.unit.scale(3)), ("unit",))[0]
    assert not law.holds and law.witness["lhs_minus_rhs"] != "0"


def test_connectedness_examples():
    assert connectedness(generating_algebra()) == 1
    assert connectedness(build_induced_algebra(2, TRIV2)) == 1
    assert connectedness(pointwise_power_algebra(2)) == 2


def test_pairing_of_h_is_identity():
    h = generating_algebra()
    assert pairing_operator(h) == identity(1)
    cert = pairing_nondegenerate(h)
    assert cert.nondegenerate and cert.inverse == identity(1)


def fiber_gram_det(A: AlgebraObject, n: int) -> Fraction:
    """Gram determinant of the trace pairing on an image basis of the fiber idempotent."""
    F = sympy.Matrix(fiber_morphism(A.idem, n).to_fractions())
    basis = F.columnspace()
    P = fiber_morphism(trace_pairing(A), n).to_fractions()[0]
    gram = sympy.zeros(len(basis))
    for i, v in enumerate(basis):
        for j, w in enumerate(basis):
            vw = [a * b for a in v for b in w]
            gram[i, j] = sum(p * x for p, x in zip(P, vw) if p)
    return gram.det()


def test_pairing_of_induced_algebra_is_nondegenerate():
    A = build_induced_algebra(2, S2)
    cert = pairing_nondegenerate(A)
    assert cert.nondegenerate and cert.det != 0
    assert compose(cert.operator, cert.inverse) == A.idem
    for n in (5, 6, 7):
        assert fiber_gram_det(A, n) != 0


def test_degenerate_pairing_control():
    A = build_induced_algebra(2, S2)
    Z = AlgebraObject(A.carrier, Morphism.zero(4, 2), A.unit)
    cert = pairing_nondegenerate(Z)
    assert not cert.nondegenerate and not cert.operator
    assert certify_simple(Z).verdict == "inconclusive"


@pytest.mark.parametrize("k", [1, 2, 3])
def test_induced_algebras_are_certified_simple(k):
    for H in subgroups_up_to_conjugacy(k):
        v = certify_simple(build_induced_algebra(k, H))
        assert v.verdict == "certified-simple" and v.connectedness == 1


def test_disconnected_algebra_is_certified_nonsimple():
    v = certify_simple(pointwise_power_algebra(2))
    assert v.verdict == "certified-nonsimple"
    assert v.fiber_witness["n"] == 5 and 0 < v.fiber_witness["ideal_dim"] < v.fiber_witness["fiber_dim"]


def test_json_roundtrip():
    A = build_induced_algebra(2, S2)
    B = AlgebraObject.from_json(A.to_json())
    assert B.idem == A.idem and B.mult == A.mult and B.unit == A.unit
    assert B.subgroup == A.subgroup
