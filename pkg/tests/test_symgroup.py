import random
from itertools import permutations
from math import factorial

import pytest

from repst.algebras import build_induced_algebra
from repst.errors import PreconditionError
from repst.fiber import specialize_algebra
from repst.symgroup import (
    PermGroup,
    _gset_isomorphism,
    alternating_group,
    conj,
    coset_algebra,
    cycle_type,
    direct_sum,
    format_cycles,
    group_from_string,
    idempotent_permutations,
    inverse,
    is_simple_equivariant,
    match_fiber_algebra,
    mul,
    parse_cycles,
    primitive_idempotents,
    product_with_tail,
    sign,
    sign_multiplicity,
    subgroups_up_to_conjugacy,
    symmetric_group,
    verify_contains_times,
)


def brute_force_classes(n: int) -> set[frozenset]:
    """All subgroups by repeatedly adjoining single elements; classes via minimal conjugate."""
    elems = list(permutations(range(n)))

    def close(gens):
        seen = {tuple(range(n))}
        frontier = list(seen)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = tuple(g[x[i]] for i in range(n))
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return frozenset(seen)

    found = {close([])}
    frontier = list(found)
    while frontier:
        new = []
        for H in frontier:
            for g in elems:
                if g not in H:
                    K = close(list(H) + [g])
                    if K not in found:
                        found.add(K)
                        new.append(K)
        frontier = new

    def canon(H):
        return min(tuple(sorted(conj(c, h) for h in H)) for c in elems)

    return {frozenset(canon(H)) for H in found}


def test_permutation_helpers():
    g = (1, 2, 0, 3)
    assert mul(g, inverse(g)) == (0, 1, 2, 3)
    assert cycle_type(g) == (3, 1) and sign(g) == 1
    assert parse_cycles("(0 1 2)", 4) == [g]
    assert format_cycles(g) == "(0 1 2)"
    assert parse_cycles("()", 3) == [] and parse_cycles("", 3) == []
    # right-to-left: (0 1) then (1 2) applied first
    assert parse_cycles("(0 1)(1 2)", 3) == [mul((1, 0, 2), (0, 2, 1))]
    with pytest.raises(ValueError):
        parse_cycles("(0 5)", 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_subgroup_classes_match_brute_force(n):
    ours = {frozenset(min(tuple(sorted(conj(c, h) for h in H.elements)) for c in permutations(range(n))))
            for H in subgroups_up_to_conjugacy(n)}
    classes = subgroups_up_to_conjugacy(n)
    assert len(ours) == len(classes)  # no two returned classes are conjugate
    assert ours == brute_force_classes(n)


def test_subgroup_class_counts():
    assert [len(subgroups_up_to_conjugacy(n)) for n in range(1, 6)] == [1, 2, 4, 11, 19]
    assert sorted(H.order for H in subgroups_up_to_conjugacy(3)) == [1, 2, 3, 6]


def test_coset_algebra_examples():
    assert coset_algebra(4, symmetric_group(4)).dim == 1
    C = coset_algebra(4, symmetric_group(3, degree=4))
    assert C.dim == 4 and not C.check_laws()
    assert coset_algebra(3, alternating_group(3)).dim == 2
    assert sign_multiplicity(3, alternating_group(3)) == 1


def test_point_stabiliser_algebra_is_permutation_module():
    # C[S_n/S_{n-1}] is C^n with the coordinate permutation action
    n = 4
    C = coset_algebra(n, symmetric_group(n - 1, degree=n))
    idems = primitive_idempotents(C)
    perms = idempotent_permutations(C, idems)
    gens = [list(g) for g in C.generators]
    assert _gset_isomorphism(n, perms, gens) is not None


def test_simplicity_examples():
    assert is_simple_equivariant(coset_algebra(4, symmetric_group(3, degree=4))).simple
    triv = coset_algebra(3, symmetric_group(3))
    rep = is_simple_equivariant(direct_sum(triv, triv))
    assert not rep.simple and len(rep.witness) == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_every_coset_algebra_is_simple_by_both_deciders(n):
    for H in subgroups_up_to_conjugacy(n):
        rep = is_simple_equivariant(coset_algebra(n, H), random.Random(0))
        assert rep.simple and rep.orbits == 1 and rep.invariant_dim == 1


@pytest.mark.parametrize("n", [3, 4])
def test_distinct_classes_give_non_isomorphic_algebras(n):
    actions = []
    for H in subgroups_up_to_conjugacy(n):
        C = coset_algebra(n, H)
        actions.append((C.dim, idempotent_permutations(C, primitive_idempotents(C))))
    for i, (d1, p1) in enumerate(actions):
        for d2, p2 in actions[i + 1:]:
            assert d1 != d2 or _gset_isomorphism(d1, p1, p2) is None


def test_non_simple_sums_are_rejected():
    a = coset_algebra(3, alternating_group(3))
    b = coset_algebra(3, symmetric_group(3))
    rep = is_simple_equivariant(direct_sum(a, b))
    assert not rep.simple and rep.orbits == 2


def test_contains_times_examples():
    rep = verify_contains_times(5, 1)
    assert rep["status"] == "pass"
    assert sorted(c["order"] for c in rep["cases"]) == [24, 120]
    assert sorted(c["k_prime"] for c in rep["cases"]) == [0, 1]
    assert verify_contains_times(6, 2)["status"] == "pass"
    # n = 4, k = 1 satisfies n > 2k + 1, so it runs
    assert verify_contains_times(4, 1)["status"] == "pass"
    with pytest.raises(PreconditionError):
        verify_contains_times(3, 1)
    with pytest.raises(PreconditionError):
        verify_contains_times(5, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_sign_multiplicity_matches_frobenius_reciprocity(n):
    # <Ind_H^G 1, sgn> = <1, sgn|_H>_H, which is 1 exactly when H lies in A_n
    An = alternating_group(n)
    for H in subgroups_up_to_conjugacy(n):
        assert sign_multiplicity(n, H) == (1 if H <= An else 0)


def test_sign_multiplicity_examples():
    for n in range(3, 9):
        assert sign_multiplicity(n, symmetric_group(n - 1, degree=n)) == 0
    for n in range(2, 8):
        assert sign_multiplicity(n, alternating_group(n)) == 1


def test_product_with_tail():
    H = group_from_string("(0 1)", 2)
    K = product_with_tail(H, 5)
    assert K.order == 2 * factorial(3)
    assert all(g[:2] in {(0, 1), (1, 0)} for g in K.elements)


def test_fiber_match_examples():
    triv1 = group_from_string("()", 1)
    assert match_fiber_algebra(specialize_algebra(build_induced_algebra(1, triv1), 4), 4, 1, triv1) is not None
    S2 = symmetric_group(2)
    assert match_fiber_algebra(specialize_algebra(build_induced_algebra(2, S2), 5), 5, 2, S2) is not None
    wrong = specialize_algebra(build_induced_algebra(2, group_from_string("()", 2)), 5)
    assert wrong.dim == 20
    assert match_fiber_algebra(wrong, 5, 2, S2) is None


def test_group_basics():
    S3 = symmetric_group(3)
    A3 = alternating_group(3)
    assert S3.order == 6 and A3.order == 3 and A3 <= S3
    assert A3.conjugate((1, 0, 2)) == A3
    assert PermGroup(3, [(1, 0, 2)]).is_subgroup_of_sym()
