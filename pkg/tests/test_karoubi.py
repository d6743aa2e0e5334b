from itertools import permutations, product

import pytest

from repst.algebras import build_induced_algebra, distinct_idempotent
from repst.diagrams import Diagram, Morphism, compose, frobenius_generators, identity
from repst.errors import BoundaryMismatch, LimitExceeded
from repst.fiber import fiber_morphism
from repst.karoubi import (
    KObject,
    dimension_poly,
    hom_space,
    is_split_mono,
    level_search,
    level_upper_bound,
)
from repst.scalars import T, evaluate, interpolate
from repst.symgroup import subgroups_up_to_conjugacy

G = frobenius_generators()
h = KObject.power(1)
one = KObject.power(0)
E2 = KObject(2, distinct_idempotent(2))


def orbit_count_on_injection_pairs(n: int, k: int) -> int:
    """Brute-force number of S_n orbits on pairs of injections [k] -> [n]."""
    injections = list(permutations(range(n), k))
    seen = set()
    for x, y in product(injections, repeat=2):
        relabel = {}
        for v in x + y:
            relabel.setdefault(v, len(relabel))
        seen.add(tuple(relabel[v] for v in x + y))
    return len(seen)


def test_hom_space_examples():
    assert hom_space(h, h).dimension == 2
    assert hom_space(one, h).dimension == 1


def test_endomorphisms_of_distinct_pairs_match_orbit_count():
    dim = hom_space(E2, E2).dimension
    assert dim == orbit_count_on_injection_pairs(5, 2) == orbit_count_on_injection_pairs(6, 2) == 7


def test_dimension_poly_examples():
    assert dimension_poly(h) == T
    assert dimension_poly(E2) == T * T - T
    for k in range(4):
        assert dimension_poly(KObject.power(k)) == T**k
    pts = [(n, fiber_morphism(E2.idem, n).trace()) for n in range(5)]
    assert interpolate(pts, 2) == T * T - T


@pytest.mark.parametrize("k", [1, 2, 3])
def test_dimension_poly_is_fiber_trace(k):
    for H in subgroups_up_to_conjugacy(k):
        X = build_induced_algebra(k, H).carrier
        p = dimension_poly(X)
        for n in range(k + 2):
            assert evaluate(p, n) == fiber_morphism(X.idem, n).trace()


def test_split_mono_examples():
    assert is_split_mono(h.idem, h, h) == h.idem
    assert is_split_mono(E2.idem, E2, KObject.power(2)) == E2.idem
    v = is_split_mono(G["eta"], one, h)
    assert v == G["epsilon"].scale(1 / T)


def test_non_split_mono_returns_none():
    # epsilon is not split mono from h into the unit object
    assert is_split_mono(G["epsilon"], h, one) is None


def test_idempotent_check_and_boundaries():
    assert E2.is_idempotent()
    assert not KObject(1, identity(1).scale(2)).is_idempotent()
    with pytest.raises(BoundaryMismatch):
        KObject(2, identity(1))


def test_hom_limit():
    with pytest.raises(LimitExceeded):
        hom_space(KObject.power(5), KObject.power(5))


def test_level_examples():
    assert level_upper_bound(h) == 1
    assert level_upper_bound(one) == 0
    rep = level_search(build_induced_algebra(2, subgroups_up_to_conjugacy(2)[0]).carrier)
    assert rep.bound == 2 and rep.certified_lower()
    assert compose(rep.retraction, rep.embedding) == E2.idem


def test_level_of_rank_one_idempotent_is_zero():
    # the unit object sits inside h as (1/t) eta o epsilon
    X = KObject(1, compose(G["eta"], G["epsilon"]).scale(1 / T))
    rep = level_search(X)
    assert rep.bound == 0 and rep.retraction is not None


def test_json_roundtrip():
    assert KObject.from_json(E2.to_json()).idem == E2.idem
