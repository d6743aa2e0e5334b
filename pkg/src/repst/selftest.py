"""The acceptance suite as deterministic, JSON-producing checks.

Each ``criterion_*`` function returns a plain dict with at least ``passed``.
Nothing time-dependent goes into the dicts; :func:`run_suite` reports wall
time separately so that two runs serialise to identical bytes.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Optional

from .algebras import (
    AlgebraObject,
    build_induced_algebra,
    certify_simple,
    check_axioms,
    counit_power,
    distinct_idempotent,
    subgroup_average,
)
from .diagrams import (
    Diagram,
    Morphism,
    _compose_diagrams,
    all_diagrams,
    closure_trace,
    compose,
    compose_cache_clear,
    frobenius_generators,
    identity,
    symmetry,
    tensor,
)
from .fiber import fiber_diagram, fiber_morphism, specialize_algebra
from .karoubi import level_search
from .scalars import T, falling_factorial, format_scalar, interpolate
from .symgroup import (
    alternating_group,
    coset_algebra,
    is_simple_equivariant,
    match_fiber_algebra,
    sign_multiplicity,
    subgroups_up_to_conjugacy,
    symmetric_group,
    verify_contains_times,
)

__all__ = ["CRITERIA", "run_criterion", "run_suite", "suite_json"]


def random_diagram(rng: random.Random, a: int, b: int) -> Diagram:
    size = a + b
    labels = [rng.randrange(size) for _ in range(size)] if size else []
    return Diagram(a, b, labels)


def _pair(n: int, rho: Diagram, pi: Diagram) -> dict:
    return {"n": n, "rho": [list(b) for b in rho.blocks], "pi": [list(b) for b in pi.blocks]}


# 1 -----------------------------------------------------------------------------------------

def criterion_1(seed: int = 0) -> dict:
    """Fiber functoriality of the t^d composition rule."""
    exhaustive = 0
    failures = []
    for n in (2, 3, 4):
        for a, b, c in product(range(3), repeat=3):
            lower = all_diagrams(a, b)
            upper = all_diagrams(b, c)
            fl = {p: fiber_diagram(p, n) for p in lower}
            fu = {r: fiber_diagram(r, n) for r in upper}
            for pi in lower:
                for rho in upper:
                    exhaustive += 1
                    lhs = fiber_morphism(compose(Morphism.from_diagram(rho), Morphism.from_diagram(pi)), n)
                    if lhs != fu[rho] @ fl[pi]:
                        failures.append(_pair(n, rho, pi))
    rng = random.Random(seed)
    for _ in range(500):
        a, b, c = (rng.randint(0, 3) for _ in range(3))
        pi, rho = random_diagram(rng, a, b), random_diagram(rng, b, c)
        lhs = fiber_morphism(compose(Morphism.from_diagram(rho), Morphism.from_diagram(pi)), 5)
        if lhs != fiber_diagram(rho, 5) @ fiber_diagram(pi, 5):
            failures.append(_pair(5, rho, pi))
    return {"passed": not failures, "exhaustive_pairs": exhaustive, "random_pairs": 500,
            "failures": failures[:5]}


# 2 -----------------------------------------------------------------------------------------

def frobenius_laws() -> dict[str, bool]:
    g = frobenius_generators()
    mu, eta, delta, eps = g["mu"], g["eta"], g["delta"], g["epsilon"]
    i1 = identity(1)
    return {
        "associativity": compose(mu, tensor(mu, i1)) == compose(mu, tensor(i1, mu)),
        "unit": compose(mu, tensor(eta, i1)) == i1 == compose(mu, tensor(i1, eta)),
        "commutativity": compose(mu, symmetry(1, 1)) == mu,
        "coassociativity": compose(tensor(delta, i1), delta) == compose(tensor(i1, delta), delta),
        "counit": compose(tensor(eps, i1), delta) == i1 == compose(tensor(i1, eps), delta),
        "cocommutativity": compose(symmetry(1, 1), delta) == delta,
        "frobenius": (compose(tensor(i1, mu), tensor(delta, i1)) == compose(delta, mu)
                      == compose(tensor(mu, i1), tensor(i1, delta))),
        "special": compose(mu, delta) == i1,
        "dimension_t": compose(eps, eta) == identity(0).scale(T),
    }


def criterion_2(seed: int = 0) -> dict:
    laws = frobenius_laws()
    return {"passed": all(laws.values()), "laws": laws}


# 3 -----------------------------------------------------------------------------------------

def criterion_3(seed: int = 0) -> dict:
    idem = {}
    for k in range(6):
        e = distinct_idempotent(k)
        loops = max((_compose_diagrams(x, y)[1] for x in e.terms for y in e.terms), default=0)
        ee = compose(e, e)
        idem[str(k)] = {"idempotent": ee == e, "t_free": ee.is_t_free() and loops == 0,
                        "terms": len(e)}
    # class representatives suffice: e_k commutes with every strand permutation
    commute = {}
    for k in range(1, 5):
        e = distinct_idempotent(k)
        ok = [compose(subgroup_average(H), e) == compose(e, subgroup_average(H))
              for H in subgroups_up_to_conjugacy(k)]
        commute[str(k)] = {"classes": len(ok), "all_commute": all(ok)}
    passed = all(v["idempotent"] and v["t_free"] for v in idem.values()) and all(
        v["all_commute"] for v in commute.values())
    return {"passed": passed, "idempotents": idem, "commutation": commute}


# 4 -----------------------------------------------------------------------------------------

def coset_count(n: int, k: int, order: int) -> int:
    return 0 if n < k else factorial(n) // (order * factorial(n - k))


def criterion_4(seed: int = 0) -> dict:
    rows = []
    for k in range(1, 5):
        for H in subgroups_up_to_conjugacy(k):
            f = compose(distinct_idempotent(k), subgroup_average(H))
            symbolic = closure_trace(f)
            expected = falling_factorial(k) * Fraction(1, H.order)
            fiber_dims = [fiber_morphism(f, n).trace() for n in range(k + 2)]
            counts = [coset_count(n, k, H.order) for n in range(k + 2)]
            interpolated = interpolate(list(enumerate(fiber_dims)), k)
            rows.append({
                "k": k, "order": H.order, "generators": H.generator_string(),
                "poly": format_scalar(symbolic),
                "matches_formula": symbolic == expected,
                "fiber_dims_match_counts": fiber_dims == counts,
                "interpolation_matches": interpolated == symbolic,
            })
    passed = all(r["matches_formula"] and r["fiber_dims_match_counts"] and r["interpolation_matches"]
                 for r in rows)
    return {"passed": passed, "cases": rows}


# 5 -----------------------------------------------------------------------------------------

def corrupted_controls() -> dict[str, bool]:
    """Each control must make exactly the targeted law fail."""
    A = build_induced_algebra(2, symmetric_group(2))
    k, f = A.k, A.idem
    # removing the all-in-one-block term leaves an associative product, so drop a merge term
    last = max(A.mult.terms, key=Diagram.sort_key)
    dropped = Morphism(2 * k, k, {d: c for d, c in A.mult.terms.items() if d != last})
    tau = compose(counit_power(k), f)
    lopsided = tensor(tau, f)  # x (x) y -> tau(x) y, associative with no two-sided unit, not commutative
    results = {}
    law = {r.name: r for r in check_axioms(AlgebraObject(A.carrier, dropped, A.unit), ("associativity",))}
    results["associativity"] = not law["associativity"].holds and law["associativity"].witness is not None
    law = {r.name: r for r in check_axioms(AlgebraObject(A.carrier, A.mult, A.unit.scale(2)), ("unit",))}
    results["unit"] = not law["left_unit"].holds and not law["right_unit"].holds
    law = {r.name: r for r in check_axioms(AlgebraObject(A.carrier, lopsided, A.unit), ("commutativity",))}
    results["commutativity"] = not law["commutativity"].holds
    return results


def criterion_5(seed: int = 0) -> dict:
    rows = []
    for k in range(1, 4):
        for H in subgroups_up_to_conjugacy(k):
            laws = check_axioms(build_induced_algebra(k, H))
            rows.append({"k": k, "order": H.order, "generators": H.generator_string(),
                         "laws": {r.name: r.holds for r in laws}})
    controls = corrupted_controls()
    passed = all(all(r["laws"].values()) for r in rows) and all(controls.values())
    return {"passed": passed, "cases": rows, "negative_controls_detected": controls}


# 6 -----------------------------------------------------------------------------------------

def criterion_6(seed: int = 0) -> dict:
    rows = []
    for k in range(1, 4):
        for H in subgroups_up_to_conjugacy(k):
            v = certify_simple(build_induced_algebra(k, H))
            rows.append({"k": k, "order": H.order, "generators": H.generator_string(),
                         "verdict": v.verdict, "connectedness": v.connectedness,
                         "pairing_det": format_scalar(v.pairing.det) if v.pairing else None,
                         "end_dim": v.pairing.end_dim if v.pairing else None})
    passed = all(r["verdict"] == "certified-simple" and r["connectedness"] == 1 for r in rows)
    return {"passed": passed, "cases": rows}


# 7 -----------------------------------------------------------------------------------------

def criterion_7(seed: int = 0) -> dict:
    rows = []
    for k in (1, 2):
        for H in subgroups_up_to_conjugacy(k):
            A = build_induced_algebra(k, H)
            for n in range(2 * k + 1, 7):
                fiber = specialize_algebra(A, n)
                iso = match_fiber_algebra(fiber, n, k, H, random.Random(seed))
                rows.append({"k": k, "order": H.order, "n": n, "dim": fiber.dim,
                             "expected_dim": coset_count(n, k, H.order), "matched": iso is not None})
    passed = all(r["matched"] and r["dim"] == r["expected_dim"] for r in rows)
    return {"passed": passed, "cases": rows}


# 8 -----------------------------------------------------------------------------------------

EXPECTED_CLASS_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 19}


def classification_table(n: int, seed: int = 0) -> list[dict]:
    rows = []
    for H in subgroups_up_to_conjugacy(n):
        rep = is_simple_equivariant(coset_algebra(n, H), random.Random(seed))
        rows.append({"order": H.order, "generators": H.generator_string(),
                     "index": factorial(n) // H.order, **rep.to_json()})
    return rows


def criterion_8(seed: int = 0) -> dict:
    counts, stable, all_simple = {}, True, True
    for n in range(1, 6):
        first = classification_table(n, seed)
        second = classification_table(n, seed)
        stable &= first == second
        all_simple &= all(r["simple"] and r["orbits"] == 1 and r["invariant_dim"] == 1 for r in first)
        counts[str(n)] = len(first)
    passed = stable and all_simple and counts == {str(k): v for k, v in EXPECTED_CLASS_COUNTS.items()}
    return {"passed": passed, "class_counts": counts, "stable": stable, "all_simple_both_deciders": all_simple}


# 9 -----------------------------------------------------------------------------------------

def criterion_9(seed: int = 0) -> dict:
    rows = []
    for k in range(3):
        for n in range(2 * k + 2, 8):
            rep = verify_contains_times(n, k)
            rows.append({"n": n, "k": k, "status": rep["status"], "overgroups": len(rep["cases"])})
    return {"passed": all(r["status"] == "pass" for r in rows), "cases": rows}


# 10 ----------------------------------------------------------------------------------------

def criterion_10(seed: int = 0) -> dict:
    inside = {}
    for n in range(1, 7):
        An = alternating_group(n)
        mults = [sign_multiplicity(n, H) for H in subgroups_up_to_conjugacy(n) if H <= An]
        inside[str(n)] = {"classes_in_alternating": len(mults), "min_multiplicity": min(mults)}
    point_stabiliser = {}
    for n in range(3, 9):
        point_stabiliser[str(n)] = sign_multiplicity(n, symmetric_group(n - 1, degree=n))
    passed = all(v["min_multiplicity"] >= 1 for v in inside.values()) and not any(point_stabiliser.values())
    return {"passed": passed, "alternating_subgroups": inside, "point_stabiliser": point_stabiliser}


# 11 ----------------------------------------------------------------------------------------

def criterion_11(seed: int = 0) -> dict:
    rows = []
    for k in (1, 2):
        for H in subgroups_up_to_conjugacy(k):
            rep = level_search(build_induced_algebra(k, H).carrier, seed)
            rows.append({"k": k, "order": H.order, "bound": rep.bound,
                         "retraction_certified": rep.retraction is not None,
                         "lower_levels_excluded": rep.certified_lower()})
    passed = all(r["bound"] == r["k"] and r["retraction_certified"] and r["lower_levels_excluded"] for r in rows)
    return {"passed": passed, "cases": rows}


# suite -------------------------------------------------------------------------------------

CRITERIA: dict[int, tuple[str, Callable[[int], dict]]] = {
    1: ("fiber functoriality of composition", criterion_1),
    2: ("Frobenius laws and dimension t", criterion_2),
    3: ("distinct-index idempotents and subgroup averages", criterion_3),
    4: ("dimension polynomials", criterion_4),
    5: ("algebra axioms with negative controls", criterion_5),
    6: ("simplicity certificates", criterion_6),
    7: ("fiber match with coset algebras", criterion_7),
    8: ("classification of simple algebras in Rep(S_n)", criterion_8),
    9: ("contains-times lemma", criterion_9),
    10: ("sign-representation obstruction", criterion_10),
    11: ("level of induced carriers", criterion_11),
}


def run_criterion(number: int, seed: int = 0) -> tuple[dict, float]:
    name, fn = CRITERIA[number]
    start = time.perf_counter()
    result = fn(seed)
    return {"criterion": number, "name": name, **result}, time.perf_counter() - start


def suite_json(results: list[dict]) -> str:
    return json.dumps(results, sort_keys=True, separators=(",", ":"))


def run_suite(seed: int = 0, jobs: int = 1, only: Optional[list[int]] = None,
              determinism: bool = True) -> tuple[list[dict], dict[int, float]]:
    """Run the criteria; criterion 12 reruns everything from a cold cache and compares bytes."""
    numbers = sorted(only or CRITERIA)

    def once() -> tuple[list[dict], dict[int, float]]:
        compose_cache_clear()
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                outcomes = list(pool.map(run_criterion, numbers, [seed] * len(numbers)))
        else:
            outcomes = [run_criterion(n, seed) for n in numbers]
        return [r for r, _ in outcomes], {r["criterion"]: dt for r, dt in outcomes}

    results, timings = once()
    if determinism:
        start = time.perf_counter()
        again, _ = once()
        same = suite_json(again) == suite_json(results)
        timings[12] = time.perf_counter() - start
        results.append({"criterion": 12, "name": "determinism of the suite output", "passed": same,
                        "compared_criteria": numbers})
    return results, timings
