"""Commutative algebra objects and the interpolated coset algebras.

The family attached to ``H <= S_k`` lives on the image of

    f = e_k o p_H

inside h^k, where ``e_k`` projects onto tensors with pairwise distinct
indices and ``p_H`` averages the strand permutations in ``H``.  At t = n its
fiber is the algebra of functions on injections [k] -> [n] modulo H, i.e. on
S_n/(H x S_{n-k}).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .config import LIMITS
from .diagrams import (
    Diagram,
    Morphism,
    compose,
    cup_cap,
    identity,
    one_block,
    permutation,
    symmetry,
    tensor,
)
from .errors import LimitExceeded, NotASubgroup
from .karoubi import KObject, hom_space, linear_combination, solve_combination
from .linalg import Matrix, det
from .partitions import enumerate_partitions, moebius
from .scalars import Scalar, format_scalar, scalar_to_json
from .symgroup import PermGroup, format_cycles, group_from_string

__all__ = [
    "AlgebraObject",
    "build_induced_algebra",
    "certify_simple",
    "check_axioms",
    "connectedness",
    "distinct_idempotent",
    "generating_algebra",
    "pairing_nondegenerate",
    "pointwise_power_algebra",
    "subgroup_average",
]

@dataclass(eq=False)
class AlgebraObject:
    carrier: KObject
    mult: Morphism
    unit: Morphism
    subgroup: Optional[PermGroup] = None

    @property
    def k(self) -> int:
        return self.carrier.ambient

    @property
    def idem(self) -> Morphism:
        return self.carrier.idem

    def to_json(self) -> dict:
        return {
            "ambient": self.k,
            "subgroup": None if self.subgroup is None else [format_cycles(g) for g in self.subgroup.generators],
            "idem": self.idem.to_json(),
            "mult": self.mult.to_json(),
            "unit": self.unit.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraObject":
        k = int(data["ambient"])
        sub = data.get("subgroup")
        group = None if sub is None else group_from_string(",".join(sub), k)
        return cls(KObject(k, Morphism.from_json(data["idem"])),
                   Morphism.from_json(data["mult"]), Morphism.from_json(data["unit"]), group)


def distinct_idempotent(k: int) -> Morphism:
    """e_k = sum over set partitions p of [k] of mu(p) * (diagram merging the strands of each block)."""
    if k > LIMITS.distinct:
        raise LimitExceeded(f"distinct-index idempotent capped at k = {LIMITS.distinct}")
    terms = {}
    for p in enumerate_partitions(k):
        terms[Diagram(k, k, p.labels + p.labels)] = Fraction(moebius(p))
    return Morphism(k, k, terms)


def subgroup_average(H: PermGroup) -> Morphism:
    """(1/|H|) sum of the strand permutation diagrams of H."""
    k = H.degree
    out = Morphism.zero(k, k)
    for h in H.elements:
        out = out + permutation(h)
    return out.scale(Fraction(1, H.order))


def strand_merge(k: int) -> Morphism:
    """2k -> k diagram with blocks {j, k+j, 2k+j}: pointwise product on each strand."""
    labels = list(range(k)) * 3
    return Morphism.from_diagram(Diagram(2 * k, k, labels))


def counit_power(k: int) -> Morphism:
    return Morphism.from_diagram(Diagram(k, 0, list(range(k))))


def unit_power(k: int) -> Morphism:
    return Morphism.from_diagram(Diagram(0, k, list(range(k))))


def _algebra_on(f: Morphism, k: int, subgroup: Optional[PermGroup] = None) -> AlgebraObject:
    mult = compose(compose(f, strand_merge(k)), tensor(f, f))
    unit = compose(f, unit_power(k))
    return AlgebraObject(KObject(k, f), mult, unit, subgroup)


def build_induced_algebra(k: int, H: PermGroup) -> AlgebraObject:
    if H.degree != k or not H.is_subgroup_of_sym():
        raise NotASubgroup(f"{H!r} is not a subgroup of S_{k}")
    f = compose(distinct_idempotent(k), subgroup_average(H))
    return _algebra_on(f, k, H)


def generating_algebra() -> AlgebraObject:
    """h with mu and eta."""
    return AlgebraObject(KObject.power(1), one_block(2, 1), one_block(0, 1))


def pointwise_power_algebra(k: int) -> AlgebraObject:
    """h^k with strandwise product; disconnected for k >= 2."""
    return _algebra_on(identity(k), k)


# axioms ----------------------------------------------------------------------------------

@dataclass
class LawResult:
    name: str
    holds: bool
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {"law": self.name, "holds": self.holds, "witness": self.witness}


def _witness(lhs: Morphism, rhs: Morphism) -> Optional[dict]:
    diff = lhs - rhs
    if not diff:
        return None
    dg, c = next(diff.items())
    return {"blocks": [list(b) for b in dg.blocks], "lhs_minus_rhs": format_scalar(c)}


def _law(name: str, lhs: Morphism, rhs: Morphism) -> LawResult:
    w = _witness(lhs, rhs)
    return LawResult(name, w is None, w)


def check_axioms(A: AlgebraObject, laws: tuple[str, ...] = ("idempotent", "structure", "associativity",
                                                              "unit", "commutativity")) -> list[LawResult]:
    """Exact symbolic checks of the algebra laws on the carrier."""
    f, m, u, k = A.idem, A.mult, A.unit, A.k
    out = []
    if "idempotent" in laws:
        out.append(_law("idempotent", compose(f, f), f))
    if "structure" in laws:
        out.append(_law("mult_on_carrier", compose(compose(f, m), tensor(f, f)), m))
        out.append(_law("unit_on_carrier", compose(f, u), u))
    if "associativity" in laws:
        lhs = compose(m, tensor(m, f))
        rhs = compose(m, tensor(f, m))
        out.append(_law("associativity", lhs, rhs))
    if "unit" in laws:
        out.append(_law("left_unit", compose(m, tensor(u, f)), f))
        out.append(_law("right_unit", compose(m, tensor(f, u)), f))
    if "commutativity" in laws:
        out.append(_law("commutativity", compose(m, symmetry(k, k)), m))
    return out


# simplicity certificates ----------------------------------------------------------------------

def connectedness(A: AlgebraObject) -> int:
    """dim Hom(1, A): rank over Q(t) of f o g for g in Hom(0, k)."""
    return hom_space(KObject.power(0), A.carrier).dimension


def invariants_basis(A: AlgebraObject) -> list[Morphism]:
    return hom_space(KObject.power(0), A.carrier).basis


def trace_pairing(A: AlgebraObject) -> Morphism:
    """The 2k -> 0 pairing (eps^k o f) o m."""
    tau = compose(counit_power(A.k), A.idem)
    return compose(tau, A.mult)


def pairing_operator(A: AlgebraObject) -> Morphism:
    """End(A) element y -> sum_x <y, x> x, bent around with one nested cup.

    The nested cup reverses leg order, so the freed legs are reversed back
    before projecting with the carrier idempotent.
    """
    k, f = A.k, A.idem
    P = trace_pairing(A)
    reverse = permutation([k - 1 - i for i in range(k)])
    bent = compose(tensor(P, reverse), tensor(identity(k), cup_cap(k, "cup")))
    return compose(compose(f, bent), f)


@dataclass
class PairingCertificate:
    nondegenerate: bool
    operator: Morphism
    det: Scalar
    end_dim: int
    inverse: Optional[Morphism] = None

    def to_json(self) -> dict:
        return {
            "nondegenerate": self.nondegenerate,
            "end_dim": self.end_dim,
            "det": format_scalar(self.det),
            "det_json": scalar_to_json(self.det),
            "inverse": None if self.inverse is None else self.inverse.to_json(),
        }


def pairing_nondegenerate(A: AlgebraObject) -> PairingCertificate:
    """Invertibility of the pairing operator inside End(A), with the inverse as certificate."""
    phi = pairing_operator(A)
    end = hom_space(A.carrier, A.carrier).basis
    columns = []
    for b in end:
        coeffs = solve_combination(end, compose(phi, b))
        if coeffs is None:
            raise ArithmeticError("pairing operator does not preserve End(A)")
        columns.append(coeffs)
    L = Matrix([[columns[j][i] for j in range(len(end))] for i in range(len(end))], cols=len(end))
    d = det(L) if end else Fraction(1)
    if not d:
        return PairingCertificate(False, phi, d, len(end))
    coeffs = solve_combination([compose(phi, b) for b in end], A.idem)
    if coeffs is None:
        raise ArithmeticError("nonzero determinant but no inverse found")
    inv = linear_combination(coeffs, end, A.k, A.k)
    if compose(phi, inv) != A.idem:
        raise ArithmeticError("pairing inverse failed symbolic re-verification")
    return PairingCertificate(True, phi, d, len(end), inv)


@dataclass
class SimplicityVerdict:
    verdict: str  # certified-simple, certified-nonsimple, inconclusive
    connectedness: int
    pairing: Optional[PairingCertificate]
    fiber_witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "connectedness": self.connectedness,
            "pairing": None if self.pairing is None else self.pairing.to_json(),
            "fiber_witness": self.fiber_witness,
        }


def certify_simple(A: AlgebraObject, witness_fiber: Optional[int] = None) -> SimplicityVerdict:
    """Connected with nondegenerate pairing => simple; disconnected => not simple."""
    conn = connectedness(A)
    if conn >= 2:
        from .fiber import specialize_algebra
        from .symgroup import is_simple_equivariant

        n = witness_fiber if witness_fiber is not None else 2 * A.k + 1
        fiber = specialize_algebra(A, n)
        report = is_simple_equivariant(fiber)
        if report.simple:
            raise AssertionError(f"disconnected algebra has a simple fiber at n = {n}")
        witness = {"n": n, "ideal_dim": len(report.witness or []), "fiber_dim": fiber.dim,
                   "invariant_dim": report.invariant_dim}
        return SimplicityVerdict("certified-nonsimple", conn, None, witness)
    pairing = pairing_nondegenerate(A)
    if conn == 1 and pairing.nondegenerate:
        return SimplicityVerdict("certified-simple", conn, pairing)
    return SimplicityVerdict("inconclusive", conn, pairing)
