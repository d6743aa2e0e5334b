"""Objects of the idempotent completion as (tensor power, idempotent) pairs.

Homs between ``X = ([a], e)`` and ``Y = ([b], f)`` are the maps
``f o g o e`` with ``g`` ranging over all diagrams ``a -> b``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .config import LIMITS
from .diagrams import Diagram, Morphism, all_diagrams, closure_trace, compose, identity
from .errors import BoundaryMismatch, LimitExceeded
from .linalg import Matrix, SparseEchelon, solve
from .partitions import bell
from .scalars import Scalar

__all__ = [
    "HomSpace",
    "KObject",
    "LevelReport",
    "dimension_poly",
    "hom_space",
    "is_split_mono",
    "level_search",
    "level_upper_bound",
    "span_contains",
]


@dataclass(frozen=True, eq=False)
class KObject:
    ambient: int
    idem: Morphism

    def __post_init__(self):
        if self.idem.dom != self.ambient or self.idem.cod != self.ambient:
            raise BoundaryMismatch(f"idempotent must be an endomorphism of [{self.ambient}]")

    @classmethod
    def power(cls, k: int) -> "KObject":
        """The tensor power h^k with the identity idempotent."""
        return cls(k, identity(k))

    def is_idempotent(self) -> bool:
        return compose(self.idem, self.idem) == self.idem

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "idem": self.idem.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "KObject":
        return cls(int(data["ambient"]), Morphism.from_json(data["idem"]))


@dataclass
class HomSpace:
    source: KObject
    target: KObject
    basis: list[Morphism]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _check_hom_limit(a: int, b: int) -> None:
    if bell(a + b) > LIMITS.hom_basis:
        raise LimitExceeded(f"Bell({a + b}) = {bell(a + b)} exceeds hom-basis limit {LIMITS.hom_basis}")


def sandwich(Y: KObject, g: Morphism, X: KObject) -> Morphism:
    return compose(compose(Y.idem, g), X.idem)


def hom_space(X: KObject, Y: KObject) -> HomSpace:
    """Independent spanning set of Hom(X, Y) over Q(t)."""
    _check_hom_limit(X.ambient, Y.ambient)
    ech = SparseEchelon()
    basis: list[Morphism] = []
    for dg in all_diagrams(X.ambient, Y.ambient):
        m = sandwich(Y, Morphism.from_diagram(dg), X)
        if m and ech.add(m.terms):
            basis.append(m)
    return HomSpace(X, Y, basis)


def dimension_poly(X: KObject) -> Scalar:
    """Categorical dimension: the closed-loop trace of the idempotent."""
    return closure_trace(X.idem)


def coordinates_system(vectors: list[Morphism], target: Morphism) -> tuple[Matrix, Matrix]:
    """Dense system A c = b expressing ``target`` in terms of ``vectors`` (rows = diagrams)."""
    keys: set[Diagram] = set(target.terms)
    for v in vectors:
        keys |= v.terms.keys()
    order = sorted(keys, key=Diagram.sort_key)
    A = Matrix([[v.coefficient(k) for v in vectors] for k in order], cols=len(vectors))
    b = Matrix([[target.coefficient(k)] for k in order], cols=1)
    return A, b


def solve_combination(vectors: list[Morphism], target: Morphism) -> Optional[list[Scalar]]:
    """Coefficients c with sum c_i vectors[i] = target, or None."""
    if not vectors:
        return [] if not target else None
    A, b = coordinates_system(vectors, target)
    if A.rows == 0:
        return [Fraction(0)] * len(vectors)
    x = solve(A, b)
    return None if x is None else [row[0] for row in x.entries]


def linear_combination(coeffs: list[Scalar], vectors: list[Morphism], dom: int, cod: int) -> Morphism:
    out = Morphism.zero(dom, cod)
    for c, v in zip(coeffs, vectors):
        if c:
            out = out + v.scale(c)
    return out


def span_contains(vectors: list[Morphism], target: Morphism) -> bool:
    return solve_combination(vectors, target) is not None


def is_split_mono(u: Morphism, X: KObject, Y: KObject,
                  back: Optional[HomSpace] = None) -> Optional[Morphism]:
    """A retraction v in Hom(Y, X) with v o u = id_X, or None.  Always re-verified."""
    if back is None:
        back = hom_space(Y, X)
    products = [compose(v, u) for v in back.basis]
    coeffs = solve_combination(products, X.idem)
    if coeffs is None:
        return None
    v = linear_combination(coeffs, back.basis, Y.ambient, X.ambient)
    if compose(v, u) != X.idem:
        raise ArithmeticError("retraction certificate failed symbolic re-verification")
    return v


@dataclass
class LevelStep:
    ambient: int
    status: str  # "embeds", "excluded", "unresolved"
    detail: dict = field(default_factory=dict)


@dataclass
class LevelReport:
    bound: int
    steps: list[LevelStep]
    retraction: Optional[Morphism] = None
    embedding: Optional[Morphism] = None

    def certified_lower(self) -> bool:
        """True when every level below the bound was excluded by the exhaustive check."""
        return all(s.status == "excluded" for s in self.steps if s.ambient < self.bound)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "certified_exact": self.certified_lower(),
            "steps": [{"ambient": s.ambient, "status": s.status, **s.detail} for s in self.steps],
        }


def level_search(X: KObject, seed: int = 0, attempts: Optional[int] = None) -> LevelReport:
    """Least k' with a certified split mono X -> h^k'.

    Positive answers are certified by an explicit retraction.  Negative answers
    are certified only when id_X is outside the span of all composites
    X -> h^k' -> X (then X is not even a summand of a sum of copies of h^k');
    otherwise the level is reported as ``unresolved`` and the search moves on.
    """
    rng = random.Random(seed)
    attempts = LIMITS.embedding_attempts if attempts is None else attempts
    steps: list[LevelStep] = []
    for kp in range(X.ambient + 1):
        Y = KObject.power(kp)
        fwd = hom_space(X, Y)
        back = hom_space(Y, X)
        composites = [compose(v, u) for v in back.basis for u in fwd.basis]
        if not span_contains(composites, X.idem):
            steps.append(LevelStep(kp, "excluded", {"hom_dim": fwd.dimension}))
            continue
        for attempt in range(attempts + (kp == X.ambient)):
            if attempt == attempts:
                u = X.idem  # X is a summand of its own ambient power
            else:
                coeffs = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in fwd.basis]
                u = linear_combination(coeffs, fwd.basis, X.ambient, kp)
            v = is_split_mono(u, X, Y, back)
            if v is not None:
                steps.append(LevelStep(kp, "embeds", {"attempt": attempt}))
                return LevelReport(kp, steps, retraction=v, embedding=u)
        steps.append(LevelStep(kp, "unresolved", {"attempts": attempts}))
    raise AssertionError("identity embedding at the ambient level must split")


def level_upper_bound(X: KObject, seed: int = 0) -> int:
    return level_search(X, seed).bound
