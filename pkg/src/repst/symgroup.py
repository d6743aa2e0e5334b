"""Permutation groups, subgroup classes of S_n, and coset algebras C[S_n/H].

Permutations are tuples of images on ``0..n-1``; products compose right to
left, ``mul(g, h)(i) == g[h[i]]``.
"""

from __future__ import annotations

import random
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Optional, Sequence

from .config import LIMITS
from .errors import (
    DeciderDisagreement,
    InconsistentData,
    LimitExceeded,
    NotASubgroup,
    PreconditionError,
)

__all__ = [
    "EquivariantAlgebra",
    "PermGroup",
    "SimplicityReport",
    "alternating_group",
    "coset_algebra",
    "format_cycles",
    "is_simple_equivariant",
    "match_fiber_algebra",
    "parse_cycles",
    "sign",
    "sign_multiplicity",
    "subgroups_up_to_conjugacy",
    "symmetric_group",
    "verify_contains_times",
]

Perm = tuple[int, ...]
Vec = dict[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


# permutations -------------------------------------------------------------------

def mul(g: Perm, h: Perm) -> Perm:
    return tuple(g[i] for i in h)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


def conj(c: Perm, g: Perm) -> Perm:
    """c g c^-1."""
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[c[i]] = c[j]
    return tuple(out)


def cycles(g: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(g)
    out = []
    for i in range(len(g)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = g[j]
            out.append(tuple(cyc))
    return out


def cycle_type(g: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(g)), reverse=True))


def sign(g: Perm) -> int:
    return -1 if sum(len(c) - 1 for c in cycles(g)) % 2 else 1


def parse_cycles(text: str, degree: int) -> list[Perm]:
    """Parse a comma separated generator list in cycle notation, e.g. ``"(0 1)(2 3),(0 2)"``.

    Empty text or ``"()"`` yields no generators (the trivial group).
    """
    gens = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk or chunk == "()":
            continue
        img = list(range(degree))
        if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\)\s*)+", chunk):
            raise ValueError(f"bad cycle notation: {chunk!r}")
        # cycles are applied right to left
        for body in reversed(re.findall(r"\(([^)]*)\)", chunk)):
            pts = [int(x) for x in body.split()]
            if len(set(pts)) != len(pts) or any(p >= degree for p in pts):
                raise ValueError(f"bad cycle ({body}) for degree {degree}")
            step = list(range(degree))
            for a, b in zip(pts, pts[1:] + pts[:1]):
                step[a] = b
            img = [step[i] for i in img]
        gens.append(tuple(img))
    return gens


def format_cycles(g: Perm) -> str:
    cyc = [c for c in cycles(g) if len(c) > 1]
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


# groups ---------------------------------------------------------------------------

class PermGroup:
    """Finite permutation group with its elements materialised."""

    __slots__ = ("degree", "generators", "elements", "_set", "_invariant")

    def __init__(self, degree: int, generators: Iterable[Perm], elements: Optional[Iterable[Perm]] = None):
        self.degree = degree
        ident = tuple(range(degree))
        self.generators = tuple(g for g in generators if g != ident)
        for g in self.generators:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError(f"{g} is not a permutation of degree {degree}")
        if elements is None:
            elements = _closure(degree, self.generators)
        self.elements = tuple(sorted(elements))
        self._set = frozenset(self.elements)
        self._invariant = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self._set

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self._set == other._set

    def __hash__(self):
        return hash((self.degree, self._set))

    def __le__(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self._set <= other._set

    @property
    def element_set(self) -> frozenset:
        return self._set

    def invariant(self) -> tuple:
        """Conjugation invariant: order and multiset of cycle types."""
        if self._invariant is None:
            types = Counter(cycle_type(g) for g in self.elements)
            self._invariant = (self.order, tuple(sorted(types.items())))
        return self._invariant

    def conjugate(self, c: Perm) -> "PermGroup":
        return PermGroup(self.degree, [conj(c, g) for g in self.generators],
                         [conj(c, g) for g in self.elements])

    def is_subgroup_of_sym(self) -> bool:
        ident = tuple(range(self.degree))
        if ident not in self._set:
            return False
        return all(mul(g, h) in self._set for g in self.generators for h in self.elements)

    def generator_string(self) -> str:
        return ",".join(format_cycles(g) for g in self.generators) or "()"

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order}, gens={self.generator_string()})"


def _closure(degree: int, gens: Sequence[Perm]) -> set[Perm]:
    ident = tuple(range(degree))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = mul(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def group_from_string(text: str, degree: int) -> PermGroup:
    return PermGroup(degree, parse_cycles(text, degree))


def symmetric_group(n: int, points: Optional[Sequence[int]] = None, degree: Optional[int] = None) -> PermGroup:
    """Sym(points) inside S_degree (defaults: all points of S_n)."""
    degree = n if degree is None else degree
    pts = list(range(n)) if points is None else list(points)
    gens = []
    for a, b in zip(pts, pts[1:]):
        g = list(range(degree))
        g[a], g[b] = b, a
        gens.append(tuple(g))
    return PermGroup(degree, gens)


def alternating_group(n: int) -> PermGroup:
    elems = [g for g in permutations(range(n)) if sign(g) == 1]
    gens = []
    for i in range(n - 2):
        g = list(range(n))
        g[i], g[i + 1], g[i + 2] = g[i + 1], g[i + 2], g[i]
        gens.append(tuple(g))
    return PermGroup(n, gens, elems)


def embed(H: PermGroup, degree: int, offset: int = 0) -> PermGroup:
    """H acting on points offset..offset+H.degree-1 of a larger set."""
    def lift(g: Perm) -> Perm:
        out = list(range(degree))
        for i, j in enumerate(g):
            out[offset + i] = offset + j
        return tuple(out)
    return PermGroup(degree, [lift(g) for g in H.generators], [lift(g) for g in H.elements])


def product_with_tail(H: PermGroup, n: int) -> PermGroup:
    """H x S_{n-k}: H on the first k points, the full symmetric group on the rest."""
    k = H.degree
    if n < k:
        raise PreconditionError(f"n = {n} < k = {k}")
    tail = symmetric_group(n - k, range(k, n), degree=n)
    head = embed(H, n)
    elems = {mul(a, b) for a in head.elements for b in tail.elements}
    return PermGroup(n, head.generators + tail.generators, elems)


def standard_generators(n: int) -> list[Perm]:
    """(0 1) and the n-cycle (0 1 ... n-1); they generate S_n."""
    if n < 2:
        return []
    swap = list(range(n))
    swap[0], swap[1] = 1, 0
    gens = [tuple(swap)]
    if n > 2:
        gens.append(tuple((i + 1) % n for i in range(n)))
    return gens


# conjugacy and subgroup enumeration ------------------------------------------------

def find_conjugator(H: PermGroup, K: PermGroup) -> Optional[Perm]:
    """Some c with c H c^-1 = K, or None."""
    if H.degree != K.degree or H.invariant() != K.invariant():
        return None
    for c in permutations(range(H.degree)):
        if all(conj(c, g) in K for g in H.generators):
            return c
    return None


def subgroups_up_to_conjugacy(n: int) -> list[PermGroup]:
    """One representative per conjugacy class of subgroups of S_n.

    Cyclic extension: every subgroup K is <M, g> for a maximal subgroup M of K,
    and conjugating M to its class representative shows that extending the
    representatives by single elements reaches every class.
    """
    if n > LIMITS.subgroup_degree:
        raise LimitExceeded(f"subgroup enumeration capped at degree {LIMITS.subgroup_degree}")
    all_elems = list(permutations(range(n)))
    reps: list[PermGroup] = [PermGroup(n, [])]
    by_invariant: dict[tuple, list[int]] = {reps[0].invariant(): [0]}
    seen: set[frozenset] = {reps[0].element_set}
    frontier = [reps[0]]
    while frontier:
        nxt = []
        for H in frontier:
            covered = set(H.element_set)
            for g in all_elems:
                if g in covered:
                    continue
                # <H, g> only depends on the coset gH
                covered.update(mul(g, h) for h in H.elements)
                elems = _closure(n, H.generators + (g,))
                key = frozenset(elems)
                if key in seen:
                    continue
                seen.add(key)
                K = PermGroup(n, H.generators + (g,), elems)
                bucket = by_invariant.setdefault(K.invariant(), [])
                if any(find_conjugator(K, reps[i]) is not None for i in bucket):
                    continue
                bucket.append(len(reps))
                reps.append(K)
                nxt.append(K)
        frontier = nxt
    reps.sort(key=lambda G: (G.order, G.invariant(), G.elements))
    return reps


def subgroups_containing(base: PermGroup) -> list[PermGroup]:
    """Every subgroup of S_degree that contains ``base`` (not up to conjugacy)."""
    n = base.degree
    if n > LIMITS.overgroup_degree:
        raise LimitExceeded(f"overgroup search capped at degree {LIMITS.overgroup_degree}")
    everything = list(permutations(range(n)))
    found = {base.element_set: base}
    queue = deque([base])
    while queue:
        H = queue.popleft()
        covered = set(H.element_set)
        for g in everything:
            if g in covered:
                continue
            # <H, g> only depends on the coset gH
            covered.update(mul(g, h) for h in H.elements)
            elems = _closure(n, H.generators + (g,))
            key = frozenset(elems)
            if key not in found:
                K = PermGroup(n, H.generators + (g,), elems)
                found[key] = K
                queue.append(K)
    return sorted(found.values(), key=lambda G: (G.order, G.elements))


# equivariant algebras ----------------------------------------------------------------

@dataclass
class EquivariantAlgebra:
    """Commutative algebra over Q with a group acting by algebra automorphisms.

    ``mult[(i, j)]`` holds the product of basis elements i and j as a sparse
    vector; ``action[g][j]`` is the image of basis element j under generator g.
    """

    dim: int
    mult: dict[tuple[int, int], Vec]
    unit: Vec
    generators: list[Perm]
    action: list[dict[int, Vec]]
    labels: list = field(default_factory=list)

    # vector helpers
    def product(self, x: Vec, y: Vec) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                for l, c in self.mult.get((i, j), {}).items():
                    out[l] = out.get(l, _ZERO) + a * b * c
        return {k: v for k, v in out.items() if v}

    def act(self, g: int, x: Vec) -> Vec:
        out: Vec = {}
        for j, a in x.items():
            for i, c in self.action[g].get(j, {}).items():
                out[i] = out.get(i, _ZERO) + a * c
        return {k: v for k, v in out.items() if v}

    def basis_vector(self, i: int) -> Vec:
        return {i: _ONE}

    def check_laws(self) -> list[str]:
        """Names of violated laws (commutativity, associativity, unit, automorphism)."""
        bad = []
        b = [self.basis_vector(i) for i in range(self.dim)]
        if any(self.product(b[i], b[j]) != self.product(b[j], b[i])
               for i in range(self.dim) for j in range(i)):
            bad.append("commutativity")
        if any(self.product(self.product(b[i], b[j]), b[l]) != self.product(b[i], self.product(b[j], b[l]))
               for i in range(self.dim) for j in range(self.dim) for l in range(self.dim)):
            bad.append("associativity")
        if any(self.product(self.unit, b[i]) != b[i] for i in range(self.dim)):
            bad.append("unit")
        for g in range(len(self.generators)):
            if any(self.act(g, self.product(b[i], b[j])) != self.product(self.act(g, b[i]), self.act(g, b[j]))
                   for i in range(self.dim) for j in range(self.dim)):
                bad.append(f"automorphism[{g}]")
        return bad

    def to_json(self) -> dict:
        def vec(v: Vec):
            return [[i, str(c)] for i, c in sorted(v.items())]
        return {
            "dim": self.dim,
            "labels": [str(x) for x in self.labels],
            "generators": [format_cycles(g) for g in self.generators],
            "unit": vec(self.unit),
            "mult": [[i, j, vec(v)] for (i, j), v in sorted(self.mult.items())],
            "action": [[[j, vec(v)] for j, v in sorted(a.items())] for a in self.action],
        }


def coset_algebra(n: int, H: PermGroup) -> EquivariantAlgebra:
    """Functions on left cosets S_n/H: indicator basis, pointwise product, left translation."""
    if H.degree != n or not H.is_subgroup_of_sym():
        raise NotASubgroup(f"{H!r} is not a subgroup of S_{n}")
    index = factorial(n) // H.order
    if index > LIMITS.algebra_dim:
        raise LimitExceeded(f"coset algebra of dimension {index} > {LIMITS.algebra_dim}")
    rep_of: dict[Perm, Perm] = {}
    reps: list[Perm] = []
    for g in permutations(range(n)):
        if g in rep_of:
            continue
        coset = [mul(g, h) for h in H.elements]
        r = min(coset)
        for x in coset:
            rep_of[x] = r
        reps.append(r)
    reps.sort()
    pos = {r: i for i, r in enumerate(reps)}
    gens = standard_generators(n)
    action = [{j: {pos[rep_of[mul(s, r)]]: _ONE} for j, r in enumerate(reps)} for s in gens]
    mult = {(i, i): {i: _ONE} for i in range(index)}
    unit = {i: _ONE for i in range(index)}
    return EquivariantAlgebra(index, mult, unit, gens, action, labels=[format_cycles(r) for r in reps])


def direct_sum(A: EquivariantAlgebra, B: EquivariantAlgebra) -> EquivariantAlgebra:
    if A.generators != B.generators:
        raise InconsistentData("direct sum needs the same generator list on both sides")
    off = A.dim

    def shift(v: Vec) -> Vec:
        return {i + off: c for i, c in v.items()}

    mult = dict(A.mult)
    mult.update({(i + off, j + off): shift(v) for (i, j), v in B.mult.items()})
    unit = dict(A.unit)
    unit.update(shift(B.unit))
    action = []
    for ga, gb in zip(A.action, B.action):
        act = dict(ga)
        act.update({j + off: shift(v) for j, v in gb.items()})
        action.append(act)
    return EquivariantAlgebra(A.dim + B.dim, mult, unit, list(A.generators), action,
                              labels=list(A.labels) + list(B.labels))


# exact linear algebra over Q on sparse vectors ---------------------------------------------

class _QEchelon:
    """Reduced echelon basis over Q, with the combination that produced each row."""

    def __init__(self):
        self.rows: list[tuple[int, Vec, Vec]] = []  # pivot, row, provenance

    def reduce(self, v: Vec, prov: Optional[Vec] = None) -> tuple[Vec, Vec]:
        v = dict(v)
        prov = dict(prov or {})
        for p, row, rprov in self.rows:
            c = v.get(p)
            if c:
                for k, x in row.items():
                    val = v.get(k, _ZERO) - c * x
                    if val:
                        v[k] = val
                    else:
                        v.pop(k, None)
                for k, x in rprov.items():
                    val = prov.get(k, _ZERO) - c * x
                    if val:
                        prov[k] = val
                    else:
                        prov.pop(k, None)
        return v, prov

    def add(self, v: Vec, prov: Optional[Vec] = None) -> bool:
        v, prov = self.reduce(v, prov)
        if not v:
            return False
        p = min(v)
        c = v[p]
        self.rows.append((p, {k: x / c for k, x in v.items()}, {k: x / c for k, x in prov.items()}))
        return True

    def __len__(self):
        return len(self.rows)


def _rank(vectors: Iterable[Vec]) -> int:
    ech = _QEchelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def _express(vectors: list[Vec], target: Vec) -> Optional[list[Fraction]]:
    """Coefficients c with sum c_i vectors[i] = target."""
    ech = _QEchelon()
    for i, v in enumerate(vectors):
        ech.add(v, {i: _ONE})
    rem, prov = ech.reduce(target, {})
    if rem:
        return None
    return [-prov.get(i, _ZERO) for i in range(len(vectors))]


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """Distinct rational roots of a polynomial given by ascending coefficients."""
    from sympy import Poly as SymPoly, Rational, Symbol

    x = Symbol("x")
    p = SymPoly([Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    return sorted(Fraction(int(r.p), int(r.q)) for r in p.ground_roots())


def _scale(v: Vec, c: Fraction) -> Vec:
    return {k: x * c for k, x in v.items()} if c else {}


def _add(v: Vec, w: Vec) -> Vec:
    out = dict(v)
    for k, x in w.items():
        val = out.get(k, _ZERO) + x
        if val:
            out[k] = val
        else:
            out.pop(k, None)
    return out


def _basis_is_idempotent_frame(A: EquivariantAlgebra) -> bool:
    if A.unit != {i: _ONE for i in range(A.dim)}:
        return False
    for i in range(A.dim):
        for j in range(A.dim):
            want = {i: _ONE} if i == j else {}
            if A.mult.get((i, j), {}) != want:
                return False
    return True


def split_idempotents(A: EquivariantAlgebra, start: Vec, space: Optional[list[Vec]] = None,
                      rng: Optional[random.Random] = None, max_tries: int = 40) -> list[Vec]:
    """Split ``start`` into primitive idempotents of the subalgebra spanned by ``space``.

    ``space`` defaults to the whole algebra.  Splitting uses the minimal
    polynomial of e*x for random x; its roots must be rational and simple,
    which holds for algebras isomorphic to a product of copies of Q.
    """
    rng = rng or random.Random(0)
    space = space if space is not None else [A.basis_vector(i) for i in range(A.dim)]
    done: list[Vec] = []
    work = [start]
    while work:
        e = work.pop()
        local = [A.product(e, b) for b in space]
        if _rank(local) <= 1:
            done.append(e)
            continue
        for _ in range(max_tries):
            x: Vec = {}
            for b in space:
                x = _add(x, _scale(b, Fraction(rng.randint(-9, 9))))
            y = A.product(e, x)
            powers = [e]
            while True:
                nxt = A.product(powers[-1], y)
                coeffs = _express(powers, nxt)
                if coeffs is not None:
                    break
                powers.append(nxt)
            if len(powers) > 1:
                break
        else:
            raise InconsistentData("could not find a splitting element")
        minpoly = [-c for c in coeffs] + [_ONE]
        roots = _rational_roots(minpoly)
        if len(roots) != len(powers):
            raise InconsistentData("algebra is not split semisimple over Q")
        for i, r in enumerate(roots):
            piece = e
            for j, s in enumerate(roots):
                if j != i:
                    piece = _scale(A.product(piece, _add(y, _scale(e, -s))), 1 / (r - s))
            work.append(piece)
    return sorted(done, key=lambda v: sorted(v.items()))


def primitive_idempotents(A: EquivariantAlgebra, rng: Optional[random.Random] = None) -> list[Vec]:
    if _basis_is_idempotent_frame(A):
        return [A.basis_vector(i) for i in range(A.dim)]
    return split_idempotents(A, dict(A.unit), rng=rng)


def _key(v: Vec) -> tuple:
    return tuple(sorted(v.items()))


def idempotent_permutations(A: EquivariantAlgebra, idems: list[Vec]) -> list[list[int]]:
    """For each generator, the permutation it induces on the primitive idempotents."""
    index = {_key(e): i for i, e in enumerate(idems)}
    out = []
    for g in range(len(A.generators)):
        images = []
        for e in idems:
            j = index.get(_key(A.act(g, e)))
            if j is None:
                raise InconsistentData("group action does not permute primitive idempotents")
            images.append(j)
        out.append(images)
    return out


def _orbits(size: int, perms: list[list[int]]) -> list[list[int]]:
    seen = [False] * size
    orbits = []
    for s in range(size):
        if seen[s]:
            continue
        orb = [s]
        seen[s] = True
        for x in orb:
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
        orbits.append(sorted(orb))
    return orbits


@dataclass
class SimplicityReport:
    simple: bool
    orbits: int
    invariant_dim: int
    witness: Optional[list[Vec]] = None  # basis of a proper nonzero invariant ideal
    subset_check: Optional[bool] = None

    def to_json(self) -> dict:
        return {"simple": self.simple, "orbits": self.orbits, "invariant_dim": self.invariant_dim,
                "subset_check": self.subset_check,
                "witness_dim": None if self.witness is None else len(self.witness)}


def _invariant_subalgebra(A: EquivariantAlgebra) -> list[Vec]:
    """Basis of the fixed points A^G, from the action matrices alone."""
    # x is fixed iff (g - 1) x = 0 for every generator: nullspace of the stacked operator
    ech = _QEchelon()
    cols = []
    for j in range(A.dim):
        col: Vec = {}
        for g in range(len(A.generators)):
            img = A.act(g, {j: _ONE})
            img = _add(img, {j: -_ONE})
            col.update({g * A.dim + i: c for i, c in img.items()})
        cols.append(col)
    # nullspace via column dependencies
    basis: list[Vec] = []
    for j, col in enumerate(cols):
        rem, prov = ech.reduce(col, {j: _ONE})
        if rem:
            ech.add(col, {j: _ONE})
        else:
            prov = _add(prov, {})
            basis.append(prov)
    return basis


def is_simple_equivariant(A: EquivariantAlgebra, rng: Optional[random.Random] = None) -> SimplicityReport:
    """Decide whether A has no proper nonzero G-stable ideal, two independent ways.

    Route one: the group permutes the primitive idempotents; simple iff one orbit.
    Route two: G-stable ideals of a reduced commutative algebra are e*A for
    G-fixed idempotents e, so simple iff the fixed subalgebra A^G is one
    dimensional (computed from the action matrices only).  For small algebras
    every subset of primitive idempotents is also tested for G-stability.
    """
    if A.dim > LIMITS.algebra_dim:
        raise LimitExceeded(f"algebra dimension {A.dim} > {LIMITS.algebra_dim}")
    rng = rng or random.Random(0)
    if A.dim == 0:
        return SimplicityReport(False, 0, 0)
    idems = primitive_idempotents(A, rng)
    if len(idems) != A.dim:
        raise InconsistentData("algebra is not reduced and split (too few primitive idempotents)")
    perms = idempotent_permutations(A, idems)
    orbits = _orbits(len(idems), perms)
    route_one = len(orbits) == 1

    fixed = _invariant_subalgebra(A)
    route_two = len(fixed) == 1

    subset_ok = None
    if A.dim <= 10:
        stable = 0
        for r in range(1, A.dim):
            for subset in combinations(range(A.dim), r):
                span = [idems[i] for i in subset]
                if all(_express(span, A.act(g, e)) is not None
                       for g in range(len(A.generators)) for e in span):
                    stable += 1
        subset_ok = stable == 0
        if subset_ok != route_two:
            raise DeciderDisagreement("subset enumeration disagrees with the fixed-subalgebra route")
    if route_one != route_two:
        raise DeciderDisagreement(f"orbit route says {route_one}, fixed-point route says {route_two}")

    witness = None
    if not route_two:
        # a proper G-fixed idempotent, found inside A^G, generates a proper invariant ideal
        pieces = split_idempotents(A, dict(A.unit), space=fixed, rng=rng)
        e = pieces[0]
        ideal = _QEchelon()
        for i in range(A.dim):
            ideal.add(A.product(e, A.basis_vector(i)))
        witness = [row for _, row, _ in ideal.rows]
    return SimplicityReport(route_one, len(orbits), len(fixed), witness, subset_ok)


# characters -----------------------------------------------------------------------------

def _class_size(n: int, ctype: tuple[int, ...]) -> int:
    out = factorial(n)
    for part, mult in Counter(ctype).items():
        out //= part**mult * factorial(mult)
    return out


def sign_multiplicity(n: int, H: PermGroup) -> int:
    """Multiplicity of the sign character in the permutation module C[S_n/H].

    Burnside style: fix(g) = |C(g)| |g^G cap H| / |H| and
    <chi, sgn> = (1/n!) sum_g sgn(g) fix(g), summed class by class.
    """
    if n > LIMITS.sign_degree:
        raise LimitExceeded(f"sign multiplicity capped at degree {LIMITS.sign_degree}")
    if H.degree != n:
        raise NotASubgroup("degree mismatch")
    meet = Counter(cycle_type(h) for h in H.elements)
    total = Fraction(0)
    for ctype, inside in meet.items():
        size = _class_size(n, ctype)
        centraliser = factorial(n) // size
        fix = Fraction(centraliser * inside, H.order)
        sgn = -1 if (n - len(ctype)) % 2 else 1
        total += sgn * size * fix
    total /= factorial(n)
    if total.denominator != 1:
        raise ArithmeticError("character inner product is not an integer")
    return int(total)


# contains-times lemma ---------------------------------------------------------------------

@dataclass
class ContainsTimesCase:
    group: PermGroup
    kprime: int
    head: Optional[PermGroup]
    conjugator: Optional[Perm]

    def to_json(self) -> dict:
        return {
            "order": self.group.order,
            "generators": self.group.generator_string(),
            "k_prime": self.kprime,
            "head_generators": None if self.head is None else self.head.generator_string(),
            "head_order": None if self.head is None else self.head.order,
            "conjugator": None if self.conjugator is None else list(self.conjugator),
        }


def _product_form(H: PermGroup, k: int) -> Optional[tuple[int, PermGroup, Perm]]:
    """Find k' <= k and c with c H c^-1 = H' x S_{n-k'} (tail on the last n-k' points)."""
    n = H.degree
    for kp in range(k + 1):
        for tail in combinations(range(n), n - kp):
            tail_set = set(tail)
            if any({g[y] for y in tail} != tail_set for g in H.generators):
                continue
            if any(_transposition(n, a, b) not in H for a, b in zip(tail, tail[1:])):
                continue
            head_pts = [x for x in range(n) if x not in tail_set]
            c = [0] * n
            for new, old in enumerate(head_pts + list(tail)):
                c[old] = new
            c = tuple(c)
            K = H.conjugate(c)
            head_elems = {g[:kp] for g in K.elements}
            head = PermGroup(kp, [g[:kp] for g in K.generators], head_elems)
            if K != product_with_tail(head, n):
                raise AssertionError("product decomposition failed verification")
            return kp, head, c
    return None


def _transposition(n: int, a: int, b: int) -> Perm:
    g = list(range(n))
    g[a], g[b] = b, a
    return tuple(g)


def verify_contains_times(n: int, k: int) -> dict:
    """Every H <= S_n containing S_{n-k} (on the last n-k points) is conjugate to some H' x S_{n-k'}."""
    if not n > 2 * k + 1:
        raise PreconditionError(f"need n > 2k + 1, got n = {n}, k = {k}")
    base = symmetric_group(n - k, range(k, n), degree=n)
    cases = []
    ok = True
    for H in subgroups_containing(base):
        found = _product_form(H, k)
        if found is None:
            ok = False
            cases.append(ContainsTimesCase(H, -1, None, None))
        else:
            cases.append(ContainsTimesCase(H, *found))
    return {"status": "pass" if ok else "fail", "n": n, "k": k,
            "cases": [c.to_json() for c in cases]}


# fiber matching --------------------------------------------------------------------------

def _gset_isomorphism(size: int, perms_a: list[list[int]], perms_b: list[list[int]]) -> Optional[list[int]]:
    """Bijection phi with phi(p_a(x)) = p_b(phi(x)) for every generator, or None."""
    orbits_a = _orbits(size, perms_a)
    orbits_b = _orbits(size, perms_b)
    if sorted(map(len, orbits_a)) != sorted(map(len, orbits_b)):
        return None
    phi = [-1] * size
    used_b: set[int] = set()

    def extend(x0: int, y0: int) -> Optional[dict[int, int]]:
        trial = {x0: y0}
        queue = [x0]
        for x in queue:
            for pa, pb in zip(perms_a, perms_b):
                xa, yb = pa[x], pb[trial[x]]
                if xa in trial:
                    if trial[xa] != yb:
                        return None
                else:
                    trial[xa] = yb
                    queue.append(xa)
        return trial

    def assign(i: int) -> bool:
        if i == len(orbits_a):
            return True
        orb = orbits_a[i]
        for ob in orbits_b:
            if len(ob) != len(orb) or ob[0] in used_b:
                continue
            for y0 in ob:
                trial = extend(orb[0], y0)
                if trial is None or len(set(trial.values())) != len(trial):
                    continue
                for x, y in trial.items():
                    phi[x] = y
                used_b.update(ob)
                if assign(i + 1):
                    return True
                used_b.difference_update(ob)
                break
        return False

    return phi if assign(0) else None


def match_fiber_algebra(A_fiber: EquivariantAlgebra, n: int, k: int, H: PermGroup,
                        rng: Optional[random.Random] = None) -> Optional[list[Vec]]:
    """Equivariant algebra isomorphism C[S_n/(H x S_{n-k})] -> A_fiber, or None.

    The result lists, for each coset-indicator basis element of the target,
    its image in A_fiber coordinates.  It is verified on structure constants,
    unit and action before being returned.
    """
    expected = factorial(n) // (H.order * factorial(n - k))
    if A_fiber.dim != expected:
        return None
    target = coset_algebra(n, product_with_tail(H, n))
    if list(target.generators) != list(A_fiber.generators):
        raise InconsistentData("fiber algebra must use the standard S_n generators")
    idems = primitive_idempotents(A_fiber, rng)
    if len(idems) != A_fiber.dim:
        return None
    p_fiber = idempotent_permutations(A_fiber, idems)
    p_target = idempotent_permutations(target, primitive_idempotents(target))
    phi = _gset_isomorphism(target.dim, p_target, p_fiber)
    if phi is None:
        return None
    images = [idems[phi[x]] for x in range(target.dim)]
    # verification of the induced map on all structure
    for x in range(target.dim):
        for y in range(target.dim):
            lhs = A_fiber.product(images[x], images[y])
            want: Vec = {}
            for l, c in target.mult.get((x, y), {}).items():
                want = _add(want, _scale(images[l], c))
            if lhs != want:
                return None
    total: Vec = {}
    for x, c in target.unit.items():
        total = _add(total, _scale(images[x], c))
    if total != A_fiber.unit:
        return None
    for g in range(len(target.generators)):
        for x in range(target.dim):
            (y, c), = target.action[g][x].items()
            if A_fiber.act(g, images[x]) != _scale(images[y], c):
                return None
    return images
