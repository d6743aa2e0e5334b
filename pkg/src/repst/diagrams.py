"""The partition category: morphisms are sparse Q(t)-combinations of partition diagrams.

A diagram ``a -> b`` is a set partition of ``a + b`` points.  Points
``0..a-1`` are the domain, points ``a..a+b-1`` the codomain.  Composition
glues along the middle boundary and picks up a factor ``t`` for every block
that ends up touching neither outer boundary.

``rho @ pi`` is composition (``pi`` first), ``f.tensor(g)`` the monoidal product.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BoundaryMismatch
from .partitions import SetPartition, _canonical_labels, enumerate_partitions
from .scalars import Poly, Scalar, T, _norm_poly, as_scalar, format_scalar, scalar_from_json, scalar_to_json

__all__ = [
    "Diagram",
    "Morphism",
    "closure_trace",
    "compose",
    "cup_cap",
    "frobenius_generators",
    "identity",
    "one_block",
    "permutation",
    "symmetry",
    "tensor",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Diagram:
    """A partition diagram ``dom -> cod``; immutable and hashable."""

    __slots__ = ("dom", "cod", "labels", "_hash")

    def __init__(self, dom: int, cod: int, labels: Sequence[int], *, canonical: bool = False):
        if len(labels) != dom + cod:
            raise ValueError(f"diagram {dom}->{cod} needs {dom + cod} labels, got {len(labels)}")
        self.dom = dom
        self.cod = cod
        self.labels = tuple(labels) if canonical else _canonical_labels(labels)
        self._hash = hash((dom, cod, self.labels))

    @classmethod
    def from_blocks(cls, dom: int, cod: int, blocks: Iterable[Iterable[int]]) -> "Diagram":
        p = SetPartition.from_blocks(dom + cod, blocks)
        return cls(dom, cod, p.labels, canonical=True)

    @classmethod
    def from_partition(cls, dom: int, cod: int, p: SetPartition) -> "Diagram":
        if p.ground_size != dom + cod:
            raise ValueError("partition size does not match boundary")
        return cls(dom, cod, p.labels, canonical=True)

    @property
    def partition(self) -> SetPartition:
        return SetPartition(self.dom + self.cod, self.labels, canonical=True)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return self.partition.blocks

    def sort_key(self):
        return (self.dom, self.cod, self.labels)

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.labels == other.labels

    def __lt__(self, other: "Diagram"):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return f"Diagram({self.dom}->{self.cod}: {inner})"


@lru_cache(maxsize=1 << 20)
def _compose_diagrams(rho: Diagram, pi: Diagram) -> tuple[Diagram, int]:
    """(rho . pi, number of closed middle blocks)."""
    a, b, c = pi.dom, pi.cod, rho.cod
    pl, rl = pi.labels, rho.labels
    np_ = max(pl) + 1 if pl else 0
    nr = max(rl) + 1 if rl else 0
    parent = list(range(np_ + nr))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(b):
        x, y = find(pl[a + j]), find(np_ + rl[j])
        if x != y:
            parent[x] = y
    out = [find(pl[i]) for i in range(a)]
    out.extend(find(np_ + rl[b + m]) for m in range(c))
    roots = {find(x) for x in range(np_ + nr)}
    d = len(roots) - len(set(out))
    return Diagram(a, c, out), d


@lru_cache(maxsize=1 << 18)
def _tensor_diagrams(f: Diagram, g: Diagram) -> Diagram:
    lf, lg = f.labels, g.labels
    off = max(lf) + 1 if lf else 0
    shifted = [x + off for x in lg]
    labels = list(lf[: f.dom]) + shifted[: g.dom] + list(lf[f.dom:]) + shifted[g.dom:]
    return Diagram(f.dom + g.dom, f.cod + g.cod, labels)


def _closed_loops(dg: Diagram) -> int:
    """Number of blocks after identifying domain point i with codomain point i."""
    k = dg.dom
    lab = dg.labels
    parent = list(range(max(lab) + 1 if lab else 0))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(k):
        x, y = find(lab[i]), find(lab[k + i])
        if x != y:
            parent[x] = y
    return len({find(x) for x in range(len(parent))})


def _t_power_sum(by_power: Mapping[int, Scalar]) -> Scalar:
    """sum_d c_d t^d."""
    if all(isinstance(c, Fraction) for c in by_power.values()):
        top = max(by_power)
        coeffs = [_ZERO] * (top + 1)
        for d, c in by_power.items():
            coeffs[d] += c
        return _norm_poly(coeffs)
    total: Scalar = _ZERO
    for d, c in by_power.items():
        if isinstance(c, Poly):
            total = total + c.shift(d)
        else:
            total = total + c * T**d if d else total + c
    return as_scalar(total)


class Morphism:
    """Sparse linear combination of diagrams with common boundary ``dom -> cod``."""

    __slots__ = ("dom", "cod", "terms")

    def __init__(self, dom: int, cod: int, terms: Mapping[Diagram, Scalar] | None = None):
        self.dom = dom
        self.cod = cod
        clean: dict[Diagram, Scalar] = {}
        for dg, c in (terms or {}).items():
            if dg.dom != dom or dg.cod != cod:
                raise BoundaryMismatch(f"diagram {dg.dom}->{dg.cod} in morphism {dom}->{cod}")
            c = as_scalar(c)
            if c:
                clean[dg] = c
        self.terms = clean

    @classmethod
    def _raw(cls, dom: int, cod: int, terms: dict) -> "Morphism":
        m = cls.__new__(cls)
        m.dom, m.cod, m.terms = dom, cod, terms
        return m

    @classmethod
    def from_diagram(cls, dg: Diagram, coeff: Scalar = _ONE) -> "Morphism":
        return cls(dg.dom, dg.cod, {dg: coeff})

    @classmethod
    def zero(cls, dom: int, cod: int) -> "Morphism":
        return cls._raw(dom, cod, {})

    # linear structure --------------------------------------------------------
    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_same(other)
        out = dict(self.terms)
        for dg, c in other.terms.items():
            v = out.get(dg, _ZERO) + c
            if v:
                out[dg] = as_scalar(v)
            else:
                out.pop(dg, None)
        return Morphism._raw(self.dom, self.cod, out)

    def __neg__(self) -> "Morphism":
        return Morphism._raw(self.dom, self.cod, {dg: -c for dg, c in self.terms.items()})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, s: Scalar) -> "Morphism":
        s = as_scalar(s)
        if not s:
            return Morphism.zero(self.dom, self.cod)
        return Morphism._raw(self.dom, self.cod, {dg: as_scalar(c * s) for dg, c in self.terms.items()})

    def __rmul__(self, s) -> "Morphism":
        if isinstance(s, Morphism):
            return NotImplemented
        return self.scale(s)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    def tensor(self, other: "Morphism") -> "Morphism":
        return tensor(self, other)

    def _check_same(self, other: "Morphism") -> None:
        if (self.dom, self.cod) != (other.dom, other.cod):
            raise BoundaryMismatch(f"{self.dom}->{self.cod} vs {other.dom}->{other.cod}")

    # comparison --------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, dg: Diagram) -> Scalar:
        return self.terms.get(dg, _ZERO)

    def items(self) -> Iterator[tuple[Diagram, Scalar]]:
        """Terms in canonical diagram order."""
        for dg in sorted(self.terms, key=Diagram.sort_key):
            yield dg, self.terms[dg]

    def is_t_free(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return f"Morphism({self.dom}->{self.cod}: 0)"
        parts = [f"({format_scalar(c)})*{dg!r}" for dg, c in self.items()]
        return f"Morphism({self.dom}->{self.cod}: " + " + ".join(parts) + ")"

    # JSON ----------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "dom": self.dom,
            "cod": self.cod,
            "terms": [{"blocks": [list(b) for b in dg.blocks], "coeff": scalar_to_json(c)}
                      for dg, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Morphism":
        dom, cod = int(data["dom"]), int(data["cod"])
        out: dict[Diagram, Scalar] = {}
        for term in data["terms"]:
            dg = Diagram.from_blocks(dom, cod, term["blocks"])
            out[dg] = out.get(dg, _ZERO) + scalar_from_json(term["coeff"])
        return cls(dom, cod, out)


# core operations -------------------------------------------------------------

def compose(rho: Morphism, pi: Morphism) -> Morphism:
    """``rho o pi``: apply ``pi`` then ``rho``."""
    if pi.cod != rho.dom:
        raise BoundaryMismatch(f"cannot compose {rho.dom}->{rho.cod} after {pi.dom}->{pi.cod}")
    acc: dict[Diagram, dict[int, Scalar]] = defaultdict(dict)
    rterms = list(rho.terms.items())
    for dp, cp in pi.terms.items():
        for dr, cr in rterms:
            dg, d = _compose_diagrams(dr, dp)
            slot = acc[dg]
            prod = cr * cp
            prev = slot.get(d)
            slot[d] = prod if prev is None else prev + prod
    out: dict[Diagram, Scalar] = {}
    for dg, by_power in acc.items():
        c = _t_power_sum(by_power)
        if c:
            out[dg] = c
    return Morphism._raw(pi.dom, rho.cod, out)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    out: dict[Diagram, Scalar] = {}
    for df, cf in f.terms.items():
        for dg, cg in g.terms.items():
            key = _tensor_diagrams(df, dg)
            v = out.get(key, _ZERO) + cf * cg
            if v:
                out[key] = as_scalar(v)
            else:
                out.pop(key, None)
    return Morphism._raw(f.dom + g.dom, f.cod + g.cod, out)


def tensor_all(ms: Iterable[Morphism]) -> Morphism:
    out = identity(0)
    for m in ms:
        out = tensor(out, m)
    return out


def identity(a: int) -> Morphism:
    labels = list(range(a)) * 2
    return Morphism._raw(a, a, {Diagram(a, a, labels, canonical=True): _ONE})


def one_block(a: int, b: int) -> Morphism:
    """The diagram ``a -> b`` with all points in a single block."""
    return Morphism._raw(a, b, {Diagram(a, b, (0,) * (a + b), canonical=True): _ONE})


def permutation(images: Sequence[int]) -> Morphism:
    """Diagram of the bijection sending domain point i to codomain point images[i]."""
    k = len(images)
    labels = [0] * (2 * k)
    for i, j in enumerate(images):
        labels[i] = i
        labels[k + j] = i
    return Morphism._raw(k, k, {Diagram(k, k, labels): _ONE})


def symmetry(a: int, b: int) -> Morphism:
    """Swap of the first ``a`` strands past the next ``b``: ``a + b -> b + a``."""
    return permutation([b + i for i in range(a)] + list(range(b)))


def cup_cap(k: int, direction: str) -> Morphism:
    """Nested cup ``0 -> 2k`` or cap ``2k -> 0``; point i pairs with point 2k-1-i."""
    labels = [min(i, 2 * k - 1 - i) for i in range(2 * k)]
    if direction == "cup":
        return Morphism._raw(0, 2 * k, {Diagram(0, 2 * k, labels): _ONE})
    if direction == "cap":
        return Morphism._raw(2 * k, 0, {Diagram(2 * k, 0, labels): _ONE})
    raise ValueError(f"direction must be 'cup' or 'cap', not {direction!r}")


def closure_trace(f: Morphism) -> Scalar:
    """Categorical trace: close each strand i to strand i and count loops."""
    if f.dom != f.cod:
        raise BoundaryMismatch(f"trace needs an endomorphism, got {f.dom}->{f.cod}")
    by_power: dict[int, Scalar] = {}
    for dg, c in f.terms.items():
        d = _closed_loops(dg)
        by_power[d] = by_power.get(d, _ZERO) + c
    return _t_power_sum(by_power) if by_power else _ZERO


def frobenius_generators() -> dict[str, Morphism]:
    """mu: 2->1, eta: 0->1, delta: 1->2, epsilon: 1->0 on the generating object."""
    return {
        "mu": one_block(2, 1),
        "eta": one_block(0, 1),
        "delta": one_block(1, 2),
        "epsilon": one_block(1, 0),
    }


def all_diagrams(a: int, b: int) -> list[Diagram]:
    """Full diagram basis of Hom(a, b); Bell(a + b) elements."""
    return [Diagram(a, b, p.labels, canonical=True) for p in enumerate_partitions(a + b)]


def compose_cache_clear() -> None:
    _compose_diagrams.cache_clear()
    _tensor_diagrams.cache_clear()
