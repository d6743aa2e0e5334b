"""Set partitions of ``{0, ..., n-1}``, the refinement lattice and its Moebius function.

A partition is stored in canonical form: indices ascend inside each block and
blocks are ordered by their least element.  Equivalently, every partition has
a *restricted growth string* ``labels`` where ``labels[i]`` is the index of the
block containing ``i``; two partitions are equal iff their label strings are.
"""

from __future__ import annotations

from math import factorial
from typing import Iterable, Iterator, Sequence

from .config import LIMITS
from .errors import LimitExceeded

__all__ = [
    "SetPartition",
    "bell",
    "enumerate_partitions",
    "join",
    "moebius",
    "restrict",
]


def _canonical_labels(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel arbitrary block tags as a restricted growth string."""
    seen: dict[int, int] = {}
    out = []
    for x in labels:
        r = seen.get(x)
        if r is None:
            r = seen[x] = len(seen)
        out.append(r)
    return tuple(out)


class SetPartition:
    """Immutable set partition of ``range(ground_size)``."""

    __slots__ = ("ground_size", "labels", "_blocks", "_hash")

    def __init__(self, ground_size: int, labels: Sequence[int], *, canonical: bool = False):
        if len(labels) != ground_size:
            raise ValueError("label string length must equal ground size")
        if ground_size > LIMITS.max_points:
            raise LimitExceeded(f"ground size {ground_size} > {LIMITS.max_points}")
        self.ground_size = ground_size
        self.labels = tuple(labels) if canonical else _canonical_labels(labels)
        self._blocks = None
        self._hash = hash(self.labels)

    @classmethod
    def from_blocks(cls, ground_size: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        labels = [-1] * ground_size
        for b, block in enumerate(blocks):
            block = list(block)
            if not block:
                raise ValueError("empty block")
            for i in block:
                if not 0 <= i < ground_size:
                    raise ValueError(f"index {i} outside ground set of size {ground_size}")
                if labels[i] != -1:
                    raise ValueError(f"index {i} appears in two blocks")
                labels[i] = b
        if -1 in labels:
            raise ValueError("blocks do not cover the ground set")
        return cls(ground_size, labels)

    @classmethod
    def singletons(cls, n: int) -> "SetPartition":
        return cls(n, range(n), canonical=True)

    @classmethod
    def one_block(cls, n: int) -> "SetPartition":
        return cls(n, (0,) * n, canonical=True)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        if self._blocks is None:
            out: list[list[int]] = []
            for i, b in enumerate(self.labels):
                if b == len(out):
                    out.append([])
                out[b].append(i)
            self._blocks = tuple(tuple(b) for b in out)
        return self._blocks

    @property
    def num_blocks(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    def refines(self, other: "SetPartition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        if self.ground_size != other.ground_size:
            return False
        image: dict[int, int] = {}
        for a, b in zip(self.labels, other.labels):
            if image.setdefault(a, b) != b:
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.labels == other.labels

    def __lt__(self, other: "SetPartition") -> bool:
        return (self.ground_size, self.labels) < (other.ground_size, other.labels)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return f"SetPartition({self.ground_size}, [{inner}])"

    def to_json(self) -> dict:
        return {"n": self.ground_size, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: dict) -> "SetPartition":
        return cls.from_blocks(int(data["n"]), data["blocks"])


def join(p: SetPartition, q: SetPartition) -> SetPartition:
    """Finest common coarsening of ``p`` and ``q``."""
    if p.ground_size != q.ground_size:
        raise ValueError(f"ground sizes differ: {p.ground_size} vs {q.ground_size}")
    offset = p.num_blocks
    parent = list(range(offset + q.num_blocks))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in zip(p.labels, q.labels):
        ra, rb = find(a), find(offset + b)
        if ra != rb:
            parent[ra] = rb
    return SetPartition(p.ground_size, [find(a) for a in p.labels])


def restrict(p: SetPartition, keep: Sequence[int]) -> SetPartition:
    """Partition induced on the points ``keep``, relabelled ``0..len(keep)-1`` in order."""
    return SetPartition(len(keep), [p.labels[i] for i in keep])


def bell(n: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def enumerate_partitions(n: int, limit: int | None = None) -> Iterator[SetPartition]:
    """Yield every set partition of ``range(n)`` once, in lexicographic label order."""
    limit = LIMITS.enumeration if limit is None else limit
    if n > limit:
        raise LimitExceeded(f"refusing to enumerate partitions of {n} > {limit} points")
    if n == 0:
        yield SetPartition(0, (), canonical=True)
        return
    labels = [0] * n

    def rec(i: int, top: int) -> Iterator[SetPartition]:
        if i == n:
            yield SetPartition(n, labels, canonical=True)
            return
        for b in range(top + 2):
            labels[i] = b
            yield from rec(i + 1, max(top, b))

    labels[0] = 0
    yield from rec(1, 0)


def moebius(p: SetPartition) -> int:
    """mu(singletons, p) in the partition lattice: product of (-1)^(|B|-1) (|B|-1)!."""
    out = 1
    for block in p.blocks:
        m = len(block) - 1
        out *= (-1) ** m * factorial(m)
    return out
