"""Finite ground sets and exact algebra of binary relations.

Everything downstream computes on these values: points are the integers
0..size-1 of a ground set, and a relation is an exact set of ordered index
pairs.  All values are immutable and structurally comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

Pair = tuple[int, int]


@dataclass(frozen=True)
class GroundSet:
    """A finite set of points, identified with the indices 0..size-1."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"ground set size must be a positive integer, got {self.size!r}")

    def points(self) -> range:
        return range(self.size)

    def all_points(self) -> frozenset[int]:
        return frozenset(range(self.size))

    def diagonal(self) -> "Relation":
        return Relation(self, frozenset((p, p) for p in self.points()))

    def full(self) -> "Relation":
        return Relation(self, frozenset((a, b) for a in self.points() for b in self.points()))

    def empty(self) -> "Relation":
        return Relation(self, frozenset())


class ProductGroundSet(GroundSet):
    """Ground set of a two-factor product.

    The point (x, y) is encoded as the flat index x * right.size + y; the
    encoding is a bijection onto 0..size-1.
    """

    left: GroundSet
    right: GroundSet

    def __init__(self, left: GroundSet, right: GroundSet) -> None:
        super().__init__(left.size * right.size)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProductGroundSet):
            return NotImplemented
        return self.left == other.left and self.right == other.right

    def __hash__(self) -> int:
        return hash(("ProductGroundSet", self.left, self.right))

    def __repr__(self) -> str:
        return f"ProductGroundSet({self.left!r}, {self.right!r})"

    def index(self, x: int, y: int) -> int:
        if not (0 <= x < self.left.size and 0 <= y < self.right.size):
            raise ValueError(f"point ({x}, {y}) outside {self!r}")
        return x * self.right.size + y

    def unpair(self, k: int) -> Pair:
        if not (0 <= k < self.size):
            raise ValueError(f"index {k} outside {self!r}")
        return divmod(k, self.right.size)


@dataclass(frozen=True)
class Relation:
    """An exact subset of ground x ground; the carrier type for entourages."""

    ground: GroundSet
    pairs: frozenset[Pair]

    def __post_init__(self) -> None:
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        n = self.ground.size
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair ({a}, {b}) outside ground set of size {n}")
        object.__setattr__(self, "pairs", pairs)

    def __repr__(self) -> str:
        return f"Relation(n={self.ground.size}, pairs={sorted(self.pairs)})"

    def _require_same_ground(self, other: "Relation") -> None:
        if self.ground != other.ground:
            raise ValueError(f"ground sets differ: {self.ground!r} vs {other.ground!r}")

    def compose(self, other: "Relation") -> "Relation":
        """All (a, c) with (a, b) here and (b, c) in other, for some b."""
        self._require_same_ground(other)
        successors: dict[int, set[int]] = {}
        for b, c in other.pairs:
            successors.setdefault(b, set()).add(c)
        out = {(a, c) for a, b in self.pairs for c in successors.get(b, ())}
        return Relation(self.ground, frozenset(out))

    def inverse(self) -> "Relation":
        return Relation(self.ground, frozenset((b, a) for a, b in self.pairs))

    def union(self, other: "Relation") -> "Relation":
        self._require_same_ground(other)
        return Relation(self.ground, self.pairs | other.pairs)

    def intersect(self, other: "Relation") -> "Relation":
        self._require_same_ground(other)
        return Relation(self.ground, self.pairs & other.pairs)

    def is_subset(self, other: "Relation") -> bool:
        self._require_same_ground(other)
        return self.pairs <= other.pairs

    def is_reflexive(self) -> bool:
        return all((p, p) in self.pairs for p in self.ground.points())

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)

    def is_transitive(self) -> bool:
        return self.compose(self).pairs <= self.pairs

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def equivalence_closure(self) -> "Relation":
        """Smallest reflexive, symmetric, transitive relation containing this one.

        Fixpoint iteration: seed with the diagonal and the inverse, then union
        in self-compositions until stable.  Terminates because the ground set
        is finite.
        """
        seed = set(self.pairs)
        seed.update((p, p) for p in self.ground.points())
        seed.update((b, a) for a, b in self.pairs)
        current = Relation(self.ground, frozenset(seed))
        while True:
            step = current.union(current.compose(current))
            if step == current:
                return current
            current = step


def union_all(ground: GroundSet, relations: Iterable[Relation]) -> Relation:
    pairs: set[Pair] = set()
    for r in relations:
        if r.ground != ground:
            raise ValueError(f"ground sets differ: {ground!r} vs {r.ground!r}")
        pairs |= r.pairs
    return Relation(ground, frozenset(pairs))


def product_relation(k: Relation, l: Relation) -> Relation:
    """Box relation on the product ground set: both coordinates move by the factors."""
    ground = ProductGroundSet(k.ground, l.ground)
    pairs = frozenset(
        (ground.index(x1, y1), ground.index(x2, y2))
        for x1, x2 in k.pairs
        for y1, y2 in l.pairs
    )
    return Relation(ground, pairs)


def project(e: Relation, axis: int) -> Relation:
    """Image of a relation on a product ground set under one coordinate projection."""
    ground = e.ground
    if not isinstance(ground, ProductGroundSet):
        raise ValueError("project expects a relation on a product ground set")
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")
    coord = 0 if axis == 1 else 1
    factor = ground.left if axis == 1 else ground.right
    pairs = frozenset(
        (ground.unpair(a)[coord], ground.unpair(b)[coord]) for a, b in e.pairs
    )
    return Relation(factor, pairs)
