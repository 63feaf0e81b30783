"""Finitely generated coarse structures and finite metric spaces.

On a finite ground set the closure of finitely many generators under the
coarse-structure axioms (diagonal, subsets, finite unions, inverses,
compositions) has a maximal element, and that element is an equivalence
relation.  A structure is therefore represented by its maximal entourage:
a relation is a member exactly when it is contained in it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .relations import GroundSet, ProductGroundSet, Relation, product_relation, union_all


@dataclass(frozen=True)
class CoarseStructure:
    ground: GroundSet
    generators: tuple[Relation, ...]
    emax: Relation

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.ground != self.ground:
                raise ValueError("generator on a different ground set")
        if self.emax.ground != self.ground:
            raise ValueError("maximal entourage on a different ground set")
        if not self.emax.is_equivalence():
            raise ValueError("maximal entourage must be an equivalence relation")

    def contains(self, e: Relation) -> bool:
        """Membership test: true iff e is contained in the maximal entourage."""
        if e.ground != self.ground:
            raise ValueError("relation on a different ground set")
        return e.pairs <= self.emax.pairs

    def classes(self) -> tuple[frozenset[int], ...]:
        """Equivalence classes of the maximal entourage, ordered by least point."""
        neighbours: dict[int, set[int]] = {p: set() for p in self.ground.points()}
        for a, b in self.emax.pairs:
            neighbours[a].add(b)
        seen: set[int] = set()
        out: list[frozenset[int]] = []
        for p in self.ground.points():
            if p not in seen:
                cls = frozenset(neighbours[p])
                seen |= cls
                out.append(cls)
        return tuple(out)


def generate(ground: GroundSet, generators: Iterable[Relation]) -> CoarseStructure:
    """Coarse structure generated by the given relations.

    The maximal entourage is the equivalence closure of the union of the
    generators and the diagonal.
    """
    gens = tuple(generators)
    emax = union_all(ground, gens).union(ground.diagonal()).equivalence_closure()
    return CoarseStructure(ground, gens, emax)


def product_structure(s1: CoarseStructure, s2: CoarseStructure) -> CoarseStructure:
    """Product coarse structure: a relation is a member iff both of its
    coordinate projections are members of the factors.

    Equivalently, the maximal entourage is the box of the factor maxima.
    """
    emax = product_relation(s1.emax, s2.emax)
    return CoarseStructure(emax.ground, (emax,), emax)


@dataclass(frozen=True)
class FiniteMetric:
    """Symmetric matrix of exact nonnegative rational distances.

    Zero diagonal, symmetry and the triangle inequality are enforced at
    construction time.  Zero off-diagonal entries are allowed.
    """

    ground: GroundSet
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = self.ground.size
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.dist)
        object.__setattr__(self, "dist", rows)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"distance matrix must be {n}x{n}")
        for a in range(n):
            if rows[a][a] != 0:
                raise ValueError(f"nonzero diagonal entry at ({a}, {a})")
            for b in range(n):
                if rows[a][b] < 0:
                    raise ValueError(f"negative distance at ({a}, {b})")
                if rows[a][b] != rows[b][a]:
                    raise ValueError(f"asymmetric distances at ({a}, {b})")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if rows[a][c] > rows[a][b] + rows[b][c]:
                        raise ValueError(
                            f"triangle inequality fails: d({a},{c}) > d({a},{b}) + d({b},{c})"
                        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "FiniteMetric":
        return cls(GroundSet(len(rows)), tuple(tuple(Fraction(str(x)) for x in row) for row in rows))

    def diameter(self) -> Fraction:
        return max(x for row in self.dist for x in row)

    def scales(self) -> tuple[Fraction, ...]:
        """All distinct distances, ascending; generates the full bounded structure."""
        return tuple(sorted({x for row in self.dist for x in row}))


def metric_entourage(metric: FiniteMetric, r: object) -> Relation:
    """All pairs at distance at most r; reflexive and symmetric."""
    radius = Fraction(str(r)) if not isinstance(r, Fraction) else r
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    n = metric.ground.size
    pairs = frozenset(
        (a, b) for a in range(n) for b in range(n) if metric.dist[a][b] <= radius
    )
    return Relation(metric.ground, pairs)


def structure_from_metric(metric: FiniteMetric, scales: Iterable[object]) -> CoarseStructure:
    """Bounded-type structure generated by the metric entourages at the given scales."""
    return generate(metric.ground, [metric_entourage(metric, r) for r in scales])


def max_metric_product(m1: FiniteMetric, m2: FiniteMetric) -> FiniteMetric:
    """Product metric d((x1,y1),(x2,y2)) = max(d1(x1,x2), d2(y1,y2))."""
    ground = ProductGroundSet(m1.ground, m2.ground)
    rows = []
    for a in range(ground.size):
        x1, y1 = ground.unpair(a)
        row = []
        for b in range(ground.size):
            x2, y2 = ground.unpair(b)
            row.append(max(m1.dist[x1][x2], m2.dist[y1][y2]))
        rows.append(tuple(row))
    return FiniteMetric(ground, tuple(rows))
