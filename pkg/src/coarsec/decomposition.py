"""Entourage-relative decompositions and sFCDC certificates.

A set Y admits an (E, n)-decomposition over a family when Y is the union of
at most n parts, each part being an E-disjoint union of family members.  An
sFCDC certificate is a chain of families starting at {X}, each member carrying
an explicit (L_i, 2)-decomposition over the next family, ending in a uniformly
bounded family.  Certificates always carry their decomposition data; checking
never searches.

The converter turns provider data of the fixed-piece-count kind (an integer
sequence n_i, with (K_i, n_i)-decompositions) into a binary certificate by
peeling one layer per step and bundling the remainder, after refining the
provider's families into partitions coherently along the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .covers import (
    ConstructionError,
    EntourageSequence,
    Family,
    ProviderError,
    is_uniformly_bounded,
)
from .relations import GroundSet, Relation
from .spaces import CoarseStructure, generate


@dataclass(frozen=True)
class Decomposition:
    """Parts of a target set; every part is a list of member subsets."""

    target: frozenset[int]
    parts: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "target", frozenset(self.target))
        object.__setattr__(
            self, "parts", tuple(tuple(frozenset(m) for m in part) for part in self.parts)
        )

    def all_members(self) -> tuple[frozenset[int], ...]:
        return tuple(m for part in self.parts for m in part)


@dataclass(frozen=True)
class DecompositionReport:
    parts_ok: bool
    union_ok: bool
    disjoint_ok: bool
    members_ok: bool
    failure: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.parts_ok and self.union_ok and self.disjoint_ok and self.members_ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "parts_ok": self.parts_ok,
            "union_ok": self.union_ok,
            "disjoint_ok": self.disjoint_ok,
            "members_ok": self.members_ok,
            "failure": list(self.failure) if self.failure is not None else None,
        }


def check_decomposition(
    target: frozenset[int],
    e: Relation,
    n: int,
    decomposition: Decomposition,
    family: Family,
) -> DecompositionReport:
    """Verify an (E, n)-decomposition of target over the given family.

    Clauses: at most n parts; the members union to exactly the target; members
    within a part are pairwise E-disjoint; every member belongs to the family.
    """
    if family.ground != e.ground:
        raise ValueError("family and relation on different ground sets")
    if n < 1:
        raise ValueError(f"part count must be >= 1, got {n}")
    target = frozenset(target)
    if any(not (0 <= p < e.ground.size) for p in target):
        raise ValueError("target outside the ground set")

    parts_ok = len(decomposition.parts) <= n
    failure: Optional[tuple] = None
    if not parts_ok:
        failure = ("too-many-parts", len(decomposition.parts), n)

    union: set[int] = set()
    for part in decomposition.parts:
        for m in part:
            union |= m
    union_ok = union == target and decomposition.target == target
    if not union_ok and failure is None:
        if decomposition.target != target:
            failure = ("target-mismatch", sorted(decomposition.target), sorted(target))
        else:
            diff = sorted(union ^ target)
            failure = ("union-mismatch", diff[0])

    disjoint_ok = True
    for t, part in enumerate(decomposition.parts, start=1):
        for a in range(len(part)):
            for b in range(a + 1, len(part)):
                hit = next(
                    ((x, y) for x, y in e.pairs if x in part[a] and y in part[b]),
                    None,
                )
                if hit is None:
                    hit = next(
                        ((x, y) for x, y in e.pairs if x in part[b] and y in part[a]),
                        None,
                    )
                if hit is not None:
                    disjoint_ok = False
                    if failure is None:
                        failure = (
                            "part-not-disjoint",
                            t,
                            sorted(part[a]),
                            sorted(part[b]),
                            [hit[0], hit[1]],
                        )
                    break
            if not disjoint_ok:
                break
        if not disjoint_ok:
            break

    member_set = set(family.members)
    members_ok = True
    for t, part in enumerate(decomposition.parts, start=1):
        for m in part:
            if m not in member_set:
                members_ok = False
                if failure is None:
                    failure = ("not-a-member", t, sorted(m))
                break
        if not members_ok:
            break

    return DecompositionReport(parts_ok, union_ok, disjoint_ok, members_ok, failure)


def find_decomposition(
    target: frozenset[int],
    e: Relation,
    n: int,
    family: Family,
) -> Optional[Decomposition]:
    """Exhaustive search for an (E, n)-decomposition of target over the family.

    Candidates are the family members contained in the target; each candidate
    is assigned to one of the n parts or left unused, with backtracking.
    Exact under the guard: at most 12 candidates and n <= 3.
    """
    if family.ground != e.ground:
        raise ValueError("family and relation on different ground sets")
    if not (1 <= n <= 3):
        raise ValueError(f"part count is guarded to 1..3, got {n}")
    target = frozenset(target)
    candidates = [m for m in family.members if m <= target]
    if len(candidates) > 12:
        raise ValueError(
            f"search is guarded to <= 12 candidate members, got {len(candidates)}"
        )
    if not target:
        return Decomposition(target, ())

    suffix_union: list[frozenset[int]] = [frozenset()] * (len(candidates) + 1)
    for i in range(len(candidates) - 1, -1, -1):
        suffix_union[i] = suffix_union[i + 1] | candidates[i]
    if not target <= suffix_union[0]:
        return None

    def clashes(m: frozenset[int], placed: list[frozenset[int]]) -> bool:
        for other in placed:
            if any(
                (x in m and y in other) or (x in other and y in m) for x, y in e.pairs
            ):
                return True
        return False

    parts: list[list[frozenset[int]]] = [[] for _ in range(n)]

    def search(i: int, covered: frozenset[int]) -> Optional[list[list[frozenset[int]]]]:
        if not target <= (covered | suffix_union[i]):
            return None
        if i == len(candidates):
            return [list(p) for p in parts] if covered == target else None
        m = candidates[i]
        result = search(i + 1, covered)
        if result is not None:
            return result
        for slot in range(n):
            if clashes(m, parts[slot]):
                continue
            parts[slot].append(m)
            result = search(i + 1, covered | m)
            parts[slot].pop()
            if result is not None:
                return result
        return None

    found = search(0, frozenset())
    if found is None:
        return None
    return Decomposition(target, tuple(tuple(p) for p in found if p))


@dataclass(frozen=True)
class SfcdcCertificate:
    """Chain of families with explicit binary decompositions between levels.

    decompositions[i][k] decomposes families[i].members[k] over families[i+1].
    """

    families: tuple[Family, ...]
    decompositions: tuple[tuple[Decomposition, ...], ...]

    def __post_init__(self) -> None:
        families = tuple(self.families)
        decomps = tuple(tuple(row) for row in self.decompositions)
        object.__setattr__(self, "families", families)
        object.__setattr__(self, "decompositions", decomps)
        if not families:
            raise ValueError("certificate must contain at least one family")
        if len(decomps) != len(families) - 1:
            raise ValueError("one decomposition row per non-terminal family is required")
        for i, row in enumerate(decomps):
            if len(row) != len(families[i].members):
                raise ValueError(f"decomposition row {i + 1} does not match its family")

    @property
    def ground(self) -> GroundSet:
        return self.families[0].ground


@dataclass(frozen=True)
class SfcdcReport:
    root_ok: bool
    decompositions_ok: bool
    bounded_ok: bool
    failure: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.root_ok and self.decompositions_ok and self.bounded_ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "root_ok": self.root_ok,
            "decompositions_ok": self.decompositions_ok,
            "bounded_ok": self.bounded_ok,
            "failure": list(self.failure) if self.failure is not None else None,
        }


def check_sfcdc_certificate(
    structure: CoarseStructure,
    l_seq: EntourageSequence,
    certificate: SfcdcCertificate,
) -> SfcdcReport:
    """Verify an sFCDC certificate against a structure and a sequence.

    The first family must be {X}; every member of level i must carry a valid
    (L_i, 2)-decomposition over level i+1 (extend-by-last); the last family
    must be uniformly bounded.
    """
    if certificate.ground != structure.ground or l_seq.ground != structure.ground:
        raise ValueError("structure, sequence and certificate must share a ground set")

    root_ok = certificate.families[0].members == (structure.ground.all_points(),)
    failure: Optional[tuple] = None
    if not root_ok:
        failure = ("root-not-whole-space",)

    decompositions_ok = True
    for i, row in enumerate(certificate.decompositions):
        next_family = certificate.families[i + 1]
        for k, member in enumerate(certificate.families[i].members):
            report = check_decomposition(member, l_seq.at(i + 1), 2, row[k], next_family)
            if not report.ok:
                decompositions_ok = False
                if failure is None:
                    failure = ("level", i + 1, k, report.failure)
                break
        if not decompositions_ok:
            break

    bounded_ok = is_uniformly_bounded(certificate.families[-1], structure)
    if not bounded_ok and failure is None:
        failure = ("terminal-not-bounded",)
    return SfcdcReport(root_ok, decompositions_ok, bounded_ok, failure)


def refine_to_partition(families: Sequence[Family]) -> tuple[Family, ...]:
    """Refine each covering family into a partition of the ground set.

    Every point is assigned to its lowest-index containing member; emptied
    members are dropped.  Families that fail to cover raise.
    """
    out: list[Family] = []
    for idx, family in enumerate(families):
        points = family.ground.all_points()
        if family.covered() != points:
            raise ValueError(f"family {idx + 1} does not cover the ground set")
        taken: set[int] = set()
        members: list[frozenset[int]] = []
        for m in family.members:
            fresh = m - taken
            taken |= m
            if fresh:
                members.append(frozenset(fresh))
        out.append(Family(family.ground, tuple(members)))
    return tuple(out)


def refine_chain(
    families: Sequence[Family],
    decompositions: Sequence[Sequence[Decomposition]],
) -> tuple[tuple[Family, ...], tuple[tuple[Decomposition, ...], ...]]:
    """Partition-refine a decomposition chain coherently, level by level.

    The first family is refined by the lowest-index rule; each later family is
    rebuilt from the stored decompositions, splitting every refined block of
    the previous level along the pieces of its member's decomposition (lowest
    member index wins a contested point within the block).  This keeps every
    stored decomposition valid over the refined next family, which per-family
    refinement alone does not.
    """
    families = tuple(families)
    decompositions = tuple(tuple(row) for row in decompositions)
    if not families:
        raise ValueError("empty chain")
    if len(decompositions) != len(families) - 1:
        raise ValueError("one decomposition row per non-terminal family is required")
    ground = families[0].ground

    root = refine_to_partition([families[0]])[0]
    root_source: list[int] = []
    taken: set[int] = set()
    for idx, m in enumerate(families[0].members):
        if m - taken:
            root_source.append(idx)
        taken |= m

    refined: list[Family] = [root]
    sources = root_source  # original member index behind each refined block
    rows_out: list[tuple[Decomposition, ...]] = []

    for level in range(len(families) - 1):
        next_family = families[level + 1]
        member_index = {m: q for q, m in enumerate(next_family.members)}
        row = decompositions[level]

        new_blocks: list[frozenset[int]] = []
        new_sources: list[int] = []
        adapted_row: list[Decomposition] = []
        for block, src in zip(refined[level].members, sources):
            d = row[src]
            used: list[tuple[int, int, frozenset[int]]] = []
            for t, part in enumerate(d.parts):
                for piece in part:
                    q = member_index.get(piece)
                    if q is None:
                        raise ValueError(
                            f"decomposition at level {level + 1} uses a non-member piece"
                        )
                    used.append((q, t, piece))
            used.sort(key=lambda item: (item[0], item[1]))

            parts_new: list[list[frozenset[int]]] = [[] for _ in d.parts]
            seen: set[int] = set()
            for q, t, piece in used:
                fragment = (piece & block) - seen
                seen |= piece & block
                if fragment:
                    frag = frozenset(fragment)
                    parts_new[t].append(frag)
                    new_blocks.append(frag)
                    new_sources.append(q)
            if frozenset(seen) != block:
                raise ValueError(
                    f"decomposition at level {level + 1} does not cover its target"
                )
            adapted_row.append(
                Decomposition(block, tuple(tuple(p) for p in parts_new if p))
            )
        refined.append(Family(ground, tuple(new_blocks)))
        sources = new_sources
        rows_out.append(tuple(adapted_row))
    return tuple(refined), tuple(rows_out)


CadBuilder = Callable[
    [CoarseStructure, EntourageSequence],
    tuple[tuple[Family, ...], tuple[tuple[Decomposition, ...], ...]],
]


@dataclass(frozen=True)
class CadProvider:
    """Decomposition data provider with a fixed piece-count sequence.

    The builder maps (structure, K-sequence) to families V_1..V_r together
    with a (K_i, n_i)-decomposition of every member of V_i over V_{i+1}.
    The piece-count sequence extends by its last entry.
    """

    dims: tuple[int, ...]
    build: CadBuilder

    def __post_init__(self) -> None:
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or any(n < 1 for n in dims):
            raise ValueError("piece-count sequence must be nonempty and positive")

    def dim_at(self, i: int) -> int:
        if i < 1:
            raise ValueError(f"piece-count index must be >= 1, got {i}")
        return self.dims[min(i, len(self.dims)) - 1]


def _validate_cad_data(
    structure: CoarseStructure,
    k_seq: EntourageSequence,
    provider: CadProvider,
    families: tuple[Family, ...],
    decomps: tuple[tuple[Decomposition, ...], ...],
    error: type,
) -> None:
    if not families:
        raise error("provider returned no families")
    if families[0].members != (structure.ground.all_points(),):
        raise error("level 1: first family must be the whole space")
    if len(decomps) != len(families) - 1:
        raise error("provider decomposition rows do not match its families")
    for i, row in enumerate(decomps):
        if len(row) != len(families[i].members):
            raise error(f"level {i + 1}: decomposition row does not match the family")
        for k, member in enumerate(families[i].members):
            report = check_decomposition(
                member, k_seq.at(i + 1), provider.dim_at(i + 1), row[k], families[i + 1]
            )
            if not report.ok:
                raise error(f"level {i + 1}, member {k}: {report.failure}")
    if not is_uniformly_bounded(families[-1], structure):
        raise error(f"level {len(families)}: terminal family is not uniformly bounded")


def cad_to_sfcdc(
    structure: CoarseStructure,
    l_seq: EntourageSequence,
    provider: CadProvider,
) -> SfcdcCertificate:
    """Convert fixed-piece-count decomposition data into a binary certificate.

    K_j is the sequence entry at position n_1 + ... + n_j.  Provider data is
    validated, partition-refined coherently, and each n_j-part decomposition
    is unrolled into n_j binary transitions: each one peels the next layer of
    pieces and bundles the remaining layers into a single set, and the last
    one dissolves the final bundle.  The chain starts at the root {X}, has
    1 + n_1 + ... + n_{r-1} families, the family right after position
    n_1 + ... + n_j is the refined family j+1, and the whole certificate is
    verified before it is returned.
    """
    if l_seq.ground != structure.ground:
        raise ValueError("structure and sequence must share a ground set")

    k_terms: list[Relation] = []
    cum = 0
    j = 1
    while True:
        cum += provider.dim_at(j)
        k_terms.append(l_seq.at(cum))
        if cum >= len(l_seq):
            break
        j += 1
    k_seq = EntourageSequence(structure.ground, tuple(k_terms))

    families, decomps = provider.build(structure, k_seq)
    families = tuple(families)
    decomps = tuple(tuple(row) for row in decomps)
    _validate_cad_data(structure, k_seq, provider, families, decomps, ProviderError)

    if len(families) == 1:
        certificate = SfcdcCertificate((families[0],), ())
        report = check_sfcdc_certificate(structure, l_seq, certificate)
        if not report.ok:
            raise ConstructionError(f"trivial certificate fails its check: {report.failure}")
        return certificate

    refined, refined_rows = refine_chain(families, decomps)
    _validate_cad_data(structure, k_seq, provider, refined, refined_rows, ConstructionError)

    out_families: list[Family] = [refined[0]]
    out_rows: list[tuple[Decomposition, ...]] = []

    for level in range(len(refined) - 1):
        n_j = provider.dim_at(level + 1)
        parents = out_families[-1]
        if parents is not refined[level]:
            raise ConstructionError("unroll lost track of the chain head")

        # Pad each adapted decomposition to exactly n_j layers of pieces.
        padded: list[tuple[tuple[frozenset[int], ...], ...]] = []
        for d in refined_rows[level]:
            parts = list(d.parts) + [()] * (n_j - len(d.parts))
            padded.append(tuple(parts))
        suffixes: list[list[frozenset[int]]] = []
        for parts in padded:
            suffix: list[frozenset[int]] = [frozenset()] * (n_j + 1)
            for t in range(n_j - 1, -1, -1):
                layer = frozenset().union(*parts[t]) if parts[t] else frozenset()
                suffix[t] = suffix[t + 1] | layer
            suffixes.append(suffix)

        roles: dict[frozenset[int], tuple] = {
            member: ("parent", p) for p, member in enumerate(parents.members)
        }
        for s in range(1, n_j + 1):
            if s < n_j:
                members: list[frozenset[int]] = []
                new_roles: dict[frozenset[int], tuple] = {}
                for p in range(len(parents.members)):
                    for t in range(s):
                        for piece in padded[p][t]:
                            members.append(piece)
                            new_roles[piece] = ("piece",)
                    bundle = suffixes[p][s]
                    if bundle:
                        members.append(bundle)
                        new_roles[bundle] = ("bundle", p, s)
                next_fam = Family(structure.ground, tuple(members))
            else:
                next_fam = refined[level + 1]
                new_roles = {m: ("piece",) for m in next_fam.members}

            row: list[Decomposition] = []
            for member in out_families[-1].members:
                role = roles[member]
                if role[0] == "piece":
                    row.append(Decomposition(member, ((member,),)))
                else:
                    p = role[1]
                    start = 0 if role[0] == "parent" else role[2]
                    first_layer = tuple(padded[p][start])
                    rest = suffixes[p][start + 1]
                    parts: list[tuple[frozenset[int], ...]] = []
                    if first_layer:
                        parts.append(first_layer)
                    if rest:
                        parts.append((rest,))
                    row.append(Decomposition(member, tuple(parts)))
            out_rows.append(tuple(row))
            out_families.append(next_fam)
            roles = new_roles

    certificate = SfcdcCertificate(tuple(out_families), tuple(out_rows))
    report = check_sfcdc_certificate(structure, l_seq, certificate)
    if not report.ok:
        raise ConstructionError(f"assembled certificate fails its check: {report.failure}")
    return certificate


def _closure_class_build(
    structure: CoarseStructure, k_seq: EntourageSequence
) -> tuple[tuple[Family, ...], tuple[tuple[Decomposition, ...], ...]]:
    whole = structure.ground.all_points()
    root = Family(structure.ground, (whole,))
    if is_uniformly_bounded(root, structure):
        return (root,), ()
    classes = generate(structure.ground, [k_seq.at(1)]).classes()
    leaf = Family(structure.ground, classes)
    decomposition = Decomposition(whole, (tuple(classes),))
    return (root, leaf), ((decomposition,),)


def closure_class_cad_provider() -> CadProvider:
    """Canonical provider: one level of equivalence classes of the first entry.

    Classes of the closure of K_1 are pairwise K_1-separated, so a single
    part suffices, and their squares union into an entourage, so the chain
    terminates immediately.
    """
    return CadProvider(dims=(1,), build=_closure_class_build)
