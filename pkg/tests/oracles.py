"""Independent brute-force reference implementations.

Everything here works on raw frozensets and integers with straight loops and
shares no code with the library; tests compare library results against these.
"""

import itertools


def o_compose(pairs_a, pairs_b):
    out = set()
    for a, b in pairs_a:
        for b2, c in pairs_b:
            if b == b2:
                out.add((a, c))
    return frozenset(out)


def o_inverse(pairs):
    return frozenset((b, a) for a, b in pairs)


def o_equivalence_closure(n, pairs):
    """Reflexive-symmetric closure followed by Warshall's transitive closure."""
    adj = [[False] * n for _ in range(n)]
    for a in range(n):
        adj[a][a] = True
    for a, b in pairs:
        adj[a][b] = True
        adj[b][a] = True
    for k in range(n):
        for a in range(n):
            for b in range(n):
                if adj[a][k] and adj[k][b]:
                    adj[a][b] = True
    return frozenset((a, b) for a in range(n) for b in range(n) if adj[a][b])


def o_closure_relations(n, generator_pair_sets):
    """Closure of the generators and the diagonal under union, inverse, compose.

    Fully literal worklist enumeration; the set can blow up, so this is only
    usable on very small instances.  The library's membership predicate must
    be the downward (subset) closure of this set.
    """
    diagonal = frozenset((p, p) for p in range(n))
    items = {diagonal}
    items.update(frozenset(g) for g in generator_pair_sets)
    queue = list(items)
    while queue:
        a = queue.pop()
        new = []
        inv = o_inverse(a)
        if inv not in items:
            new.append(inv)
        for b in list(items):
            for c in (a | b, o_compose(a, b), o_compose(b, a)):
                if c not in items and c not in new:
                    new.append(c)
        for c in new:
            items.add(c)
            queue.append(c)
    return items


def o_closure_union_free(n, generator_pair_sets):
    """Closure of the generators and the diagonal under inverse and compose.

    Both operations distribute over union, so the closure that also allows
    unions is exactly the set of finite unions of these elements, and the
    subset-closed membership predicate of the generated structure is
    "contained in the union of this set".
    """
    diagonal = frozenset((p, p) for p in range(n))
    items = {diagonal}
    items.update(frozenset(g) for g in generator_pair_sets)
    queue = list(items)
    while queue:
        a = queue.pop()
        new = [o_inverse(a)]
        for b in list(items):
            new.append(o_compose(a, b))
            new.append(o_compose(b, a))
        for c in new:
            if c not in items:
                items.add(c)
                queue.append(c)
    return items


def o_project(right_size, pairs, axis):
    out = set()
    for a, b in pairs:
        xa, ya = divmod(a, right_size)
        xb, yb = divmod(b, right_size)
        if axis == 1:
            out.add((xa, xb))
        else:
            out.add((ya, yb))
    return frozenset(out)


def o_is_disjoint(members, pairs):
    """Literal double loop over distinct member pairs and their point pairs."""
    for u in members:
        for v in members:
            if u == v:
                continue
            for a in u:
                for b in v:
                    if (a, b) in pairs:
                        return False
    return True


def o_find_decomposition(target, pairs, n, members):
    """Exhaustive assignment search: every candidate goes to a part or unused.

    Straight nested loops, no pruning; exact on guard-sized instances.
    """
    target = frozenset(target)
    candidates = [m for m in members if m <= target]
    for assignment in itertools.product(range(n + 1), repeat=len(candidates)):
        union = set()
        for m, slot in zip(candidates, assignment):
            if slot > 0:
                union |= m
        if union != target:
            continue
        ok = True
        for slot in range(1, n + 1):
            chosen = [m for m, s in zip(candidates, assignment) if s == slot]
            for i in range(len(chosen)):
                for j in range(len(chosen)):
                    if i == j:
                        continue
                    for a in chosen[i]:
                        for b in chosen[j]:
                            if (a, b) in pairs:
                                ok = False
            if not ok:
                break
        if ok:
            return True
    return False
