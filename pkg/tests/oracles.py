"""Independent brute-force oracles the unit tests check the fast paths
against.  Everything here is exhaustive enumeration; nothing shares code
with the algorithms under test."""

from __future__ import annotations

from j2sym import Permutation, PermutationGroup


def closure_elements(degree: int, generators) -> set[tuple[int, ...]]:
    """All group elements by multiply-until-fixed-point."""
    ident = Permutation.identity(degree)
    seen = {ident.images}
    frontier = [ident]
    while frontier:
        cur = frontier.pop()
        for g in generators:
            nxt = cur * g
            if nxt.images not in seen:
                seen.add(nxt.images)
                frontier.append(nxt)
    return seen


def closure_order(degree: int, generators) -> int:
    return len(closure_elements(degree, generators))


def conjugacy_class(group: PermutationGroup, p: Permutation) -> set[tuple[int, ...]]:
    """The class of ``p`` by conjugating with every group element."""
    elements = closure_elements(group.degree, group.generators)
    return {p.conjugate(Permutation(im)).images for im in elements}


def block_systems(group: PermutationGroup) -> list[frozenset[int]]:
    """Every nontrivial block containing point 1, by exhaustive subset
    search (transitive groups of small degree only)."""
    n = group.degree
    found = []
    for mask in range(1, 1 << (n - 1)):
        block = frozenset({1} | {i + 2 for i in range(n - 1) if (mask >> i) & 1})
        if not 1 < len(block) < n or n % len(block):
            continue
        seen = {block}
        queue = [block]
        valid = True
        while queue and valid:
            b = queue.pop()
            for g in group.generators:
                img = frozenset(g[i] for i in b)
                if img in seen:
                    continue
                if any(img & c for c in seen):
                    valid = False
                    break
                seen.add(img)
                queue.append(img)
        if valid:
            found.append(block)
    return found


def is_primitive_brute(group: PermutationGroup) -> bool:
    return not block_systems(group)
