"""Bitset branch-and-bound for maximum independent sets.

Graphs are lists of adjacency bitmasks (Python ints).  Upper bounds come from
a greedy partition of the candidate set into cliques of the graph, i.e. a
greedy colouring of the complement, as in MCQ-style maximum-clique solvers.
"""

from __future__ import annotations

from typing import Iterator, Sequence


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _clique_cover(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    """Greedy clique cover of ``cand``.

    Returns vertices in cover order and, for each, the number of cliques
    opened so far; an independent set inside the first i vertices has at most
    ``bounds[i]`` members.
    """
    order: list[int] = []
    bounds: list[int] = []
    count = 0
    rest = cand
    while rest:
        count += 1
        q = rest
        while q:
            low = q & -q
            v = low.bit_length() - 1
            rest ^= low
            order.append(v)
            bounds.append(count)
            q &= adj[v]
    return order, bounds


def cover_bound(adj: Sequence[int], cand: int) -> int:
    count = 0
    rest = cand
    while rest:
        count += 1
        q = rest
        while q:
            low = q & -q
            rest ^= low
            q &= adj[low.bit_length() - 1]
    return count


def greedy_independent(adj: Sequence[int], cand: int) -> int:
    """Min-degree greedy independent set inside ``cand``; returns a bitmask."""
    chosen = 0
    while cand:
        v = min(_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
        chosen |= 1 << v
        cand &= ~(adj[v] | (1 << v))
    return chosen


def max_independent_size(adj: Sequence[int], cand: int | None = None) -> int:
    """Independence number of the graph restricted to ``cand``."""
    if cand is None:
        cand = (1 << len(adj)) - 1
    best = [greedy_independent(adj, cand).bit_count()]

    def expand(size: int, p: int) -> None:
        order, bounds = _clique_cover(adj, p)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] <= best[0]:
                return
            v = order[i]
            bit = 1 << v
            sub = p & ~adj[v] & ~bit
            if sub:
                expand(size + 1, sub)
            elif size + 1 > best[0]:
                best[0] = size + 1
            p &= ~bit

    expand(0, cand)
    return best[0]


def has_independent_set(adj: Sequence[int], k: int, cand: int | None = None) -> bool:
    """Decide whether an independent set of size ``k`` exists inside ``cand``."""
    if cand is None:
        cand = (1 << len(adj)) - 1
    if k <= 0:
        return True
    if greedy_independent(adj, cand).bit_count() >= k:
        return True

    def expand(size: int, p: int) -> bool:
        order, bounds = _clique_cover(adj, p)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] < k:
                return False
            v = order[i]
            bit = 1 << v
            if size + 1 >= k:
                return True
            sub = p & ~adj[v] & ~bit
            if sub and expand(size + 1, sub):
                return True
            p &= ~bit
        return False

    return expand(0, cand)


def iter_independent_sets(
    adj: Sequence[int], min_size: int, cand: int | None = None
) -> Iterator[int]:
    """Yield every independent set of size >= ``min_size`` as a bitmask.

    Sets come out in lexicographic order of their sorted vertex lists.
    """
    if cand is None:
        cand = (1 << len(adj)) - 1

    def walk(chosen: int, size: int, p: int) -> Iterator[int]:
        if size >= min_size:
            yield chosen
        while p:
            if size + cover_bound(adj, p) < min_size:
                return
            low = p & -p
            v = low.bit_length() - 1
            p ^= low
            yield from walk(chosen | low, size + 1, p & ~adj[v])

    yield from walk(0, 0, cand)


def lex_first_independent(adj: Sequence[int], k: int, cand: int | None = None) -> int | None:
    """Lexicographically least independent set of size exactly ``k``, or None."""
    if cand is None:
        cand = (1 << len(adj)) - 1

    def walk(chosen: int, size: int, p: int) -> int | None:
        if size == k:
            return chosen
        while p:
            if size + cover_bound(adj, p) < k:
                return None
            low = p & -p
            v = low.bit_length() - 1
            p ^= low
            found = walk(chosen | low, size + 1, p & ~adj[v])
            if found is not None:
                return found
        return None

    return walk(0, 0, cand)


def maximum_independent_sets(adj: Sequence[int], cand: int | None = None) -> tuple[int, list[int]]:
    """Independence number and all maximum independent sets (lex order)."""
    alpha = max_independent_size(adj, cand)
    sets = [s for s in iter_independent_sets(adj, alpha, cand) if s.bit_count() == alpha]
    return alpha, sets
