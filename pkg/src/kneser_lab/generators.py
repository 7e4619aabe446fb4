"""Seeded family generators used by the verification suites."""

from __future__ import annotations

import random

from .setfam import Family, all_rsets


def random_family(n: int, r: int, size: int, rng: random.Random) -> Family:
    return Family(n, r, rng.sample(all_rsets(n, r), size))


def perturbed_star(n: int, r: int, swaps: int, rng: random.Random, center: int | None = None) -> Family:
    """A star with ``swaps`` members replaced by sets avoiding the centre (size N)."""
    masks = all_rsets(n, r)
    x = rng.randrange(1, n + 1) if center is None else center
    bit = 1 << (x - 1)
    star = [m for m in masks if m & bit]
    outside = [m for m in masks if not m & bit]
    swaps = min(swaps, len(star), len(outside))
    kept = rng.sample(star, len(star) - swaps)
    return Family(n, r, kept + rng.sample(outside, swaps))


def greedy_sparse_family(n: int, r: int, size: int, rng: random.Random) -> Family:
    """Grow a family from a random star, always adding a set that creates the
    fewest new disjoint pairs (random tie-break).  An adversary for lower
    bounds on e(A)."""
    masks = all_rsets(n, r)
    x = rng.randrange(n)
    chosen = [m for m in masks if m >> x & 1][:size]
    rest = [m for m in masks if not m >> x & 1]
    while len(chosen) < size:
        costs = [sum(1 for c in chosen if c & m == 0) for m in rest]
        low = min(costs)
        pick = rng.choice([i for i, c in enumerate(costs) if c == low])
        chosen.append(rest.pop(pick))
    return Family(n, r, chosen)
