"""Deterministic disjoint-pair bounds: Hilton-Milner, star proximity,
induced matchings and the two lower bounds on e(A)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import _mis
from .combinat import DomainError
from .kneser import (
    DEFAULT_SOLVER_CAP, SimpleGraph, _check_cap, common_element, kneser_graph,
    max_intersecting,
)
from .setfam import Family, KneserParams


@dataclass(frozen=True)
class StarProximity:
    center: int
    star_size: int
    deficiency: int
    ell: int | None = None


def ell(f: Family, cap: int | None = None) -> int:
    """Distance of ``f`` from being intersecting: |f| - |f*|."""
    size, _ = max_intersecting(f, cap)
    return len(f) - size


def hm_threshold(p: KneserParams) -> int:
    """N - M + 2: intersecting families at least this large lie in a star."""
    p.require_kneser_range()
    return p.N - p.M + 2


def verify_hilton_milner(n: int, r: int) -> tuple[int, list[Family]]:
    """Enumerate every intersecting family of size >= N - M + 2.

    Returns how many were checked and the ones not contained in a star
    (empty when the theorem holds for this (n, r)).
    """
    params = KneserParams(n, r)
    threshold = hm_threshold(params)
    g = kneser_graph(n, r)
    checked = 0
    bad = []
    for chosen in _mis.iter_independent_sets(g.adj, threshold):
        checked += 1
        fam = g.family.subset(m for i, m in enumerate(g.family.masks) if chosen >> i & 1)
        if common_element(fam) is None:
            bad.append(fam)
    return checked, bad


def best_star_center(f: Family, cap: int | None = None, with_ell: bool = True) -> StarProximity:
    """The x maximising |f_x| (smallest x on ties) and its deficiency N - |f_x|."""
    counts = [0] * (f.n + 1)
    for m in f.masks:
        x = 1
        while m:
            if m & 1:
                counts[x] += 1
            m >>= 1
            x += 1
    center = max(range(1, f.n + 1), key=lambda x: (counts[x], -x))
    star_size = counts[center]
    return StarProximity(
        center=center,
        star_size=star_size,
        deficiency=f.params.N - star_size,
        ell=ell(f, cap) if with_ell else None,
    )


def empirical_friedgut_ratio(families: Iterable[Family], cap: int | None = None) -> float:
    """max over families with ell >= 1 of deficiency / ell.

    The measured stand-in for the stability constant C in |A_x| >= N - C*ell.
    """
    worst = 0.0
    for f in families:
        prox = best_star_center(f, cap)
        if prox.ell:
            worst = max(worst, prox.deficiency / prox.ell)
    return worst


def _conflict_graph(g: SimpleGraph) -> tuple[list[tuple[int, int]], list[int]]:
    edges = g.edges()
    closed = [a | (1 << v) for v, a in enumerate(g.adj)]
    reach = [closed[u] | closed[v] for u, v in edges]
    conflict = []
    for i, (u, v) in enumerate(edges):
        row = 0
        for j, (x, y) in enumerate(edges):
            if j != i and (reach[i] >> x & 1 or reach[i] >> y & 1):
                row |= 1 << j
        conflict.append(row)
    return edges, conflict


def max_induced_matching(g: SimpleGraph, cap: int | None = None) -> list[tuple[int, int]]:
    """A maximum induced matching, found as an independent set of the
    conflict graph on edges (two edges conflict when they share or are
    joined by an edge)."""
    cap = DEFAULT_SOLVER_CAP if cap is None else cap
    _check_cap(g.num_edges, cap)
    edges, conflict = _conflict_graph(g)
    if not edges:
        return []
    size = _mis.max_independent_size(conflict)
    chosen = _mis.lex_first_independent(conflict, size)
    return [e for i, e in enumerate(edges) if chosen >> i & 1]


def induced_matching_number(g: SimpleGraph, cap: int | None = None) -> int:
    return len(max_induced_matching(g, cap))


def edge_lb_induced_matching(num_vertices: int, alpha: int, m: int) -> Fraction:
    """k^2 / (4m) with k = |V| - alpha: a lower bound on the edge count."""
    if alpha > num_vertices or alpha < 0:
        raise DomainError("need 0 <= alpha <= num_vertices")
    k = num_vertices - alpha
    if k == 0:
        return Fraction(0)
    if m < 1:
        raise DomainError("m = 0 forces an edgeless graph, so alpha = |V|")
    return Fraction(k * k, 4 * m)


def edge_lb_setpairs(f: Family, cap: int | None = None) -> Fraction:
    """ell(f)^2 / (2R)."""
    return Fraction(ell(f, cap) ** 2, 2 * f.params.R)


def case1_edge_lb(f: Family, cap: int | None = None) -> int | None:
    """ell (M - ell) for size-N families whose largest intersecting subfamily
    is checked to lie in a star; None when that regime does not apply."""
    p = f.params
    if len(f) != p.N:
        raise DomainError(f"family has {len(f)} members, expected N = {p.N}")
    size, core = max_intersecting(f, cap)
    ell_ = len(f) - size
    if ell_ == 0:
        return 0
    if ell_ > p.M - 2:
        return None
    if best_star_center(core, with_ell=False).star_size != len(core):
        return None
    return ell_ * (p.M - ell_)
