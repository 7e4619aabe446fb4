"""Kneser-graph semantics on families: adjacency, disjoint pairs, exact alpha."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _mis
from .combinat import ResourceError
from .setfam import Family, KneserParams

__all__ = [
    "KneserParams", "SimpleGraph", "InducedGraph", "adjacent", "induced_graph",
    "kneser_graph", "disjoint_pairs", "alpha_exact", "max_intersecting",
    "maximum_witnesses", "common_element", "is_star", "DEFAULT_SOLVER_CAP",
]

DEFAULT_SOLVER_CAP = 600


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on vertices 0..len(adj)-1 given by adjacency bitmasks."""

    adj: tuple[int, ...]

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = [0] * num_vertices
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(tuple(adj))

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    @property
    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, a in enumerate(self.adj):
            a >>= u + 1
            v = u + 1
            while a:
                if a & 1:
                    out.append((u, v))
                a >>= 1
                v += 1
        return out

    def induced_edges(self, vertex_mask: int) -> int:
        total = 0
        rest = vertex_mask
        while rest:
            low = rest & -rest
            total += (self.adj[low.bit_length() - 1] & vertex_mask).bit_count()
            rest ^= low
        return total // 2


@dataclass(frozen=True)
class InducedGraph(SimpleGraph):
    """The subgraph of K(n, r) induced by a family; vertex i is ``family.masks[i]``."""

    family: Family = field(default=None, compare=False)


def adjacent(a: int, b: int) -> bool:
    """Two r-sets are adjacent in the Kneser graph iff they are disjoint."""
    return a & b == 0


def induced_graph(f: Family) -> InducedGraph:
    masks = f.masks
    adj = []
    for a in masks:
        row = 0
        for j, b in enumerate(masks):
            if a & b == 0:
                row |= 1 << j
        adj.append(row)
    return InducedGraph(tuple(adj), f)


def kneser_graph(n: int, r: int) -> InducedGraph:
    return induced_graph(Family.full(n, r))


def disjoint_pairs(f: Family) -> int:
    """e(f): the number of unordered disjoint pairs of members."""
    masks = f.masks
    count = 0
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a & b == 0:
                count += 1
    return count


def _check_cap(size: int, cap: int | None) -> None:
    cap = DEFAULT_SOLVER_CAP if cap is None else cap
    if size > cap:
        raise ResourceError(
            f"{size} vertices exceeds the exact solver cap of {cap}; use the bound "
            "functions in kneser_lab.extremal instead"
        )


def _select(masks: Sequence[int], chosen: int, f: Family) -> Family:
    return f.subset(m for i, m in enumerate(masks) if chosen >> i & 1)


def alpha_exact(g: InducedGraph, cap: int | None = None) -> tuple[int, Family]:
    """Independence number and the lexicographically least maximum witness.

    Lexicographic order is on the sorted lists of member colex ranks.
    """
    _check_cap(g.num_vertices, cap)
    alpha = _mis.max_independent_size(g.adj)
    witness = _mis.lex_first_independent(g.adj, alpha)
    return alpha, _select(g.family.masks, witness, g.family)


def max_intersecting(f: Family, cap: int | None = None) -> tuple[int, Family]:
    """Size of the largest intersecting subfamily and a deterministic witness."""
    return alpha_exact(induced_graph(f), cap)


def maximum_witnesses(g: InducedGraph, cap: int | None = None) -> list[Family]:
    """Every maximum independent set of ``g``, in lexicographic order."""
    _check_cap(g.num_vertices, cap)
    _, sets = _mis.maximum_independent_sets(g.adj)
    return [_select(g.family.masks, s, g.family) for s in sets]


def common_element(f: Family) -> int | None:
    """Smallest element shared by every member, or None (also for empty f)."""
    if not len(f):
        return None
    inter = (1 << f.n) - 1
    for m in f.masks:
        inter &= m
    if not inter:
        return None
    return (inter & -inter).bit_length()


def is_star(f: Family) -> bool:
    """True iff f is the full star at some element."""
    x = common_element(f)
    return x is not None and len(f) == f.params.N


def _milp_max(num_vertices: int, edges: Sequence[tuple[int, int]], extra=None, time_limit: float = 300.0) -> int:
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    rows = np.repeat(np.arange(len(edges)), 2)
    cols = np.array(edges, dtype=np.int64).reshape(-1)
    a = coo_matrix((np.ones(len(cols)), (rows, cols)), shape=(len(edges), num_vertices))
    constraints = [LinearConstraint(a.tocsr(), 0, 1)] if len(edges) else []
    if extra is not None:
        constraints.append(extra)
    res = milp(
        -np.ones(num_vertices), constraints=constraints, integrality=np.ones(num_vertices),
        bounds=Bounds(0, 1), options={"time_limit": time_limit},
    )
    if res.status != 0:
        raise ResourceError(f"MILP did not reach optimality: {res.message}")
    return int(round(-res.fun))


def alpha_milp(g: SimpleGraph) -> int:
    """Independence number by integer programming (HiGHS).

    A second route for instances where clique-cover bounds are weak, such as
    K(9, 4); the bitset branch-and-bound stays the primary solver.
    """
    return _milp_max(g.num_vertices, g.edges())


def max_non_star_intersecting(n: int, r: int) -> int:
    """Largest intersecting family in [n]^(r) that is not a full star (by MILP).

    A value below N certifies that every maximum intersecting family is a star.
    """
    import numpy as np
    from scipy.optimize import LinearConstraint

    g = kneser_graph(n, r)
    stars = np.array([[1.0 if m >> x & 1 else 0.0 for m in g.family.masks] for x in range(n)])
    return _milp_max(g.num_vertices, g.edges(), LinearConstraint(stars, 0, g.family.params.N - 1))
