"""Exact and Monte Carlo tools for intersecting families and random Kneser graphs."""

from .combinat import (
    DomainError, LogReal, NumericError, ResourceError, binom_exact, entropy, gen_binom,
    solve_binom_x, solve_theta,
)
from .kneser import (
    InducedGraph, SimpleGraph, adjacent, alpha_exact, disjoint_pairs, induced_graph,
    kneser_graph, max_intersecting,
)
from .setfam import Family, KneserParams, ParseError, parse_family, rank, serialize_family, unrank

__version__ = "0.1.0"

__all__ = [
    "DomainError", "LogReal", "NumericError", "ResourceError", "binom_exact", "entropy",
    "gen_binom", "solve_binom_x", "solve_theta", "InducedGraph", "SimpleGraph", "adjacent",
    "alpha_exact", "disjoint_pairs", "induced_graph", "kneser_graph", "max_intersecting",
    "Family", "KneserParams", "ParseError", "parse_family", "rank", "serialize_family",
    "unrank", "__version__",
]
