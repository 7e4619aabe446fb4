"""Exact shadows, the Lovasz form of Kruskal-Katona, and a shadow-based
lower bound on the disjoint pairs of a size-N family."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

from .combinat import DomainError, gen_binom, solve_binom_x
from .extremal import best_star_center
from .kneser import max_intersecting
from .setfam import Family, elements_of

DEFAULT_SHADOW_BUDGET = 5_000_000


@dataclass(frozen=True)
class ShadowBound:
    lovasz_x: float
    lovasz_bound: float
    exact_size: int | None = None


def _k_subsets(mask: int, k: int):
    bits = [1 << (x - 1) for x in elements_of(mask)]
    for combo in combinations(bits, k):
        yield sum(combo)


def shadow_exact(f: Family, k: int) -> Family:
    """All k-sets contained in some member of f."""
    if k > f.r or k < 0:
        raise DomainError(f"shadow level k={k} must satisfy 0 <= k <= r={f.r}")
    out: set[int] = set()
    for m in f.masks:
        out.update(_k_subsets(m, k))
    return Family(f.n, k, out)


def lovasz_shadow_bound(size: int, r: int, k: int) -> ShadowBound:
    """If |A| = C(x, r) then |shadow_k(A)| >= C(x, k)."""
    if k > r:
        raise DomainError(f"need k <= r, got k={k}, r={r}")
    if size < 1:
        raise DomainError("size must be >= 1")
    x = solve_binom_x(size, r)
    return ShadowBound(lovasz_x=x, lovasz_bound=gen_binom(x, k))


def shadow_bound(f: Family, k: int) -> ShadowBound:
    """Lovasz bound together with the exact shadow size of ``f``."""
    b = lovasz_shadow_bound(len(f), f.r, k)
    return ShadowBound(b.lovasz_x, b.lovasz_bound, len(shadow_exact(f, k)))


def _drop_element(mask: int, x: int) -> int:
    """Relabel [n] minus {x} onto [n-1], preserving order."""
    low = mask & ((1 << (x - 1)) - 1)
    return low | ((mask >> x) << (x - 1))


@dataclass
class KKTrace:
    ell: int = 0
    center: int | None = None
    star_size: int | None = None
    deficiency: int | None = None
    outside: list[list[int]] = field(default_factory=list)
    complements: list[list[int]] = field(default_factory=list)
    complement_size: int | None = None
    shadow_level: int | None = None
    shadow_size: int | None = None
    used_lovasz: bool = False
    bound: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def kk_edge_lower_bound(
    f: Family, cap: int | None = None, budget: int = DEFAULT_SHADOW_BUDGET
) -> tuple[int, KKTrace]:
    """Lower bound on e(f) for |f| = N from the shadow of the complements of
    ell members outside the best star.

    The best centre x* plays the role of the fixed element; the complements
    live on [n] minus {x*}, relabelled onto [n-1].  The exact star deficiency
    N - |f_x*| is subtracted, so the result never exceeds e(f).
    """
    p = f.params
    if len(f) != p.N:
        raise DomainError(f"family has {len(f)} members, expected N = {p.N}")
    size, _ = max_intersecting(f, cap)
    ell_ = len(f) - size
    trace = KKTrace(ell=ell_)
    if ell_ == 0:
        return 0, trace

    prox = best_star_center(f, with_ell=False)
    x = prox.center
    trace.center, trace.star_size, trace.deficiency = x, prox.star_size, prox.deficiency
    bit = 1 << (x - 1)
    outside = [m for m in f.masks if not m & bit][:ell_]
    full = (1 << (p.n - 1)) - 1
    comps = [full ^ _drop_element(m, x) for m in outside]
    level = p.r - 1
    width = p.n - p.r - 1
    trace.outside = [elements_of(m) for m in outside]
    trace.complements = [elements_of(m) for m in comps]
    trace.complement_size = width
    trace.shadow_level = level

    if ell_ * math.comb(width, level) <= budget:
        shadow_size = len(shadow_exact(Family(p.n - 1, width, comps), level))
    else:
        b = lovasz_shadow_bound(ell_, width, level)
        shadow_size = math.ceil(b.lovasz_bound - 1e-9)
        trace.used_lovasz = True
    trace.shadow_size = shadow_size
    trace.bound = max(0, shadow_size - prox.deficiency)
    return trace.bound, trace
