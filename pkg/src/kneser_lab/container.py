"""Graph containers for sparse vertex sets, and the Kneser-graph counting bounds
built on them."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinat import DomainError
from .kneser import SimpleGraph, kneser_graph
from .setfam import Family, KneserParams


class ContainerInvariantError(AssertionError):
    """A certified container guarantee failed; this is a bug, not bad input."""


class PreconditionError(ValueError):
    """The input set is denser than the stated parameter ``a`` allows."""

    def __init__(self, message: str, mu: Fraction):
        super().__init__(message)
        self.mu = mu


def as_fraction(x: Fraction | int | str | float) -> Fraction:
    """Accept ints, Fractions and "num/den" strings exactly; floats via str."""
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def _mask(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def _members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


class GraphOracle:
    """A fixed graph with a fixed linear order of its vertices.

    ``forward[v]`` is the bitmask of neighbours of ``v`` that come after it.
    """

    def __init__(self, adj: Sequence[int], order: Sequence[int] | None = None):
        self.adj = tuple(adj)
        n = len(self.adj)
        self.order = tuple(range(n)) if order is None else tuple(order)
        if sorted(self.order) != list(range(n)):
            raise ValueError("order must be a permutation of the vertices")
        after = 0
        forward = [0] * n
        for v in reversed(self.order):
            forward[v] = self.adj[v] & after
            after |= 1 << v
        self.forward = tuple(forward)
        degrees = [a.bit_count() for a in self.adj]
        self.num_edges = sum(degrees) // 2
        self.max_degree = max(degrees, default=0)
        self.avg_degree = Fraction(2 * self.num_edges, n) if n else Fraction(0)

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    @classmethod
    def from_graph(cls, g: SimpleGraph, order: Sequence[int] | None = None) -> "GraphOracle":
        return cls(g.adj, order)

    @classmethod
    def kneser(cls, n: int, r: int, seed: int | None = None) -> "GraphOracle":
        """K(n, r) with vertex i = the r-set of colex rank i.

        The order is colex unless ``seed`` is given, in which case it is a
        seeded random permutation.
        """
        g = kneser_graph(n, r)
        order = None
        if seed is not None:
            order = list(range(g.num_vertices))
            random.Random(seed).shuffle(order)
        return cls(g.adj, order)

    def induced_edges(self, mask: int) -> int:
        total = 0
        rest = mask
        while rest:
            low = rest & -rest
            total += (self.adj[low.bit_length() - 1] & mask).bit_count()
            rest ^= low
        return total // 2

    def mu(self, vertices: Iterable[int] | int) -> Fraction:
        """Edges induced by the set, divided by the total vertex count."""
        return Fraction(self.induced_edges(_mask(vertices)), self.num_vertices)


def backward_threshold(a: Fraction, b: Fraction, d: Fraction) -> int:
    """Least integer strictly greater than sqrt(a*b*d), computed exactly."""
    q = a * b * d
    return math.isqrt(q.numerator // q.denominator) + 1


def _le_plus_sqrt(lhs: Fraction, coef: Fraction, radicand: Fraction) -> bool:
    """lhs <= coef * sqrt(radicand), exactly (coef, radicand >= 0)."""
    return lhs <= 0 or lhs * lhs <= coef * coef * radicand


@dataclass
class ContainerRun:
    fingerprint: tuple[int, ...]
    container: tuple[int, ...]
    k: int
    a: Fraction
    b: Fraction
    t1: tuple[int, ...]
    t2: tuple[int, ...]
    num_vertices: int
    avg_degree: Fraction
    max_degree: int
    mu_container: Fraction
    bounds: dict = field(default_factory=dict)

    @property
    def t1_size(self) -> int:
        return len(self.t1)

    @property
    def t2_size(self) -> int:
        return len(self.t2)

    def to_json(self) -> dict:
        return {
            "fingerprint": list(self.fingerprint),
            "container": list(self.container),
            "k": self.k,
            "a": str(self.a),
            "b": str(self.b),
            "t1_size": self.t1_size,
            "t2_size": self.t2_size,
            "num_vertices": self.num_vertices,
            "avg_degree": str(self.avg_degree),
            "max_degree": self.max_degree,
            "mu_container": str(self.mu_container),
            "bounds": self.bounds,
        }


def _run_pass(g: GraphOracle, in_u, k: int, bd: Fraction):
    n = g.num_vertices
    count = [0] * n
    gamma = 0
    t = 0
    removed = 0
    t1: list[int] = []
    t2: list[int] = []
    for v in g.order:
        bit = 1 << v
        take = False
        if gamma & bit:
            removed |= bit
            if in_u(v):
                t1.append(v)
                take = True
        elif (g.forward[v] & ~gamma).bit_count() >= bd:
            removed |= bit
            if in_u(v):
                t2.append(v)
                take = True
        if take:
            t |= bit
            fwd = g.forward[v]
            while fwd:
                low = fwd & -fwd
                w = low.bit_length() - 1
                count[w] += 1
                if count[w] == k:
                    gamma |= low
                fwd ^= low
    a_mask = ((1 << n) - 1) & ~removed
    return t, a_mask | t, t1, t2


def build_container(
    g: GraphOracle,
    u: Iterable[int] | int,
    a: Fraction | int | str,
    b: Fraction | int | str,
) -> ContainerRun:
    """Fingerprint T and container C(T) for a set U with mu(U) <= a.

    One pass over the vertices in the oracle's order.  A vertex with at least
    k backward neighbours in the current T is dropped from the container
    (and joins T if it is in U); otherwise it is dropped when at least b*d of
    its forward neighbours are still outside that set.  C(T) depends on T
    alone.  All three certified guarantees are checked before returning.
    """
    a, b = as_fraction(a), as_fraction(b)
    if a < 0 or b <= 0:
        raise DomainError("need a >= 0 and b > 0")
    u_mask = _mask(u)
    mu_u = g.mu(u_mask)
    if mu_u > a:
        raise PreconditionError(f"mu(U) = {mu_u} exceeds a = {a}", mu_u)
    d = g.avg_degree
    k = backward_threshold(a, b, d)
    bd = b * d
    t, c, t1, t2 = _run_pass(g, lambda v: u_mask >> v & 1, k, bd)
    run = ContainerRun(
        fingerprint=_members(t),
        container=_members(c),
        k=k, a=a, b=b,
        t1=tuple(t1), t2=tuple(t2),
        num_vertices=g.num_vertices,
        avg_degree=d,
        max_degree=g.max_degree,
        mu_container=g.mu(c),
    )
    _certify(g, run, u_mask, t, c)
    return run


def _certify(g: GraphOracle, run: ContainerRun, u_mask: int, t: int, c: int) -> None:
    nv = g.num_vertices
    bd = run.b * run.avg_degree
    if t & ~u_mask or u_mask & ~c:
        raise ContainerInvariantError("T subset U subset C violated")
    e_u = g.induced_edges(u_mask)
    if run.t1_size * run.k > e_u:
        raise ContainerInvariantError(f"|T1| * k = {run.t1_size * run.k} > e(U) = {e_u}")
    if bd == 0:
        run.bounds = {"fingerprint_size": math.inf, "mu_container": math.inf, "vacuous": True}
        return
    if run.t2_size * bd > run.k * nv:
        raise ContainerInvariantError("|T2| * b * d exceeds k * |V|")
    ratio = run.a / bd
    size_ok = _le_plus_sqrt(len(run.fingerprint) - nv / bd, Fraction(2 * nv), ratio)
    mu_ok = _le_plus_sqrt(run.mu_container - run.max_degree / bd - bd,
                          Fraction(2 * run.max_degree), ratio)
    root = math.sqrt(ratio)
    run.bounds = {
        "fingerprint_size": 2 * nv * root + float(nv / bd),
        "mu_container": 2 * run.max_degree * root + float(run.max_degree / bd) + float(bd),
        "vacuous": False,
    }
    if not size_ok:
        raise ContainerInvariantError(
            f"|T| = {len(run.fingerprint)} exceeds {run.bounds['fingerprint_size']}")
    if not mu_ok:
        raise ContainerInvariantError(
            f"mu(C) = {run.mu_container} exceeds {run.bounds['mu_container']}")


def reconstruct_container(
    g: GraphOracle, t: Iterable[int] | int, a: Fraction | int | str, b: Fraction | int | str
) -> tuple[int, ...]:
    """Replay the pass with T itself as the membership oracle."""
    a, b = as_fraction(a), as_fraction(b)
    t_mask = _mask(t)
    d = g.avg_degree
    _, c, _, _ = _run_pass(g, lambda v: t_mask >> v & 1, backward_threshold(a, b, d), b * d)
    return _members(c)


def backward_accounting_holds(g: GraphOracle, run: ContainerRun) -> bool:
    """Each T1 vertex had >= k backward neighbours in T when it was inserted."""
    pos = {v: i for i, v in enumerate(g.order)}
    t = run.fingerprint
    for v in run.t1:
        earlier = sum(1 for w in t if pos[w] < pos[v] and g.adj[v] >> w & 1)
        if earlier < run.k:
            return False
    return True


def kneser_container(
    family: Family, m: int, beta: Fraction | int | str, seed: int | None = None
) -> tuple[GraphOracle, ContainerRun]:
    """Container of a family with e(family) <= m in K(n, r), taking a = m/V, b = beta."""
    oracle = GraphOracle.kneser(family.n, family.r, seed)
    return oracle, build_container(oracle, family.ranks, Fraction(m, family.params.V), beta)


# --- Counting bounds on K(n, r) -------------------------------------------------


def log_binom_partial_sum(v: int, k: int) -> float:
    """log of sum_{j=0}^{k} C(v, j)."""
    if k < 0:
        return -math.inf
    if k >= v:
        return v * math.log(2)
    if 2 * k > v:
        tail = math.exp(log_binom_partial_sum(v, v - k - 1) - v * math.log(2))
        return v * math.log(2) + math.log1p(-tail)
    log_top = math.lgamma(v + 1) - math.lgamma(k + 1) - math.lgamma(v - k + 1)
    total = 1.0
    term = 1.0
    j = k
    while j > 0:
        term *= j / (v - j + 1)
        total += term
        if term < 1e-18 * total:
            break
        j -= 1
    return log_top + math.log(total)


def _check_strip(p: KneserParams, epsilon: float) -> None:
    if not 0 < epsilon < 0.5:
        raise DomainError("epsilon must lie in (0, 1/2)")
    if not (epsilon * p.n <= p.r <= (0.5 - epsilon) * p.n):
        raise DomainError(
            f"(n, r) = ({p.n}, {p.r}) outside eps*n <= r <= (1/2 - eps)*n for eps={epsilon}")


def c_hat(epsilon: float) -> float:
    return 20.0 / epsilon**2


@dataclass(frozen=True)
class BabycontParams:
    epsilon: float
    beta: float
    m: int
    C_hat: float
    k1: float
    k2: float
    log_container_count: float
    vacuous: bool


def babycont_params(p: KneserParams, epsilon: float, beta: float, m: int) -> BabycontParams:
    """Fingerprint bound k1, container excess k2 and the log container count.

    ``vacuous`` flags k1 >= V/3, where the counting bound is no longer usable.
    """
    _check_strip(p, epsilon)
    if beta <= 0:
        raise DomainError("beta must be positive")
    if m < 0:
        raise DomainError("m must be non-negative")
    ch = c_hat(epsilon)
    ratio = p.N / (beta * p.M)
    k1 = ch * (ratio + math.sqrt(m * ratio))
    k2 = k1 + ch * beta * p.N
    k1_floor = math.floor(k1) if math.isfinite(k1) else p.V
    return BabycontParams(
        epsilon=epsilon, beta=beta, m=m, C_hat=ch, k1=k1, k2=k2,
        log_container_count=log_binom_partial_sum(p.V, min(k1_floor, p.V)),
        vacuous=3 * k1 >= p.V,
    )


def ym_log_bound_general(p: KneserParams, epsilon: float, m: int, beta: float) -> float:
    """log of 2 exp(C n (beta N + 2N/(beta M) + (4 m N/(beta M))^(1/2)))."""
    if beta <= 0:
        raise DomainError("beta must be positive")
    ratio = p.N / (beta * p.M)
    return math.log(2) + c_hat(epsilon) * p.n * (beta * p.N + 2 * ratio + math.sqrt(4 * m * ratio))


def ym_log_bound(p: KneserParams, epsilon: float, m: int, beta: float | None = None) -> float:
    """log of the bound on the number of size-N families with exactly m disjoint pairs.

    For m >= N / M^(1/2) this is 10 C n (m N^2 / M)^(1/3); below that the
    general form is used with the caller's ``beta``.
    """
    if m * m * p.M >= p.N * p.N:
        log_q = (math.log(m) + 2 * math.log(p.N) - math.log(p.M)) / 3
        return 10 * c_hat(epsilon) * p.n * math.exp(log_q)
    if beta is None:
        raise DomainError("m < N / M^(1/2): the general form needs an explicit beta")
    return ym_log_bound_general(p, epsilon, m, beta)


def supersat_lb(p: KneserParams, k: int) -> Fraction:
    """k M / 2: disjoint pairs forced in any family of size N + k."""
    p.require_kneser_range()
    if not 0 <= k <= p.V - p.N:
        raise DomainError(f"k = {k} outside [0, V - N = {p.V - p.N}]")
    return Fraction(k * p.M, 2)


def supersat_size_bound(p: KneserParams, mu: Fraction) -> Fraction:
    """Largest size a family with mu(family) = mu can have: N + 2 mu V / M."""
    return p.N + 2 * mu * p.V / p.M

