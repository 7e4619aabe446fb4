"""Theorem-instance verification suites driven by ``kneser-lab verify``.

Each suite returns a :class:`Report`; ``passed`` is False as soon as one
checked instance violates its inequality, and the offending family is kept
for serialisation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import _mis
from .combinat import binom_exact
from .container import GraphOracle, build_container, reconstruct_container, supersat_lb
from .extremal import (
    edge_lb_setpairs, induced_matching_number, verify_hilton_milner,
)
from .generators import greedy_sparse_family, perturbed_star, random_family
from .kneser import disjoint_pairs, is_star, kneser_graph, maximum_witnesses
from .setfam import Family, KneserParams
from .shadow import kk_edge_lower_bound, lovasz_shadow_bound, shadow_exact


@dataclass
class Report:
    suite: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    checked: int = 0
    counterexample: Family | None = None

    def fail(self, message: str, family: Family | None = None) -> None:
        if self.passed:
            self.counterexample = family
        self.passed = False
        self.lines.append("FAIL " + message)


def verify_ekr(n: int, r: int, **_) -> Report:
    rep = Report("ekr")
    p = KneserParams(n, r)
    g = kneser_graph(n, r)
    witnesses = maximum_witnesses(g)
    alpha = len(witnesses[0]) if witnesses else 0
    rep.checked = len(witnesses)
    if alpha != p.N:
        rep.fail(f"alpha={alpha} != N={p.N}", witnesses[0] if witnesses else None)
        return rep
    if n > 2 * r:
        bad = [w for w in witnesses if not is_star(w)]
        if bad:
            rep.fail(f"{len(bad)} maximum witnesses are not stars", bad[0])
            return rep
        rep.lines.append(f"alpha={alpha}=N; {len(witnesses)} maximum witnesses, all stars")
    else:
        rep.lines.append(f"alpha={alpha}=N; {len(witnesses)} maximum witnesses (n = 2r, uniqueness not claimed)")
    return rep


def verify_hm(n: int, r: int, **_) -> Report:
    rep = Report("hilton-milner")
    p = KneserParams(n, r)
    checked, bad = verify_hilton_milner(n, r)
    rep.checked = checked
    threshold = p.N - p.M + 2
    if bad:
        rep.fail(f"{len(bad)} nontrivial intersecting families of size >= {threshold}", bad[0])
    else:
        rep.lines.append(f"threshold N-M+2={threshold}; {checked} intersecting families checked, all trivial")
    return rep


def verify_matching(n: int, r: int, **_) -> Report:
    rep = Report("matching")
    m = induced_matching_number(kneser_graph(n, r))
    expected = binom_exact(2 * r - 1, r - 1)
    rep.checked = 1
    if m != expected:
        rep.fail(f"m={m} != C({2 * r - 1},{r - 1})={expected}")
    else:
        rep.lines.append(f"m={m}=C({2 * r - 1},{r - 1})")
    return rep


def _random_sizes(p: KneserParams, trials: int, rng: random.Random) -> list[int]:
    return [rng.randint(1, p.V) for _ in range(trials)]


def verify_setpairs(n: int, r: int, trials: int = 200, seed: int = 0, **_) -> Report:
    rep = Report("setpairs")
    p = KneserParams(n, r)
    rng = random.Random(seed)
    margin = None
    for size in _random_sizes(p, trials, rng):
        f = random_family(n, r, size, rng)
        e = disjoint_pairs(f)
        lb = edge_lb_setpairs(f)
        rep.checked += 1
        slack = e - lb
        margin = slack if margin is None else min(margin, slack)
        if slack < 0:
            rep.fail(f"e={e} < ell^2/2R={lb}", f)
            return rep
    rep.lines.append(f"{rep.checked} random families: e >= ell^2/(2R), min margin {float(margin):.4g}")
    return rep


def verify_supersat(n: int, r: int, trials: int = 200, seed: int = 0, **_) -> Report:
    rep = Report("supersat")
    p = KneserParams(n, r)
    rng = random.Random(seed)
    margin = None
    for t in range(trials):
        k = rng.randint(1, p.V - p.N)
        maker = greedy_sparse_family if t % 2 else random_family
        f = maker(n, r, p.N + k, rng)
        e = disjoint_pairs(f)
        lb = supersat_lb(p, k)
        rep.checked += 1
        margin = e - lb if margin is None else min(margin, e - lb)
        if e < lb:
            rep.fail(f"e={e} < kM/2={lb} at k={k}", f)
            return rep
    rep.lines.append(f"{rep.checked} families (random and greedy): e >= kM/2, min margin {float(margin):.4g}")
    return rep


def verify_shadow(n: int, r: int, trials: int = 200, seed: int = 0, **_) -> Report:
    rep = Report("shadow")
    p = KneserParams(n, r)
    rng = random.Random(seed)
    margin = None
    for size in _random_sizes(p, trials, rng):
        f = random_family(n, r, size, rng)
        for k in range(1, r):
            exact = len(shadow_exact(f, k))
            bound = lovasz_shadow_bound(size, r, k).lovasz_bound
            rep.checked += 1
            margin = exact - bound if margin is None else min(margin, exact - bound)
            if exact < bound - 1e-6:
                rep.fail(f"|shadow_{k}|={exact} < Lovasz bound {bound}", f)
                return rep
    rep.lines.append(f"{rep.checked} (family, k) pairs: shadow >= Lovasz bound, min margin {margin:.4g}")
    return rep


def verify_kk(n: int, r: int, trials: int = 200, seed: int = 0, **_) -> Report:
    rep = Report("kk")
    p = KneserParams(n, r)
    rng = random.Random(seed)
    for t in range(trials):
        f = perturbed_star(n, r, rng.randint(0, p.N), rng) if t % 2 else random_family(n, r, p.N, rng)
        bound, _ = kk_edge_lower_bound(f)
        e = disjoint_pairs(f)
        rep.checked += 1
        if bound > e:
            rep.fail(f"shadow bound {bound} > e={e}", f)
            return rep
    rep.lines.append(f"{rep.checked} size-N families: shadow pipeline bound <= e")
    return rep


def container_check(oracle: GraphOracle, u: int, b: Fraction) -> str | None:
    """Run one container build and replay; return a failure message or None."""
    a = Fraction(oracle.induced_edges(u), oracle.num_vertices)
    try:
        run = build_container(oracle, u, a, b)
    except AssertionError as exc:
        return str(exc)
    if reconstruct_container(oracle, run.fingerprint, a, b) != run.container:
        return "replay from fingerprint gave a different container"
    return None


def verify_container(n: int, r: int, trials: int = 200, seed: int = 0, **_) -> Report:
    rep = Report("container")
    oracle = GraphOracle.kneser(n, r)
    rng = random.Random(seed)
    nv = oracle.num_vertices
    sets = [rng.getrandbits(nv) for _ in range(trials)]
    sets += list(_mis.iter_independent_sets(oracle.adj, 0))[:trials]
    for u in sets:
        for b in (Fraction(1, 3), Fraction(1), Fraction(3)):
            rep.checked += 1
            msg = container_check(oracle, u, b)
            if msg:
                fam = Family.full(n, r)
                rep.fail(f"b={b}: {msg}", fam.subset(m for i, m in enumerate(fam.masks) if u >> i & 1))
                return rep
    rep.lines.append(f"{rep.checked} container runs: all guarantees hold, replay identical")
    return rep


SUITES: dict[str, Callable[..., Report]] = {
    "ekr": verify_ekr,
    "hilton-milner": verify_hm,
    "matching": verify_matching,
    "setpairs": verify_setpairs,
    "supersat": verify_supersat,
    "shadow": verify_shadow,
    "container": verify_container,
    "kk": verify_kk,
}
