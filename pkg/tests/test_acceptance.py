"""Acceptance criteria 1-13, one test each.

Every test records a single PASS/FAIL line; the lines are printed at the end
of the pytest session (see conftest.py) and also when this file is run as a
script: ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import subprocess
import sys
import functools
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from kneser_lab import _mis
from kneser_lab.cli import main as cli_main
from kneser_lab.combinat import solve_theta, theta_residual
from kneser_lab.container import GraphOracle, build_container, reconstruct_container, supersat_lb
from kneser_lab.extremal import (
    edge_lb_induced_matching, edge_lb_setpairs, ell, induced_matching_number, max_induced_matching,
    verify_hilton_milner,
)
from kneser_lab.generators import greedy_sparse_family, perturbed_star, random_family
from kneser_lab.kneser import (
    SimpleGraph, alpha_exact, disjoint_pairs, is_star, kneser_graph, maximum_witnesses,
)
from kneser_lab.randomsim import prob_alpha_equals_n, threshold_scan, y_stats
from kneser_lab.setfam import Family, KneserParams, all_rsets
from kneser_lab.shadow import kk_edge_lower_bound, lovasz_shadow_bound, shadow_exact

sys.path.insert(0, str(Path(__file__).parent))
import oracles  # noqa: E402

RESULTS: dict[int, str] = {}
SEED = 20141012


def record(number: int, title: str):
    """Decorator: run the criterion and store one PASS/FAIL line for it."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            began = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                RESULTS[number] = f"criterion {number:2d} FAIL  {title}: {type(exc).__name__}: {exc}"
                raise
            took = time.perf_counter() - began
            RESULTS[number] = f"criterion {number:2d} PASS  {title}: {detail} [{took:.1f}s]"

        return run

    return wrap


def family_from_bits(base: Family, bits: int) -> Family:
    return base.subset(m for i, m in enumerate(base.masks) if bits >> i & 1)


def sqrt_le(lhs: Fraction, coef: Fraction, radicand: Fraction) -> bool:
    """lhs <= coef * sqrt(radicand), decided exactly (coef, radicand >= 0)."""
    return lhs <= 0 or lhs * lhs <= coef * coef * radicand


def container_violations(g: GraphOracle, u: int, a: Fraction, b: Fraction) -> list[str]:
    """Recheck every container guarantee from scratch against the raw adjacency."""
    run = build_container(g, u, a, b)
    out = []
    t = sum(1 << v for v in run.fingerprint)
    c = sum(1 << v for v in run.container)
    if t & ~u or u & ~c:
        out.append("T, U, C not nested")
    nv = g.num_vertices
    edges = sum(bin(g.adj[v] & c).count("1") for v in range(nv) if c >> v & 1) // 2
    mu_c = Fraction(edges, nv)
    if mu_c != run.mu_container:
        out.append("reported mu(C) is wrong")
    d = Fraction(sum(bin(x).count("1") for x in g.adj), nv)
    bd = b * d
    if bd > 0:
        delta = max(bin(x).count("1") for x in g.adj)
        ratio = a / bd
        if not sqrt_le(len(run.fingerprint) - nv / bd, 2 * nv, ratio):
            out.append(f"|T| = {len(run.fingerprint)} over bound")
        if not sqrt_le(mu_c - delta / bd - bd, 2 * delta, ratio):
            out.append(f"mu(C) = {mu_c} over bound")
        k = run.k
        if not (k * k > a * b * d >= (k - 1) * (k - 1)):
            out.append(f"k = {k} is not the least integer above sqrt(abd)")
    if reconstruct_container(g, run.fingerprint, a, b) != run.container:
        out.append("replay differs")
    return out


@record(1, "EKR exactness and stars-only witnesses")
def test_criterion_01_ekr():
    for n, r in [(5, 2), (6, 2), (7, 2), (7, 3), (8, 3), (9, 3)]:
        alpha, witness = alpha_exact(kneser_graph(n, r))
        assert alpha == math.comb(n - 1, r - 1), (n, r, alpha)
        assert len(witness) == alpha and oracles.is_intersecting([frozenset(s) for s in witness.sets()])
    counts = []
    for n, r in [(5, 2), (7, 3)]:
        witnesses = maximum_witnesses(kneser_graph(n, r))
        assert witnesses and all(is_star(w) for w in witnesses)
        counts.append(len(witnesses))
    assert counts == [5, 7]
    return "alpha = C(n-1, r-1) on 6 instances; 5 and 7 maximum families, all stars"


@record(2, "induced matching number of K(n, r)")
def test_criterion_02_matching():
    got = []
    for n, r in [(4, 2), (5, 2), (6, 2)]:
        m = induced_matching_number(kneser_graph(n, r))
        assert m == math.comb(2 * r - 1, r - 1)
        got.append(m)
    return f"m = {got}"


@record(3, "e(A) >= ell^2 / (2R) suite")
def test_criterion_03_setpairs():
    base = Family.full(5, 2)
    sets = oracles.rsets(5, 2)
    for bits in range(1 << 10):
        f = family_from_bits(base, bits)
        e = disjoint_pairs(f)
        assert e >= edge_lb_setpairs(f), f
        if bits % 7 == 0:
            sub = [sets[i] for i in range(10) if bits >> i & 1]
            assert len(sub) - oracles.naive_max_intersecting(sub) == ell(f)
            assert oracles.count_disjoint(sub) == e
    rng = random.Random(SEED + 3)
    p = KneserParams(7, 3)
    for i in range(10_000):
        f = random_family(7, 3, rng.randint(1, p.V), rng)
        assert disjoint_pairs(f) >= edge_lb_setpairs(f), f
    return "1024 exhaustive + 10^4 random families, 0 violations"


@record(4, "|E| >= (|V| - alpha)^2 / (4m) suite")
def test_criterion_04_induced_matching_bound():
    rng = random.Random(SEED + 4)
    checked = 0
    for i in range(500):
        nv = rng.randint(1, 24)
        prob = rng.choice([0.1, 0.2, 0.3, 0.5])
        edges = [(a, b) for a in range(nv) for b in range(a + 1, nv) if rng.random() < prob]
        g = SimpleGraph.from_edges(nv, edges)
        alpha = _mis.max_independent_size(g.adj)
        if i % 5 == 0:
            nbrs = {v: set() for v in range(nv)}
            for a, b in edges:
                nbrs[a].add(b)
                nbrs[b].add(a)
            assert alpha == oracles.mis_size(nbrs)
        m = len(max_induced_matching(g, cap=10_000))
        if m == 0:
            assert alpha == nv
            continue
        assert len(edges) >= edge_lb_induced_matching(nv, alpha, m)
        checked += 1
    for n, r in [(4, 2), (5, 2), (6, 2)]:
        g = kneser_graph(n, r)
        alpha, _ = alpha_exact(g)
        assert g.num_edges >= edge_lb_induced_matching(g.num_vertices, alpha, induced_matching_number(g))
        checked += 1
    return f"{checked} graphs with edges checked (rest edgeless, alpha = |V|), 0 violations"


@record(5, "Hilton-Milner exhaustive")
def test_criterion_05_hilton_milner():
    lines = []
    for n, r in [(5, 2), (6, 2)]:
        checked, bad = verify_hilton_milner(n, r)
        assert bad == []
        p = KneserParams(n, r)
        threshold = p.N - p.M + 2
        sets = oracles.rsets(n, r)
        brute = 0
        for bits in range(1 << len(sets)):
            if bin(bits).count("1") < threshold:
                continue
            sub = [sets[i] for i in range(len(sets)) if bits >> i & 1]
            if oracles.is_intersecting(sub):
                brute += 1
                assert frozenset.intersection(*sub), sub
        assert brute == checked
        lines.append(f"({n},{r}): {checked} families")
    return "; ".join(lines) + ", all inside a star"


@record(6, "Kruskal-Katona in Lovasz form")
def test_criterion_06_shadow():
    n, r = 6, 3
    base = Family.full(n, r)
    count = 0
    for size in range(1, 7):
        bound = {k: lovasz_shadow_bound(size, r, k).lovasz_bound for k in range(r + 1)}
        for combo in combinations(base.masks, size):
            f = Family(n, r, combo)
            for k in range(r + 1):
                assert len(shadow_exact(f, k)) >= bound[k] - 1e-6, (f, k)
            count += 1
    rng = random.Random(SEED + 6)
    for _ in range(10_000):
        f = random_family(n, r, rng.randint(7, 20), rng)
        k = rng.randint(0, r)
        assert len(shadow_exact(f, k)) >= lovasz_shadow_bound(len(f), r, k).lovasz_bound - 1e-6
    for x in range(r, n + 1):
        seg = Family(n, r, all_rsets(x, r))
        for k in range(r + 1):
            b = lovasz_shadow_bound(len(seg), r, k)
            assert b.lovasz_x == pytest.approx(x, abs=1e-9)
            assert abs(len(shadow_exact(seg, k)) - b.lovasz_bound) <= 1e-6
            assert len(shadow_exact(seg, k)) == math.comb(x, k)
    return f"{count} exhaustive + 10^4 random families; equality on [x]^(3), x = 3..6"


@record(7, "shadow pipeline edge bound")
def test_criterion_07_kk():
    rng = random.Random(SEED + 7)
    p = KneserParams(7, 3)
    for i in range(1000):
        if i % 2:
            f = random_family(7, 3, p.N, rng)
        else:
            f = perturbed_star(7, 3, rng.randint(0, p.N), rng)
        bound, _ = kk_edge_lower_bound(f)
        assert bound <= disjoint_pairs(f), f
    hand = Family.star(7, 3, 1).difference(Family.from_sets(7, 3, [{1, 2, 3}]))
    hand = hand.union(Family.from_sets(7, 3, [{4, 5, 6}]))
    bound, trace = kk_edge_lower_bound(hand)
    assert bound == 2 == disjoint_pairs(hand)
    assert trace.center == 1 and trace.ell == 1
    return "10^3 size-N families, 0 violations; hand example bound 2 = e"


@record(8, "container guarantees and replay")
def test_criterion_08_containers():
    bs = (Fraction(1, 3), Fraction(1), Fraction(3))
    g = GraphOracle.kneser(5, 2)
    runs = 0
    for u in range(1 << 10):
        e = g.induced_edges(u)
        if e > 5:
            continue
        a = Fraction(e, 10)
        for b in bs:
            assert container_violations(g, u, a, b) == [], (u, b)
            runs += 1
    rng = random.Random(SEED + 8)
    for seed in range(100):
        grng = random.Random(seed)
        edges = [(i, j) for i in range(40) for j in range(i + 1, 40) if grng.random() < 0.2]
        gg = GraphOracle.from_graph(SimpleGraph.from_edges(40, edges))
        indep = _mis.greedy_independent(gg.adj, (1 << 40) - 1)
        for u in (rng.getrandbits(40) & rng.getrandbits(40), indep):
            a = Fraction(gg.induced_edges(u), 40)
            for b in bs:
                assert container_violations(gg, u, a, b) == [], (seed, u, b)
                runs += 1
    return f"{runs} runs, 0 violations, every replay identical"


@record(9, "supersaturation e(f) >= kM/2")
def test_criterion_09_supersat():
    rng = random.Random(SEED + 9)
    p = KneserParams(7, 3)
    for i in range(10_000):
        k = rng.randint(1, p.V - p.N)
        f = (greedy_sparse_family if i % 2 else random_family)(7, 3, p.N + k, rng)
        assert disjoint_pairs(f) >= supersat_lb(p, k), (k, f)
    return "10^4 random and greedy families, 0 violations"


@record(10, "E[Y] concordance within 3 SE")
def test_criterion_10_expected_y():
    worst = 0.0
    for n, r in [(5, 2), (7, 3)]:
        for p in (0.3, 0.5, 0.7):
            st = y_stats(KneserParams(n, r), p, 10_000, seed=SEED)
            z = abs(st.mean - st.expected.value()) / st.stderr
            assert z <= 3, (n, r, p, st)
            worst = max(worst, z)
    return f"6 settings, worst |z| = {worst:.2f}"


@record(11, "theta root")
def test_criterion_11_theta():
    t = solve_theta()
    assert 0.3615 <= t <= 0.3625
    assert abs(theta_residual(t)) < 1e-8
    return f"theta = {t:.10f}"


@record(12, "threshold endpoints and monotone scan")
def test_criterion_12_threshold():
    p = KneserParams(7, 3)
    zero = prob_alpha_equals_n(p, 0.0, 1000, seed=SEED)
    one = prob_alpha_equals_n(p, 1.0, 1000, seed=SEED)
    assert zero.phat == 0.0 and one.phat == 1.0
    grid = [i / 20 for i in range(21)]
    scan = threshold_scan(p, grid, 1000, seed=SEED, threads=4)
    assert [pt.p for pt in scan.points] == grid
    assert scan.inversions == []
    phat = [pt.phat for pt in scan.points]
    assert phat[0] == 0.0 and phat[-1] == 1.0
    return "phat(0) = 0, phat(1) = 1, 21-point scan with no inversions"


def _seeded_commands(tmp: Path, threads: int) -> list[list[str]]:
    fam = tmp / "star.fam"
    fam.write_text("5 2\n1 2\n1 3\n1 4\n1 5\n")
    t = str(threads)
    return [
        ["scan", "--n", "7", "--r", "3", "--p-grid", "0:1:0.05", "--trials", "200", "--seed", "7",
         "--threads", t],
        ["scan", "--n", "7", "--r", "3", "--p-grid", "0.4,0.6", "--trials", "100", "--seed", "3",
         "--threads", t, "--independent-points", "--format", "json"],
        ["verify", "supersat", "--n", "7", "--r", "3", "--trials", "300", "--seed", "5"],
        ["verify", "container", "--n", "5", "--r", "2", "--trials", "50", "--seed", "5", "--format", "json"],
        ["container", "--graph", "gnp", "--vertices", "40", "--graph-seed", "9", "--u", "1,5,9",
         "--a", "1/2", "--b", "1", "--order", "random", "--order-seed", "4", "--format", "json"],
        ["container", "--n", "5", "--r", "2", "--family", str(fam), "--a", "0", "--b", "1",
         "--order", "random", "--order-seed", "2", "--replay"],
    ]


@record(13, "determinism at 1 and 8 threads")
def test_criterion_13_determinism(tmp_path):
    outputs: dict[int, list[bytes]] = {}
    for label, threads in enumerate([1, 1, 8, 8]):
        files = []
        for j, cmd in enumerate(_seeded_commands(tmp_path, threads)):
            out = tmp_path / f"run{label}_{j}.out"
            assert cli_main(cmd + ["--output", str(out)]) == 0, cmd
            files.append(out.read_bytes())
        outputs[label] = files
    first = outputs[0]
    for label in (1, 2, 3):
        assert outputs[label] == first
    return f"{len(first)} seeded commands x 4 runs, byte-identical"


def print_summary() -> None:
    for number in sorted(RESULTS):
        print(RESULTS[number])


if __name__ == "__main__":
    code = subprocess.call([sys.executable, "-m", "pytest", "-q", __file__])
    sys.exit(code)
