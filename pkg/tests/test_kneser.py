import pytest

from kneser_lab import _mis
from kneser_lab.combinat import ResourceError, binom_exact
from kneser_lab.extremal import ell
from kneser_lab.kneser import (
    SimpleGraph, adjacent, alpha_exact, disjoint_pairs, induced_graph, is_star, kneser_graph,
    alpha_milp, max_intersecting, max_non_star_intersecting, maximum_witnesses,
)
from kneser_lab.setfam import Family, mask_of
from oracles import count_disjoint, graph_of, is_intersecting, mis_size, naive_max_intersecting, rsets


def fam(n, r, *sets):
    return Family.from_sets(n, r, sets)


def test_adjacent():
    assert adjacent(mask_of({1, 2}), mask_of({3, 4}))
    assert not adjacent(mask_of({1, 2}), mask_of({2, 3}))
    g = kneser_graph(5, 2)
    assert {a.bit_count() for a in g.adj} == {3}


def test_disjoint_pairs_examples():
    assert disjoint_pairs(Family.full(5, 2)) == 15
    assert disjoint_pairs(Family.star(7, 3, 4)) == 0
    assert disjoint_pairs(fam(5, 2, {1, 2}, {3, 4}, {4, 5})) == 2


def test_disjoint_pairs_full_family_formula():
    for n in range(2, 13):
        for r in range(1, 5):
            if r > n:
                continue
            full = Family.full(n, r)
            expected = binom_exact(n, r) * binom_exact(n - r, r) // 2
            assert disjoint_pairs(full) == expected
            assert induced_graph(full).num_edges == expected


def test_disjoint_pairs_matches_oracle(rng):
    full = Family.full(7, 3)
    for _ in range(50):
        f = Family(7, 3, rng.sample(full.masks, rng.randint(0, 35)))
        assert disjoint_pairs(f) == count_disjoint([frozenset(s) for s in f.sets()])


@pytest.mark.parametrize("n,r,alpha", [(5, 2, 4), (7, 3, 15), (4, 2, 3), (6, 2, 5), (8, 3, 21), (9, 3, 28)])
def test_alpha_exact(n, r, alpha):
    a, w = alpha_exact(kneser_graph(n, r))
    assert a == alpha
    assert len(w) == a and is_intersecting([frozenset(s) for s in w.sets()])


def test_alpha_witness_is_star_and_lex_least():
    a, w = alpha_exact(kneser_graph(7, 3))
    assert is_star(w)
    witnesses = maximum_witnesses(kneser_graph(7, 3))
    assert w == min(witnesses, key=lambda f: f.ranks)


EKR_RANGE = [(n, r) for n in range(3, 11) for r in range(1, n) if 2 * r < n and binom_exact(n, r) <= 600]
# K(9,4) and K(10,4) have cliques of size 2 only, so clique-cover bounds are
# too weak for the branch-and-bound; they go through the MILP route.
MILP_ONLY = {(9, 4), (10, 4)}


@pytest.mark.parametrize("n,r", [nr for nr in EKR_RANGE if nr not in MILP_ONLY])
def test_ekr_uniqueness_bnb(n, r):
    ws = maximum_witnesses(kneser_graph(n, r))
    assert len(ws[0]) == binom_exact(n - 1, r - 1)
    assert all(is_star(w) for w in ws)
    assert len(ws) == n


@pytest.mark.parametrize("n,r", sorted(MILP_ONLY) + [(7, 3)])
def test_ekr_uniqueness_milp(n, r):
    N = binom_exact(n - 1, r - 1)
    assert alpha_milp(kneser_graph(n, r)) == N
    assert max_non_star_intersecting(n, r) == N - 1


def test_alpha_on_k2r_r_allowed():
    a, _ = alpha_exact(kneser_graph(6, 3))
    assert a == binom_exact(5, 2)


def test_max_intersecting_examples():
    star = Family.star(5, 2, 1)
    assert max_intersecting(star) == (4, star)
    assert max_intersecting(Family.full(5, 2))[0] == 4
    f = fam(5, 2, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3})
    size, w = max_intersecting(f)
    assert size == 4 and w == Family.star(5, 2, 1)


def test_definition_consistency_with_ell(rng):
    full = Family.full(7, 3)
    for _ in range(30):
        f = Family(7, 3, rng.sample(full.masks, rng.randint(0, 35)))
        assert max_intersecting(f)[0] + ell(f) == len(f)


def test_bnb_matches_naive_enumeration(rng):
    full = Family.full(7, 3)
    for _ in range(60):
        f = Family(7, 3, rng.sample(full.masks, rng.randint(0, 16)))
        assert max_intersecting(f)[0] == naive_max_intersecting([frozenset(s) for s in f.sets()])


def test_bnb_matches_independent_solver_on_random_graphs(rng):
    for _ in range(80):
        nv = rng.randint(1, 30)
        p = rng.random()
        edges = [(i, j) for i in range(nv) for j in range(i + 1, nv) if rng.random() < p]
        g = SimpleGraph.from_edges(nv, edges)
        oracle = graph_of(range(nv), lambda u, v: bool(g.adj[u] >> v & 1))
        size = _mis.max_independent_size(g.adj)
        assert size == mis_size(oracle)
        w = _mis.lex_first_independent(g.adj, size)
        assert w.bit_count() == size and g.induced_edges(w) == 0
        assert _mis.has_independent_set(g.adj, size) and not _mis.has_independent_set(g.adj, size + 1)


def test_lex_first_is_lexicographically_least(rng):
    for _ in range(30):
        nv = rng.randint(1, 12)
        edges = [(i, j) for i in range(nv) for j in range(i + 1, nv) if rng.random() < 0.4]
        g = SimpleGraph.from_edges(nv, edges)
        size, sets = _mis.maximum_independent_sets(g.adj)
        brute = []
        for s in range(1 << nv):
            if s.bit_count() == size and g.induced_edges(s) == 0:
                brute.append(sorted(i for i in range(nv) if s >> i & 1))
        assert sorted(brute) == [sorted(i for i in range(nv) if s >> i & 1) for s in sets]
        w = _mis.lex_first_independent(g.adj, size)
        assert sorted(i for i in range(nv) if w >> i & 1) == min(brute)


def test_solver_cap():
    with pytest.raises(ResourceError, match="cap"):
        alpha_exact(kneser_graph(7, 3), cap=20)
    assert alpha_exact(kneser_graph(7, 3), cap=35)[0] == 15


def test_oracle_agrees_on_kneser():
    for n, r in [(5, 2), (6, 2), (7, 3)]:
        verts = rsets(n, r)
        assert mis_size(graph_of(verts, lambda a, b: not a & b)) == alpha_exact(kneser_graph(n, r))[0]
