"""Branch-and-bound search, orbits, and the cyclic-invariant restriction."""

import itertools
import random
from collections import Counter

import networkx as nx
import pytest

from keller.core import CubeVector, GraphVariant, KellerGraphSpec, has_edge, materialize
from keller.search import (
    SearchBudget,
    SearchStatus,
    clique_decision,
    cyclic_orbits,
    invariant_clique_search,
    max_clique,
)
from keller.verify import verify_clique

PLAIN = GraphVariant.PLAIN
STAR = GraphVariant.STAR


def nx_graph(g):
    out = nx.Graph()
    out.add_nodes_from(range(g.num_vertices))
    out.add_edges_from(g.edges())
    return out


def nx_omega(graph):
    return max(len(c) for c in nx.find_cliques(graph))


# ---------------------------------------------------------------------------
# max clique / decision
# ---------------------------------------------------------------------------

def test_max_clique_plain_reaches_2n():
    for dim in (1, 2, 3):
        g = materialize(KellerGraphSpec(dim, PLAIN))
        out = max_clique(g)
        assert out.status is SearchStatus.OPTIMAL
        assert len(out.best_clique) == 2**dim


def test_max_clique_g2_star_is_triangle_free():
    g = materialize(KellerGraphSpec(2, STAR))
    # independent oracle: no triangle exists among all 16 vertices
    spec = g.spec
    vecs = [g.vector(i) for i in range(16)]
    triangles = [
        t
        for t in itertools.combinations(vecs, 3)
        if all(has_edge(spec, a, b) for a, b in itertools.combinations(t, 2))
    ]
    assert not triangles
    out = max_clique(g)
    assert out.status is SearchStatus.OPTIMAL and len(out.best_clique) == 2


def test_max_clique_g3_star_value():
    g = materialize(KellerGraphSpec(3, STAR))
    out = max_clique(g)
    assert out.status is SearchStatus.OPTIMAL
    assert len(out.best_clique) == nx_omega(nx_graph(g)) == 5  # strictly below 2^3


def test_decision_refutes_full_cliques_low_dims():
    for dim in (2, 3):
        g = materialize(KellerGraphSpec(dim, STAR))
        out = clique_decision(g, 2**dim)
        assert out.status is SearchStatus.TARGET_REFUTED


def test_decision_finds_witness_in_plain():
    g = materialize(KellerGraphSpec(3, PLAIN))
    out = clique_decision(g, 8)
    assert out.status is SearchStatus.TARGET_FOUND
    assert len(out.best_clique) >= 8
    assert verify_clique(out.best_clique, g.spec).is_clique


def test_bound_validity_on_random_induced_subgraphs():
    # the coloring bound must never prune the true optimum; compare against
    # maximal-clique enumeration on induced subgraphs (vertices outside the
    # sample stay as isolated vertices so vertex ids keep naming vectors)
    from keller.core import MaterializedGraph

    rng = random.Random(914)
    for dim in (3, 4):
        g = materialize(KellerGraphSpec(dim, STAR))
        full = nx_graph(g)
        for _ in range(12):
            verts = rng.sample(range(g.num_vertices), 24)
            sub = full.subgraph(verts)
            want = nx_omega(sub) if sub.number_of_edges() else 1
            rows = [0] * g.num_vertices
            for u, v in sub.edges():
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            shim = MaterializedGraph(spec=g.spec, adjacency=tuple(rows))
            out = max_clique(shim)
            assert out.status is SearchStatus.OPTIMAL
            assert len(out.best_clique) == want


def test_determinism_same_nodes_and_outcome():
    g = materialize(KellerGraphSpec(3, STAR))
    a = max_clique(g)
    b = max_clique(g)
    assert (a.status, a.nodes_explored, a.best_clique) == (b.status, b.nodes_explored, b.best_clique)


def test_budget_exhaustion_statuses():
    g = materialize(KellerGraphSpec(4, STAR))
    out = clique_decision(g, 16, SearchBudget(node_limit=50))
    assert out.status is SearchStatus.BUDGET_EXHAUSTED
    assert out.nodes_explored == 50
    out = max_clique(g, SearchBudget(node_limit=10))
    assert out.status is SearchStatus.BUDGET_EXHAUSTED
    assert verify_clique(out.best_clique, g.spec).is_clique


def test_early_stop_via_target_size_budget():
    g = materialize(KellerGraphSpec(3, PLAIN))
    out = max_clique(g, SearchBudget(target_size=4))
    assert out.status is SearchStatus.TARGET_FOUND
    assert len(out.best_clique) >= 4


def test_budget_validation():
    with pytest.raises(ValueError):
        SearchBudget(node_limit=0)
    with pytest.raises(ValueError):
        SearchBudget(time_limit=0.0)


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

def test_cyclic_orbits_n7_counts():
    orbits = cyclic_orbits(7)
    sizes = Counter(o.size for o in orbits)
    assert sizes == {1: 4, 7: (4**7 - 4) // 7}
    assert sizes[7] == 2340


def test_cyclic_orbits_n2_swap():
    orbits = cyclic_orbits(2)
    by_rep = {str(o.representative): o for o in orbits}
    assert {str(v) for v in by_rep["01"].orbit} == {"01", "10"}
    assert by_rep["00"].size == 1


def test_cyclic_orbits_n3_total():
    assert len(cyclic_orbits(3)) == 4 + (64 - 4) // 3 == 24


def test_cyclic_orbits_composite_n4():
    sizes = Counter(o.size for o in cyclic_orbits(4))
    assert sizes == {1: 4, 2: 6, 4: 60}


def test_orbits_partition_and_reps_minimal():
    for n in (2, 3, 4):
        orbits = cyclic_orbits(n)
        everything = [v for o in orbits for v in o.orbit]
        assert len(everything) == 4**n
        assert len(set(everything)) == 4**n
        for o in orbits:
            assert o.representative.digits == min(v.digits for v in o.orbit)
            shifted = {
                CubeVector.from_digits(v.digits[1:] + v.digits[:1]) for v in o.orbit
            }
            assert shifted == set(o.orbit)


# ---------------------------------------------------------------------------
# invariant search
# ---------------------------------------------------------------------------

def brute_invariant_exists(n, target):
    spec = KellerGraphSpec(n, STAR)
    orbits = cyclic_orbits(n)
    adm = [
        o
        for o in orbits
        if all(
            has_edge(spec, a, b)
            for a, b in itertools.combinations(sorted(o.orbit, key=lambda v: v.digits), 2)
        )
    ]

    def compatible(a, b):
        return all(has_edge(spec, u, v) for u in a.orbit for v in b.orbit)

    for r in range(len(adm) + 1):
        for combo in itertools.combinations(adm, r):
            if sum(o.size for o in combo) != target:
                continue
            if all(compatible(a, b) for a, b in itertools.combinations(combo, 2)):
                return True
    return False


@pytest.mark.parametrize("n", [2, 3])
def test_invariant_search_matches_brute_force(n):
    for target in range(1, 2**n + 1):
        out = invariant_clique_search(n, target)
        assert out.status in (SearchStatus.TARGET_FOUND, SearchStatus.TARGET_REFUTED)
        assert (out.status is SearchStatus.TARGET_FOUND) == brute_invariant_exists(n, target)
        if out.status is SearchStatus.TARGET_FOUND:
            assert len(out.best_clique) == target
            assert verify_clique(out.best_clique, KellerGraphSpec(n, STAR)).is_clique


@pytest.mark.parametrize("n", [2, 3, 4])
def test_invariant_refutation_consistent_with_unrestricted(n):
    restricted = invariant_clique_search(n, 2**n)
    unrestricted = clique_decision(materialize(KellerGraphSpec(n, STAR)), 2**n)
    assert unrestricted.status is SearchStatus.TARGET_REFUTED
    assert restricted.status is SearchStatus.TARGET_REFUTED


def test_invariant_found_set_is_shift_closed():
    out = invariant_clique_search(3, 5)
    assert out.status is SearchStatus.TARGET_FOUND
    members = set(out.best_clique)
    shifted = {CubeVector.from_digits(v.digits[1:] + v.digits[:1]) for v in members}
    assert shifted == members


def test_invariant_infeasible_residue_reported_without_search():
    out = invariant_clique_search(7, 131)  # 131 % 7 = 5 > four available constants
    assert out.status is SearchStatus.TARGET_REFUTED
    assert out.nodes_explored == 0
    assert out.note is not None


def test_invariant_budget_exhaustion_clean():
    out = invariant_clique_search(7, 128, SearchBudget(node_limit=2000))
    assert out.status in (SearchStatus.TARGET_REFUTED, SearchStatus.BUDGET_EXHAUSTED)
    assert out.status is not SearchStatus.TARGET_FOUND
