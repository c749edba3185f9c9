import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minbucket.degrees import DegreeSequence
from minbucket.graph import SimpleGraph, generate_chung_lu, generate_ecm
from minbucket.triangles import (
    assign_buckets,
    closed_wedge_check,
    minbucket_enumerate,
    oracle_triangles,
    pair_work,
    trivial_enumerate,
)

from conftest import complete, path, petersen, random_graph, star


def naive_minbucket(g, tie_mode):
    """Loop-level reference: returns (examined pairs, raw triangle emissions)."""
    D = g.degrees.tolist()
    adj = g.adjacency()
    buckets = [[] for _ in range(g.n)]
    for u in range(g.n):
        for v in adj[u]:
            if u < v:
                if D[u] < D[v] or (D[u] == D[v]):
                    buckets[u].append(v)
                if D[v] < D[u] or (D[u] == D[v] and tie_mode == "both"):
                    buckets[v].append(u)
    examined = 0
    emitted = []
    for v, b in enumerate(buckets):
        for x, y in itertools.combinations(b, 2):
            examined += 1
            if y in adj[x]:
                emitted.append(tuple(sorted((v, x, y))))
    return examined, emitted


def naive_trivial(g):
    adj = g.adjacency()
    examined = 0
    for v in range(g.n):
        for x, y in itertools.combinations(adj[v], 2):
            examined += 1
    return examined


graphs = st.builds(random_graph, st.integers(3, 40), st.floats(0.05, 0.7),
                   st.integers(0, 2**32))


class TestExamples:
    def test_trivial_k3(self, k3):
        r = trivial_enumerate(k3, list_triangles=True)
        assert (r.wedges_enumerated, r.closed_wedges, r.triangle_count) == (3, 3, 1)
        assert r.triangle_set() == {(0, 1, 2)}

    def test_trivial_star(self):
        r = trivial_enumerate(star(3))
        assert (r.wedges_enumerated, r.closed_wedges, r.triangle_count) == (3, 0, 0)

    def test_trivial_path(self):
        r = trivial_enumerate(path(3))
        assert (r.wedges_enumerated, r.triangle_count) == (1, 0)

    def test_minbucket_k3(self, k3):
        r = minbucket_enumerate(k3, list_triangles=True)
        assert r.bucket_sizes.tolist() == [2, 1, 0]
        assert (r.wedges_enumerated, r.triangle_count) == (1, 1)
        assert r.triangle_set() == oracle_triangles(k3)

    def test_minbucket_k4(self, k4):
        r = minbucket_enumerate(k4, list_triangles=True)
        assert r.bucket_sizes.tolist() == [3, 2, 1, 0]
        assert r.wedges_enumerated == 4
        assert r.triangle_count == r.closed_wedges == 4
        assert r.triangle_set() == oracle_triangles(k4)

    def test_minbucket_star(self):
        r = minbucket_enumerate(star(3))
        assert r.bucket_sizes.tolist() == [0, 1, 1, 1]
        assert r.wedges_enumerated == 0

    def test_minbucket_path(self):
        r = minbucket_enumerate(path(3))
        assert r.bucket_sizes.tolist() == [1, 0, 1]
        assert r.wedges_enumerated == 0

    def test_both_mode_k4(self, k4):
        r = minbucket_enumerate(k4, "both", list_triangles=True)
        assert r.bucket_sizes.tolist() == [3, 3, 3, 3]
        assert r.wedges_enumerated == 12 and r.triangle_count == 4

    def test_bad_tie_mode(self, k3):
        with pytest.raises(ValueError):
            minbucket_enumerate(k3, "random")


class TestOracle:
    def test_k4(self, k4):
        assert len(oracle_triangles(k4)) == 4

    @given(st.integers(1, 30), st.integers(0, 2**32))
    def test_tree(self, n, seed):
        rng = np.random.default_rng(seed)
        parents = [int(rng.integers(0, i)) for i in range(1, n)]
        g = SimpleGraph.from_edges(n, parents, list(range(1, n)))
        assert oracle_triangles(g) == set()

    def test_petersen(self):
        assert oracle_triangles(petersen()) == set()
        assert trivial_enumerate(petersen()).closed_wedges == 0


class TestClosedWedge:
    def test_k3(self, k3):
        assert closed_wedge_check(k3, 0, 1, 2)

    def test_path(self):
        assert not closed_wedge_check(path(3), 0, 1, 2)

    def test_k4_minus_edge(self):
        g = SimpleGraph.from_edges(4, [0, 0, 0, 1, 1], [1, 2, 3, 2, 3])
        assert not closed_wedge_check(g, 2, 0, 3)

    def test_not_a_wedge(self):
        with pytest.raises(ValueError):
            closed_wedge_check(path(4), 0, 1, 3)


class TestProperties:
    @given(graphs)
    @settings(max_examples=60, deadline=None)
    def test_all_algorithms_agree_with_oracle(self, g):
        truth = oracle_triangles(g)
        t = trivial_enumerate(g, list_triangles=True)
        c = minbucket_enumerate(g, "consistent", list_triangles=True)
        b = minbucket_enumerate(g, "both", list_triangles=True)
        assert t.triangle_set() == c.triangle_set() == b.triangle_set() == truth
        assert t.closed_wedges == 3 * len(truth)
        # consistent mode emits each triangle exactly once
        assert c.closed_wedges == len(truth)
        for r in (t, c, b):
            assert r.triangle_count <= r.closed_wedges <= r.wedges_enumerated

    @given(graphs)
    @settings(max_examples=60, deadline=None)
    def test_work_identities(self, g):
        t = trivial_enumerate(g)
        c = minbucket_enumerate(g, "consistent")
        b = minbucket_enumerate(g, "both")
        assert t.wedges_enumerated == pair_work(g.degrees) == naive_trivial(g)
        for mode, r in (("consistent", c), ("both", b)):
            examined, emitted = naive_minbucket(g, mode)
            assert r.wedges_enumerated == pair_work(r.bucket_sizes) == examined
            assert r.closed_wedges == len(emitted)
        assert b.wedges_enumerated >= c.wedges_enumerated
        assert np.all(c.bucket_sizes <= g.degrees)
        assert c.wedges_enumerated <= t.wedges_enumerated

    @given(graphs)
    @settings(max_examples=40, deadline=None)
    def test_bucket_invariants(self, g):
        D = g.degrees
        c = assign_buckets(g, "consistent")
        b = assign_buckets(g, "both")
        assert int(c.sizes.sum()) == g.edge_count
        assert g.edge_count <= int(b.sizes.sum()) <= 2 * g.edge_count
        for owner, member in zip(c.owner.tolist(), c.member.tolist()):
            assert D[owner] < D[member] or (D[owner] == D[member] and owner < member)
        for owner, member in zip(b.owner.tolist(), b.member.tolist()):
            assert D[owner] <= D[member]

    @given(graphs, st.integers(1, 50))
    @settings(max_examples=30, deadline=None)
    def test_chunking_does_not_change_results(self, g, chunk):
        a = minbucket_enumerate(g, "both", list_triangles=True)
        b = minbucket_enumerate(g, "both", list_triangles=True, chunk=chunk)
        assert a.stats() == b.stats()
        assert np.array_equal(a.triangles, b.triangles)


def test_generated_graphs_match_oracle():
    rng = np.random.default_rng(5)
    for i in range(20):
        d = rng.integers(1, 15, size=int(rng.integers(10, 120)))
        seq = DegreeSequence.from_degrees(d)
        for g in (generate_ecm(seq, i)[0], generate_chung_lu(seq, i)[0]):
            truth = oracle_triangles(g)
            assert minbucket_enumerate(g, list_triangles=True).triangle_set() == truth
            assert trivial_enumerate(g, list_triangles=True).triangle_set() == truth


def test_listing_limit_overflow():
    g = complete(6)
    r = minbucket_enumerate(g, list_triangles=True, limit=5)
    assert r.overflow and r.triangles.shape == (5, 3)
    assert r.triangle_count == 20
    r = minbucket_enumerate(g, list_triangles=True, limit=20)
    assert not r.overflow


def test_bucket_by_target_degrees():
    # path 0-1-2 with target degrees reversed in importance
    g = path(3)
    r = minbucket_enumerate(g, degrees=np.array([5, 1, 5]))
    assert r.bucket_sizes.tolist() == [0, 2, 0]
    assert r.wedges_enumerated == 1
    with pytest.raises(ValueError):
        minbucket_enumerate(g, degrees=np.array([1, 2]))


def test_stats_record():
    r = minbucket_enumerate(complete(4))
    assert r.stats() == {"algorithm": "minbucket-consistent", "wedges_enumerated": 4,
                         "closed_wedges": 4, "triangle_count": 4, "max_bucket": 3}
