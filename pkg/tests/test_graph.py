import numpy as np
import pytest

from swpareto.graph import (
    EdgeListError,
    count_dominated,
    domination_state,
    flip_update,
    graph_from_edges,
    load_edge_list,
)


def bits(s):
    return np.array([float(ch) for ch in s])


class TestLoadEdgeList:
    def test_one_based_path(self):
        g = load_edge_list("1 2\n2 3\n")
        assert g.n == 3
        assert g.degrees.tolist() == [1, 2, 1]
        assert g.adjacency[1].tolist() == [0, 2]

    def test_duplicates_and_self_loops_dropped(self):
        g = load_edge_list("0 1\n1 0\n0 0\n")
        assert g.n == 2
        assert g.num_edges == 1
        assert g.degrees.tolist() == [1, 1]

    def test_triangle(self):
        g = load_edge_list("0 1\n0 2\n1 2\n")
        assert g.n == 3
        assert g.degrees.tolist() == [2, 2, 2]

    def test_comments_and_blank_lines(self):
        g = load_edge_list("% a comment\n# another\n\n0 1\n")
        assert g.n == 2

    def test_matrix_market_size_header_skipped(self):
        text = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n1 2\n2 3\n"
        g = load_edge_list(text)
        assert g.n == 3
        assert g.num_edges == 2

    def test_three_tokens_later_is_error(self):
        with pytest.raises(EdgeListError, match="line 2"):
            load_edge_list("0 1\n0 1 7\n")

    def test_malformed_token(self):
        with pytest.raises(EdgeListError, match="line 1"):
            load_edge_list("a b\n")

    def test_negative_id(self):
        with pytest.raises(EdgeListError, match="negative"):
            load_edge_list("-1 2\n")

    def test_empty_stream(self):
        with pytest.raises(EdgeListError, match="at least one node"):
            load_edge_list("% nothing here\n")

    def test_isolated_nodes_from_max_id(self):
        # node ids 0 and 5 appear; nodes 2..4 exist as degree-0 nodes
        g = load_edge_list("0 5\n")
        assert g.n == 6
        assert g.degrees.tolist() == [1, 0, 0, 0, 0, 1]

    def test_accepts_line_iterables(self):
        g = load_edge_list(["0 1", "1 2"])
        assert g.n == 3

    def test_symmetry_invariant(self):
        g = load_edge_list("0 3\n3 1\n1 0\n2 3\n")
        for i in range(g.n):
            for j in g.adjacency[i]:
                assert i in g.adjacency[j]


class TestCountDominated:
    def test_triangle_single_node(self):
        g = load_edge_list("0 1\n0 2\n1 2\n")
        assert count_dominated(g, bits("100")) == 3

    def test_path_endpoint(self):
        g = load_edge_list("0 1\n1 2\n")
        assert count_dominated(g, bits("100")) == 2

    def test_empty_selection(self):
        g = load_edge_list("0 1\n1 2\n")
        assert count_dominated(g, bits("000")) == 0

    def test_all_ones_and_zeros(self):
        rng = np.random.Generator(np.random.PCG64(5))
        g = _random_graph(30, 0.15, rng)
        assert count_dominated(g, np.ones(30)) == 30
        assert count_dominated(g, np.zeros(30)) == 0

    def test_length_mismatch(self):
        g = load_edge_list("0 1\n")
        with pytest.raises(ValueError):
            count_dominated(g, bits("100"))

    def test_monotone_in_bits(self):
        rng = np.random.Generator(np.random.PCG64(11))
        g = _random_graph(25, 0.1, rng)
        x = (rng.random(25) < 0.3).astype(float)
        base = count_dominated(g, x)
        for i in np.flatnonzero(x == 0):
            y = x.copy()
            y[i] = 1.0
            assert count_dominated(g, y) >= base


def _random_graph(n, p, rng):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return graph_from_edges(n, edges)


class TestFlipUpdate:
    def test_path_center_flip(self):
        g = load_edge_list("0 1\n1 2\n")
        state = domination_state(g, bits("000"))
        x = bits("010")
        new = flip_update(g, state, [1], x)
        assert new.dominated_total == 3

    def test_empty_flip_is_identity(self):
        g = load_edge_list("0 1\n1 2\n")
        x = bits("010")
        state = domination_state(g, x)
        new = flip_update(g, state, [], x)
        assert new.dominated_total == state.dominated_total
        assert np.array_equal(new.cover_count, state.cover_count)

    def test_random_flip_sequence_matches_fresh_count(self):
        # incremental updates must equal the from-scratch oracle throughout
        rng = np.random.Generator(np.random.PCG64(123))
        g = _random_graph(50, 0.1, rng)
        x = np.zeros(50)
        state = domination_state(g, x)
        for _ in range(1000):
            k = int(rng.integers(1, 4))
            flips = rng.choice(50, size=k, replace=False)
            for i in flips:
                x[i] = 1.0 - x[i]
            state = flip_update(g, state, flips, x)
            fresh = domination_state(g, x)
            assert state.dominated_total == fresh.dominated_total
            assert np.array_equal(state.cover_count, fresh.cover_count)

    def test_does_not_mutate_input_state(self):
        g = load_edge_list("0 1\n1 2\n")
        state = domination_state(g, bits("000"))
        before = state.cover_count.copy()
        x = bits("100")
        flip_update(g, state, [0], x)
        assert np.array_equal(state.cover_count, before)
