import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from twwgeo.errors import InvalidPartition, InvalidVertex, MalformedInput
from twwgeo.structures import (Graph, OrderedBinaryStructure, VertexPartition, error_degree,
                               induced_substructure, is_homogeneous)

K4 = Graph(4, itertools.combinations(range(4), 2))
P4 = Graph(4, [(0, 1), (1, 2), (2, 3)])


def test_clique_pairs_are_homogeneous():
    assert is_homogeneous(K4.to_structure(), [0], [1, 2])


def test_path_end_is_mixed():
    p3 = Graph(3, [(0, 1), (1, 2)]).to_structure()
    assert not is_homogeneous(p3, [0, 1], [2])


def test_interleaved_order_breaks_homogeneity():
    s = Graph(3).to_structure(order=[0, 2, 1])
    assert not is_homogeneous(s, [0, 1], [2])
    assert is_homogeneous(Graph(3).to_structure(), [0, 1], [2])


def test_bad_vertex_rejected():
    with pytest.raises(InvalidVertex):
        is_homogeneous(K4.to_structure(), [0], [7])
    with pytest.raises(InvalidVertex):
        Graph(2, [(0, 5)])


def test_clique_partition_has_no_errors():
    k5 = Graph(5, itertools.combinations(range(5), 2)).to_structure()
    assert error_degree(k5, VertexPartition(5, [[0, 3], [1], [2, 4]])) == 0


@pytest.mark.parametrize("parts,want", [([[0, 1], [2], [3]], 1), ([[0, 2], [1], [3]], 2)])
def test_path_partitions_in_vertex_order(parts, want):
    s = P4.to_structure(order=range(4))
    assert error_degree(s, VertexPartition(4, parts)) == want


def test_unordered_path_partition_ignores_interleaving():
    assert error_degree(P4.to_structure(), VertexPartition(4, [[0, 2], [1], [3]])) == 1


@pytest.mark.parametrize("parts", [[[0], [1]], [[0, 1], [1, 2, 3]], [[0, 1], [], [2, 3]], [[0, 1, 2, 3, 4]]])
def test_invalid_partitions(parts):
    with pytest.raises(InvalidPartition):
        error_degree(P4.to_structure(), parts)


def test_induced_substructures():
    assert induced_substructure(K4.to_structure(), [0, 1]).relations["E"] == frozenset({(0, 1), (1, 0)}) or \
        set(induced_substructure(K4.to_structure(), [0, 1]).relations["E"]) == {(0, 1), (1, 0)}
    assert not set(induced_substructure(P4.to_structure(), [0, 2]).relations["E"])
    s = P4.to_structure(order=[2, 0, 3, 1])
    same = induced_substructure(s, range(4))
    assert set(same.relations["E"]) == set(s.relations["E"]) and same.order == s.order


def test_induced_keeps_relative_order_and_origin():
    s = P4.to_structure(order=[3, 1, 2, 0])
    sub = induced_substructure(s, [0, 1, 3])
    assert sub.order == (2, 1, 0)
    assert sub.origin == (0, 1, 3)


def test_structure_rejects_non_permutation_order():
    with pytest.raises(MalformedInput):
        OrderedBinaryStructure(3, {}, [0, 0, 1])


def test_graph_json_round_trip():
    g = Graph(5, [(0, 4), (1, 2)], list("abcde"))
    assert Graph.from_json(g.to_json()) == g


@st.composite
def small_instance(draw):
    n = draw(st.integers(2, 6))
    edges = [e for e in itertools.combinations(range(n), 2) if draw(st.booleans())]
    order = draw(st.permutations(range(n)))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    parts = {}
    for v, lab in enumerate(labels):
        parts.setdefault(lab, []).append(v)
    return n, edges, order, list(parts.values())


@settings(max_examples=200, deadline=None)
@given(small_instance())
def test_error_degree_matches_pairwise_count(inst):
    n, edges, order, parts = inst
    adj = {(u, v) for u, v in edges} | {(v, u) for u, v in edges}
    for o in (None, order):
        s = Graph(n, edges).to_structure(o)
        want = oracles.red_degree(n, adj, o, [tuple(p) for p in parts])
        assert error_degree(s, VertexPartition(n, parts)) == want
