import itertools
import random

import pytest

from twwgeo.errors import InvalidWitness, MalformedInput, NotBipartite, StructureMismatch
from twwgeo.families import (TransversalWitness, canonical_transversal_witness, encode_bipartite_in_transversal,
                             extract_biclique_from_Hsigma, gen_Gbullet, gen_halfgraph, gen_Hsigma,
                             gen_subdivided_complete, gen_transversal_graph, isomorphic, universal_permutation,
                             verify_transversal)
from twwgeo.structures import Graph


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def test_canonical_transversal_verifies():
    assert verify_transversal(gen_transversal_graph(3), canonical_transversal_witness(3))


def test_swapping_b_across_rows_breaks_the_pattern():
    w = canonical_transversal_witness(3)
    B = [list(r) for r in w.B]
    B[0][1], B[2][1] = B[2][1], B[0][1]
    assert not verify_transversal(gen_transversal_graph(3), TransversalWitness(w.A, tuple(map(tuple, B)), w.C))


def test_path_is_t1():
    assert verify_transversal(Graph(3, [(0, 1), (1, 2)]), TransversalWitness((0,), ((1,),), (2,)))


def test_witness_with_unknown_vertex():
    with pytest.raises(InvalidWitness):
        verify_transversal(Graph(3, [(0, 1), (1, 2)]), TransversalWitness((0,), ((9,),), (2,)))


def test_transversal_graph_shape():
    g = gen_transversal_graph(3)
    assert g.n == 15 and len(g.edges) == 36
    assert gen_transversal_graph(1).edges == ((0, 1), (1, 2))
    w = canonical_transversal_witness(3)
    assert not g.induced(list(w.A) + list(w.C)).edges


def test_transversal_flips_stay_valid():
    g = gen_transversal_graph(4)
    w = canonical_transversal_witness(4)
    assert w.flipped(False, False) == w
    assert TransversalWitness.from_json(w.to_json()) == w
    assert sum(verify_transversal(g, w.flipped(r, c)) for r in (0, 1) for c in (0, 1)) >= 1


def test_hsigma_and_halfgraph_sizes():
    g = gen_Hsigma([2, 1], 3)
    assert g.n == 12 and len(g.edges) == 12
    assert len(gen_halfgraph(4).edges) == 10
    assert isomorphic(gen_Hsigma([1], 1), Graph(4, [(0, 1), (1, 2), (2, 3)]))


def test_bad_permutation():
    with pytest.raises(MalformedInput):
        gen_Hsigma([1, 1], 2)


@pytest.mark.parametrize("n,want", [(1, (1,)), (2, (1, 3, 2, 4)), (3, (1, 4, 7, 2, 5, 8, 3, 6, 9))])
def test_universal_permutation(n, want):
    assert universal_permutation(n) == want


def test_universal_permutation_contains_every_pattern():
    n = 3
    sigma = universal_permutation(n)
    for pattern in itertools.permutations(range(n)):
        assert any(all(sigma[idx[a]] < sigma[idx[b]] for a in range(n) for b in range(n) if pattern[a] < pattern[b])
                   for idx in itertools.combinations(range(n * n), n))


def test_subdivided_complete_counts():
    assert isomorphic(gen_subdivided_complete(2, 1, True), cycle(4))
    g = gen_subdivided_complete(2, 5, True)
    assert g.n == 20 and len(g.edges) == 20
    g = gen_subdivided_complete(3, 2, False)
    assert g.n == 6 and len(g.edges) == 6


@pytest.mark.parametrize("n,length", [(1, 3), (2, 3), (3, 2)])
def test_biclique_extraction(n, length):
    g = gen_Hsigma(universal_permutation(n), length)
    out = extract_biclique_from_Hsigma(g, n)
    assert isomorphic(out, gen_subdivided_complete(n, length + 2, True))


def test_biclique_extraction_needs_universal_permutation():
    with pytest.raises(StructureMismatch):
        extract_biclique_from_Hsigma(gen_Hsigma(list(range(1, 5)), 3), 2)


@pytest.mark.parametrize("h,sides", [(cycle(4), ([0, 2], [1, 3])), (Graph(2), ([0], [1])),
                                     (Graph(6, [(x, y) for x in range(3) for y in range(3, 6)]), None)])
def test_bipartite_encoding(h, sides):
    assert encode_bipartite_in_transversal(h, sides) == h


def test_bipartite_encoding_random():
    rng = random.Random(19)
    for _ in range(50):
        a, b = rng.randint(1, 5), rng.randint(1, 5)
        h = Graph(a + b, [(x, y) for x in range(a) for y in range(a, a + b) if rng.random() < 0.5])
        assert encode_bipartite_in_transversal(h, (range(a), range(a, a + b))).edges == h.edges


def test_encoding_rejects_odd_cycle():
    with pytest.raises(NotBipartite):
        encode_bipartite_in_transversal(cycle(3))


def test_gbullet_examples():
    assert not gen_Gbullet(Graph(2, [(0, 1)]), ([0], [1])).edges
    g = gen_Gbullet(Graph(3, [(0, 2)]), ([0, 1], [2]))
    # vertices: u1=0, u2=1, v1=2, e=3
    assert set(g.edges) == {(0, 1), (1, 3)}
    g = gen_Gbullet(Graph(4), ([0, 1], [2, 3]))
    assert set(g.edges) == {(0, 1), (2, 3)}
