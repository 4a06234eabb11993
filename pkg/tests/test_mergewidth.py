import math
import random

import pytest

import oracles
from twwgeo.errors import InconsistentResolve, MalformedInput, PathTooShort, WrongGraph
from twwgeo.families import gen_halfgraph
from twwgeo.mergewidth import (ConstructionSequence, augment_with_paths, build_halfgraph_construction,
                               disjoint_union, parse_radius, verify_construction)
from twwgeo.structures import Graph


def test_single_vertex():
    g = Graph(1)
    seq = ConstructionSequence([("neg", 0, 0)])
    for r in (0, 1, 5, math.inf):
        assert verify_construction(g, seq, r) == 1


def test_radius_zero_counts_only_own_part():
    g = gen_halfgraph(5)
    assert verify_construction(g, build_halfgraph_construction(5), 0) == 1


@pytest.mark.parametrize("n", [1, 2, 4, 10, 20])
def test_halfgraph_construction(n):
    assert verify_construction(gen_halfgraph(n), build_halfgraph_construction(n)) <= 3


def test_wrong_target_graph():
    seq = build_halfgraph_construction(3)
    with pytest.raises(WrongGraph):
        verify_construction(Graph(6), seq)
    with pytest.raises(WrongGraph):
        verify_construction(Graph(2, [(0, 1)]), ConstructionSequence([("pos", 0, 1)]))


def test_conflicting_resolution():
    seq = ConstructionSequence([("pos", 0, 1), ("merge", 0, 1), ("neg", 0, 0)])
    assert verify_construction(Graph(2, [(0, 1)]), seq) >= 1
    bad = ConstructionSequence([("merge", 0, 1), ("pos", 0, 0)])
    with pytest.raises((InconsistentResolve, WrongGraph)):
        verify_construction(Graph(2), bad)


def test_unknown_op_and_radius_parsing():
    with pytest.raises(MalformedInput):
        ConstructionSequence([("swap", 0, 1)])
    assert parse_radius("inf") == math.inf and parse_radius("3") == 3
    with pytest.raises(MalformedInput):
        parse_radius(-1)


def test_one_long_path_on_halfgraph():
    base = gen_halfgraph(3)
    g, seq = augment_with_paths(base, build_halfgraph_construction(3), [(0, 5)], 5)
    assert g.n == base.n + 4
    assert verify_construction(g, seq, 2) <= 4


def test_no_pairs_keeps_graph():
    base = gen_halfgraph(3)
    g, seq = augment_with_paths(base, build_halfgraph_construction(3), [], 4)
    assert g == base
    assert verify_construction(g, seq) == verify_construction(base, build_halfgraph_construction(3))


def test_two_halfgraphs_joined_by_long_paths():
    h = gen_halfgraph(4)
    s = build_halfgraph_construction(4)
    g2, s2 = disjoint_union(h, s, h, s)
    pairs = [(4 + i, 8 + (3 - i)) for i in range(4)]
    g, seq = augment_with_paths(g2, s2, pairs, 7)
    assert verify_construction(g, seq, 3) <= 4


def test_short_paths_rejected():
    with pytest.raises(PathTooShort):
        augment_with_paths(gen_halfgraph(2), build_halfgraph_construction(2), [(0, 3)], 1)


def test_json_round_trip():
    seq = build_halfgraph_construction(3)
    assert ConstructionSequence.from_json(seq.to_json()) == seq


def test_width_matches_breadth_first_replay():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 4)
        r = rng.choice([0, 1, 2, 3, None])
        sigma = rng.sample(range(n), n)
        h = gen_halfgraph(n)
        s = build_halfgraph_construction(n)
        g2, s2 = disjoint_union(h, s, h, s)
        pairs = [(n + i, 2 * n + sigma[i]) for i in range(n)]
        g, seq = augment_with_paths(g2, s2, pairs, rng.randint(2, 6))
        want = oracles.construction_width(g.n, seq.ops, r)
        assert verify_construction(g, seq, math.inf if r is None else r) == want
