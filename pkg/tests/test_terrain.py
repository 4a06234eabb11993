import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from twwgeo.errors import MalformedInput, NotATerrain
from twwgeo.terrain import Terrain, gen_terrain, terrain_structure_errors, visibility_graph, visible_from


def edges(pts):
    return set(visibility_graph(Terrain(tuple(pts))).edges)


def test_apex_blocks_the_outer_pair():
    assert edges([(0, 0), (1, 1), (2, 0)]) == {(0, 1), (1, 2)}


def test_valley_blocks_nothing():
    assert edges([(0, 1), (1, 0), (2, 1)]) == {(0, 1), (0, 2), (1, 2)}


def test_collinear_points_see_each_other():
    assert edges([(0, 0), (1, 1), (2, 2)]) == {(0, 1), (0, 2), (1, 2)}


def test_non_monotone_rejected():
    with pytest.raises(NotATerrain):
        Terrain(((0, 0), (0, 1)))
    with pytest.raises(NotATerrain):
        Terrain(((2, 0), (1, 1)))


def test_visible_from_is_symmetric():
    pts = [(0, 0), (1, 3), (2, 1), (3, 2), (4, 0)]
    for i, j in itertools.permutations(range(5), 2):
        assert (j in visible_from(pts, i)) == (i in visible_from(pts, j))


def test_small_generated_terrains():
    t = gen_terrain([1, 2], 2)
    assert len(t) == 8 and not terrain_structure_errors(t, [1, 2], 2)
    t = gen_terrain([1], 3)
    g = visibility_graph(t)
    assert g.has_edge(t.index("b1"), t.index("c1"))


def test_bc_pattern_follows_sigma():
    sigma = [2, 3, 1]
    t = gen_terrain(sigma, 3)
    g = visibility_graph(t)
    for i, j in itertools.product(range(1, 4), repeat=2):
        assert g.has_edge(t.index(f"b{i}"), t.index(f"c{j}")) == (j >= sigma[i - 1])


def test_generator_argument_checks():
    with pytest.raises(MalformedInput):
        gen_terrain([1, 2], 0)
    with pytest.raises(MalformedInput):
        gen_terrain([2, 2], 2)


def test_json_round_trip():
    t = gen_terrain([2, 1], 2)
    assert Terrain.from_json(t.to_json()) == t


def test_generator_on_random_permutations():
    rng = random.Random(23)
    for _ in range(20):
        n = rng.randint(1, 5)
        sigma = rng.sample(range(1, n + 1), n)
        length = rng.randint(1, 4)
        assert not terrain_structure_errors(gen_terrain(sigma, length), sigma, length)


terrains = st.lists(st.integers(-6, 6), min_size=1, max_size=12).map(lambda ys: list(enumerate(ys)))


@settings(max_examples=300, deadline=None)
@given(terrains)
def test_visibility_matches_orientation_checks(pts):
    got = edges(pts)
    assert got == oracles.visible_pairs(pts)
    assert all((i, i + 1) in got for i in range(len(pts) - 1))
