import math

import numpy as np
import pytest

from ecmod.errors import EmptyPool
from ecmod.tuplegen.kdtree import (
    KdTree2D,
    admissible_query,
    brute_force_admissible,
    build_tree,
)


def test_single_point_tree():
    tree = KdTree2D([[0.5, 0.5]])
    assert tree.node_count == 1
    assert tree.height == 1
    assert tree.query_radius([0.5, 0.6], 0.2).tolist() == [0]
    assert tree.query_radius([0.5, 0.6], 0.1).tolist() == []


def test_collinear_points_give_balanced_tree():
    points = np.column_stack((np.arange(7.0), np.zeros(7)))
    tree = KdTree2D(points)
    assert tree.height == 3
    assert tree.check_partition()
    assert sorted(tree.order.tolist()) == list(range(7))


def test_duplicate_coordinates():
    points = np.zeros((9, 2))
    tree = KdTree2D(points)
    assert tree.check_partition()
    assert len(tree.query_radius([0.0, 0.0], 1e-9)) == 9


@pytest.mark.parametrize("size", [1, 2, 100, 1000, 4097])
@pytest.mark.parametrize("leaf_size", [1, 8])
def test_height_is_logarithmic(size, leaf_size):
    rng = np.random.default_rng(size)
    tree = KdTree2D(rng.normal(size=(size, 2)), leaf_size=leaf_size)
    assert tree.height <= math.ceil(math.log2(size)) + 1
    assert tree.check_partition()
    assert len(tree) == size


def test_query_radius_is_strict():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.5]])
    tree = KdTree2D(points)
    assert sorted(tree.query_radius([0.0, 0.0], 1.0).tolist()) == [0, 2]


def test_admissible_query_matches_brute_force():
    rng = np.random.default_rng(2024)
    for instance in range(1000):
        size = int(rng.integers(1, 200))
        points = rng.uniform(-1.5, 1.5, size=(size, 2))
        tree = build_tree(points, leaf_size=int(rng.integers(1, 10)))
        selected = points[rng.integers(0, size, size=rng.integers(1, 6))]
        d_min = float(rng.uniform(0.0, 2.0))
        mask = rng.random(size) < 0.8
        found = admissible_query(tree, selected, d_min, mask)
        expected = brute_force_admissible(points, selected, d_min, mask)
        np.testing.assert_array_equal(
            found, expected, err_msg=f"instance {instance}"
        )


def test_admissible_query_extremes():
    rng = np.random.default_rng(7)
    points = rng.uniform(-1.0, 1.0, size=(300, 2))
    tree = build_tree(points)
    mask = np.ones(300, dtype=bool)
    everything = admissible_query(tree, points[:1], 0.0, mask)
    assert everything.tolist() == list(range(300))
    assert len(admissible_query(tree, points[:1], 10.0, mask)) == 0
    subset = admissible_query(tree, points[:1], 0.0, np.arange(10))
    assert subset.tolist() == list(range(10))


def test_empty_tree_rejected():
    with pytest.raises(EmptyPool):
        KdTree2D(np.empty((0, 2)))
