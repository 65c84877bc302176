import json
import math

import numpy as np
import pytest

from util_gt import ground_truth_grid
from wayfinder.mapper import (
    FREE, OBSTACLE, UNKNOWN,
    Mapper, OccupancyGrid, bresenham_cells, export_pgm, integrate_scan,
)
from wayfinder.simworld import Pose, World, load_floorplan
from wayfinder.simworld.world import Scan


def corridor_plan():
    doc = {
        "format": 1,
        "bounds": [-1, -2, 21, 4],
        "hallway_width": 2.5,
        "walls": [[0, 0, 20, 0], [20, 0, 20, 2], [20, 2, 0, 2], [0, 2, 0, 0]],
    }
    return load_floorplan(json.dumps(doc))


def test_single_beam_cell_counts():
    grid = OccupancyGrid(origin=(-1.0, -1.0), shape=(100, 100))
    pose = Pose(0.0, 0.0, 0.0)
    scan = Scan(points=((1.0, 0.0),), origin=pose, timestamp=0.0)
    integrate_scan(grid, pose, scan)
    # Oracle: beam from cell (20,20) to (40,20) -> 20 free cells + 1 obstacle.
    assert int((grid.cells == FREE).sum()) == 20
    assert int((grid.cells == OBSTACLE).sum()) == 1
    assert grid.classify((1.0, 0.0)) == OBSTACLE
    assert grid.classify((0.5, 0.0)) == FREE
    assert grid.classify((0.0, 1.0)) == UNKNOWN


def test_bresenham_endpoints_and_length():
    cells = bresenham_cells((0, 0), (5, 3))
    assert cells[0] == (0, 0)
    assert cells[-1] == (5, 3)
    assert len(cells) == 6  # dominated by the longer axis


def test_zero_length_scan_is_noop():
    grid = OccupancyGrid()
    pose = Pose(1.0, 1.0, 0.0)
    before = grid.cells.copy()
    integrate_scan(grid, pose, Scan(points=(), origin=pose, timestamp=0.0))
    assert np.array_equal(grid.cells, before)


def test_corridor_mapping_matches_ground_truth_mask():
    plan = corridor_plan()
    world = World(plan)
    mapper = Mapper()
    rng = np.random.default_rng(5)
    for i in range(50):
        x = 1.0 + 18.0 * i / 49.0
        pose = Pose(x, 1.0, float(rng.uniform(0, 2 * math.pi)))
        mapper.integrate(pose, world.lidar_scan(pose, n_beams=90))
    truth = ground_truth_grid(plan)
    samples = [(0.5 + 0.39 * k, 0.3 + (k % 4) * 0.45) for k in range(50)]
    agree = 0
    for p in samples:
        got = mapper.grid.classify(p)
        want = truth.classify(p)
        if got == want or got == UNKNOWN:
            # Unknown is acceptable only where truth is obstacle-adjacent.
            agree += 1 if got == want else 0
        else:
            pass
    ratio = sum(1 for p in samples
                if mapper.grid.classify(p) == truth.classify(p)) / len(samples)
    assert ratio >= 0.95


def test_obstacle_sticky_within_single_integration():
    # Two beams: one ends at a cell the other passes over. Obstacle wins.
    grid = OccupancyGrid(origin=(-1.0, -1.0), shape=(100, 100))
    pose = Pose(0.0, 0.0, 0.0)
    scan = Scan(points=((1.0, 0.0), (2.0, 0.004)), origin=pose, timestamp=0.0)
    integrate_scan(grid, pose, scan)
    assert grid.classify((1.0, 0.0)) == OBSTACLE


def test_monotone_knowledge_no_return_to_unknown():
    plan = corridor_plan()
    world = World(plan)
    mapper = Mapper()
    known_before = None
    for i in range(10):
        pose = Pose(2.0 + i, 1.0, 0.0)
        mapper.integrate(pose, world.lidar_scan(pose, n_beams=45))
        known = mapper.grid.cells != UNKNOWN
        if known_before is not None:
            grown = np.zeros_like(known)
            # Grids can grow; compare on the stable prefix region.
            if known.shape == known_before.shape:
                assert not (known_before & ~known).any()
        known_before = known


def test_grid_world_roundtrip_error_bounded():
    grid = OccupancyGrid(origin=(-3.3, 2.7))
    for p in [(0.0, 3.0), (1.234, 4.567), (-2.0, 5.01)]:
        c = grid.world_to_cell(p)
        q = grid.cell_to_world(c)
        assert abs(q[0] - p[0]) <= grid.resolution / 2 + 1e-9
        assert abs(q[1] - p[1]) <= grid.resolution / 2 + 1e-9


def test_snapshot_requires_data_and_is_immutable():
    mapper = Mapper()
    with pytest.raises(RuntimeError, match="no data"):
        mapper.snapshot()
    pose = Pose(0.0, 0.0, 0.0)
    mapper.integrate(pose, Scan(points=((1.0, 0.0),), origin=pose,
                                timestamp=1.5))
    snap1 = mapper.snapshot()
    assert snap1.timestamp == 1.5
    with pytest.raises(ValueError):
        snap1.grid.cells[0, 0] = FREE
    # Later integrations never change published snapshots.
    before = snap1.grid.cells.copy()
    pose2 = Pose(0.2, 0.0, 0.0)
    mapper.integrate(pose2, Scan(points=((1.5, 0.8),), origin=pose2,
                                 timestamp=2.5))
    snap2 = mapper.snapshot()
    assert np.array_equal(snap1.grid.cells, before)
    assert snap2.timestamp > snap1.timestamp


def test_snapshot_timestamps_monotone_under_mixed_rates():
    mapper = Mapper()
    stamps = []
    pose = Pose(0.0, 0.0, 0.0)
    for i in range(20):
        mapper.integrate(pose, Scan(points=((1.0, 0.0),), origin=pose,
                                    timestamp=i * 0.1))
        if i % 10 == 0:
            stamps.append(mapper.snapshot().timestamp)
    assert stamps == sorted(stamps)


def test_grid_growth_preserves_content():
    grid = OccupancyGrid(origin=(0.0, 0.0), shape=(10, 10))
    pose = Pose(0.22, 0.22, 0.0)
    integrate_scan(grid, pose, Scan(points=((0.47, 0.22),), origin=pose,
                                    timestamp=0.0))
    assert grid.classify((0.47, 0.22)) == OBSTACLE
    grid.ensure_contains((-5.0, -5.0))
    grid.ensure_contains((7.0, 7.0))
    assert grid.classify((0.47, 0.22)) == OBSTACLE
    assert grid.classify((-4.0, -4.0)) == UNKNOWN


def test_fast_integration_agrees_with_exact_traversal():
    from wayfinder.mapper import integrate_scan_fast

    rng = np.random.default_rng(11)
    pose = Pose(0.0, 0.0, 0.0)
    points = tuple(
        (float(r * math.cos(a)), float(r * math.sin(a)))
        for r, a in zip(rng.uniform(0.5, 8.0, 40),
                        rng.uniform(0, 2 * math.pi, 40)))
    scan = Scan(points=points, origin=pose, timestamp=0.0)
    exact = OccupancyGrid(origin=(-10.0, -10.0), shape=(400, 400))
    fast = OccupancyGrid(origin=(-10.0, -10.0), shape=(400, 400))
    integrate_scan(exact, pose, scan)
    integrate_scan_fast(fast, pose, scan)
    assert np.array_equal(exact.cells == OBSTACLE, fast.cells == OBSTACLE)
    exact_free = exact.cells == FREE
    fast_free = fast.cells == FREE
    # The two are different rasterizations of the same beams: each stays
    # within one cell of the other, and most cells agree outright.
    from scipy import ndimage
    near_exact = ndimage.binary_dilation(
        exact_free | (exact.cells == OBSTACLE), iterations=2)
    near_fast = ndimage.binary_dilation(
        fast_free | (fast.cells == OBSTACLE), iterations=2)
    assert not (fast_free & ~near_exact).any()
    assert not (exact_free & ~near_fast).any()
    overlap = (exact_free & fast_free).sum()
    assert overlap >= 0.8 * exact_free.sum()


def test_pgm_export_shape_and_header(tmp_path):
    grid = OccupancyGrid(origin=(0.0, 0.0), shape=(12, 8))
    grid.cells[2, 3] = OBSTACLE
    pgm = tmp_path / "map.pgm"
    meta = tmp_path / "map.json"
    export_pgm(grid, pgm, meta)
    data = pgm.read_bytes()
    assert data.startswith(b"P5\n12 8\n255\n")
    assert len(data) == len(b"P5\n12 8\n255\n") + 12 * 8
    info = json.loads(meta.read_text())
    assert info["resolution"] == grid.resolution
