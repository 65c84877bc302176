import math

import numpy as np
import pytest

from wayfinder.geometry import (
    SegmentSet,
    bearing,
    norm_angle,
    point_in_polygon,
    point_segment_distance,
    ray_segment_intersection,
    rotate_point,
    signed_angle_diff,
)


def test_norm_angle_range():
    for a in (-7.0, -math.pi, 0.0, math.pi, 9.5, 2 * math.pi):
        n = norm_angle(a)
        assert 0.0 <= n < 2 * math.pi


def test_signed_angle_diff_wraps():
    assert signed_angle_diff(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    assert signed_angle_diff(2 * math.pi - 0.1, 0.1) == pytest.approx(-0.2)


def test_bearing_cardinal():
    assert bearing((0, 0), (1, 0)) == pytest.approx(0.0)
    assert bearing((0, 0), (0, 1)) == pytest.approx(math.pi / 2)


def test_point_segment_distance_endpoints_and_interior():
    assert point_segment_distance((0, 1), (0, 0), (2, 0)) == pytest.approx(1.0)
    assert point_segment_distance((-1, 0), (0, 0), (2, 0)) == pytest.approx(1.0)
    assert point_segment_distance((3, 4), (0, 0), (0, 0)) == pytest.approx(5.0)


def test_ray_segment_hit_and_miss():
    assert ray_segment_intersection((0, 0), 0.0, (2, -1), (2, 1)) == pytest.approx(2.0)
    assert ray_segment_intersection((0, 0), math.pi, (2, -1), (2, 1)) is None
    assert ray_segment_intersection((0, 0), 0.0, (2, 1), (2, 3)) is None


def test_segment_set_cast_matches_scalar_oracle():
    rng = np.random.default_rng(7)
    segments = [tuple(rng.uniform(-5, 5, size=4)) for _ in range(25)]
    walls = SegmentSet(segments)
    headings = rng.uniform(0, 2 * math.pi, size=64)
    got = walls.cast((0.3, -0.2), headings, max_range=50.0)
    for i, h in enumerate(headings):
        hits = [ray_segment_intersection((0.3, -0.2), float(h), (s[0], s[1]),
                                         (s[2], s[3])) for s in segments]
        hits = [t for t in hits if t is not None]
        expected = min(hits) if hits else math.inf
        if math.isinf(expected):
            assert math.isinf(got[i])
        else:
            assert got[i] == pytest.approx(expected, abs=1e-9)


def test_segment_set_min_distance():
    walls = SegmentSet([(0, 0, 10, 0), (10, 0, 10, 10)])
    assert walls.min_distance((5, 3)) == pytest.approx(3.0)
    assert walls.min_distance((12, 12)) == pytest.approx(math.hypot(2, 2))


def test_point_in_polygon_square():
    square = [(0, 0), (4, 0), (4, 4), (0, 4)]
    assert point_in_polygon((2, 2), square)
    assert not point_in_polygon((5, 2), square)


def test_rotate_point_quarter_turn():
    x, y = rotate_point((1.0, 0.0), math.pi / 2)
    assert x == pytest.approx(0.0, abs=1e-12)
    assert y == pytest.approx(1.0)
