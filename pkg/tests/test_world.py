import json
import math

import pytest

from wayfinder.config import SimConfig
from wayfinder.geometry import ray_segment_intersection
from wayfinder.rng import TrialRandom
from wayfinder.simworld import CameraModel, Pose, World, load_floorplan
from wayfinder.simworld.world import CONFUSION_TABLE


def square_room(size=10.0):
    doc = {
        "format": 1,
        "bounds": [-1, -1, size + 1, size + 1],
        "hallway_width": 2.5,
        "walls": [[0, 0, size, 0], [size, 0, size, size],
                  [size, size, 0, size], [0, size, 0, 0]],
    }
    return load_floorplan(json.dumps(doc))


def l_corridor():
    doc = {
        "format": 1,
        "bounds": [-1, -1, 13, 13],
        "hallway_width": 2.5,
        "walls": [[0, 0, 12, 0], [12, 0, 12, 12], [12, 12, 10, 12],
                  [10, 12, 10, 2], [10, 2, 0, 2], [0, 2, 0, 0]],
    }
    return load_floorplan(json.dumps(doc))


def test_lidar_centered_square_four_beams():
    world = World(square_room(10.0))
    scan = world.lidar_scan(Pose(5, 5, 0), n_beams=4)
    assert len(scan.points) == 4
    for p in scan.points:
        assert math.dist(p, (5, 5)) == pytest.approx(5.0, abs=1e-9)


def test_lidar_no_hit_beam_omitted():
    # A 50 m corridor open along +x: the axis beam exceeds max range.
    doc = {
        "format": 1,
        "bounds": [-1, -2, 51, 2],
        "hallway_width": 2.5,
        "walls": [[0, -1, 50, -1], [0, 1, 50, 1], [0, -1, 0, 1]],
    }
    world = World(load_floorplan(json.dumps(doc)))
    scan = world.lidar_scan(Pose(2, 0, 0), n_beams=4)
    # +x beam (heading 0) has no wall within 20 m; the others hit.
    assert len(scan.points) == 3


def test_lidar_matches_brute_force_oracle_in_l_corridor():
    plan = l_corridor()
    world = World(plan)
    pose = Pose(5.0, 1.0, 0.7)
    scan = world.lidar_scan(pose, n_beams=64)
    max_range = world.config.lidar_max_range
    expected = []
    for i in range(64):
        h = pose.heading + 2 * math.pi * i / 64
        hits = [ray_segment_intersection(pose.point, h, (w[0], w[1]),
                                         (w[2], w[3])) for w in plan.walls]
        hits = [t for t in hits if t is not None and t <= max_range]
        if hits:
            r = min(hits)
            expected.append((pose.x + r * math.cos(h),
                             pose.y + r * math.sin(h)))
    assert len(scan.points) == len(expected)
    for got, want in zip(scan.points, expected):
        assert got[0] == pytest.approx(want[0], abs=1e-9)
        assert got[1] == pytest.approx(want[1], abs=1e-9)


def test_lidar_points_never_inside_walls():
    world = World(l_corridor())
    for pose in (Pose(1, 1, 0.3), Pose(8, 1, 2.0), Pose(11, 8, 4.0)):
        scan = world.lidar_scan(pose, n_beams=90)
        for p in scan.points:
            assert world.walls.min_distance(p) <= 1e-6


def test_lidar_outside_bounds_rejected():
    world = World(square_room())
    with pytest.raises(ValueError, match="bounds"):
        world.lidar_scan(Pose(50, 50, 0))


def test_rotate_to_target_heading():
    world = World(square_room())
    result = world.step_robot(Pose(5, 5, 0), {"kind": "rotate", "heading": math.pi},
                              dt=10.0)
    assert result.pose.heading == pytest.approx(math.pi)
    assert not result.blocked


def test_drive_advances_at_linear_speed():
    world = World(square_room())
    result = world.step_robot(Pose(5, 5, 0), {"kind": "drive", "x": 6.0, "y": 5.0},
                              dt=1.0)
    assert result.pose.x == pytest.approx(5.5)
    assert result.pose.y == pytest.approx(5.0)


def test_drive_into_wall_blocks_at_standoff():
    # A thin dead-end slot: no way around, so motion terminates blocked at
    # the standoff distance from the end wall.
    doc = {
        "format": 1,
        "bounds": [-1, 3, 11, 7],
        "hallway_width": 2.5,
        "walls": [[0, 4.55, 10, 4.55], [10, 4.55, 10, 5.45],
                  [10, 5.45, 0, 5.45], [0, 5.45, 0, 4.55]],
    }
    world = World(load_floorplan(json.dumps(doc)))
    pose = Pose(9.0, 5.0, 0.0)
    for _ in range(20):
        result = world.step_robot(pose, {"kind": "drive", "x": 12.0, "y": 5.0},
                                  dt=1.0)
        pose = result.pose
        if result.blocked:
            break
    assert result.blocked
    assert world.walls.min_distance(pose.point) >= world.config.wall_standoff - 1e-6
    assert pose.x == pytest.approx(10.0 - world.config.wall_standoff, abs=0.03)


def test_drive_slides_around_corner_toward_reachable_target():
    # Target diagonally past a wall edge: the slide candidates carry the
    # robot around the corner while keeping clear of the walls.
    world = World(square_room())
    pose = Pose(9.55, 2.0, math.pi / 2)  # hugging the east wall, heading north
    target = (8.0, 6.0)
    for _ in range(40):
        result = world.step_robot(pose, {"kind": "drive",
                                         "x": target[0], "y": target[1]},
                                  dt=0.5)
        pose = result.pose
        if math.dist(pose.point, target) < 0.2:
            break
    assert math.dist(pose.point, target) < 0.2


def test_wedged_robot_escapes_the_standoff_band():
    world = World(square_room())
    # Force a pose inside the standoff band, then command a drive whose
    # direction is hopeless: the escape move still gains clearance.
    pose = Pose(9.85, 5.0, 0.0)
    start_clearance = world.walls.min_distance(pose.point)
    assert start_clearance < world.config.wall_standoff
    result = world.step_robot(pose, {"kind": "drive", "x": 12.0, "y": 5.0},
                              dt=0.5)
    assert world.walls.min_distance(result.pose.point) > start_clearance


def test_person_behind_wall_excluded():
    plan = l_corridor()
    plan.persons.append(__import__("wayfinder.simworld.floorplan",
                                   fromlist=["PersonScript"]).PersonScript(
        position=(11.0, 8.0)))
    world = World(plan)
    camera = CameraModel()
    # Robot in the horizontal leg looking along +x: person is around the corner.
    seen = world.visible_persons(Pose(2.0, 1.0, 0.0), camera)
    assert seen == []


def test_person_outside_fov_excluded():
    plan = square_room()
    from wayfinder.simworld.floorplan import PersonScript
    plan.persons.append(PersonScript(position=(5.0, 9.0)))
    world = World(plan)
    camera = CameraModel()
    # Looking along +x, the person sits 90 degrees left, outside a 90 deg fov.
    assert world.visible_persons(Pose(5.0, 5.0, 0.0), camera) == []
    assert len(world.visible_persons(Pose(5.0, 5.0, math.pi / 2), camera)) == 1


def test_person_ahead_localized_at_true_position_when_noiseless():
    plan = square_room()
    from wayfinder.simworld.floorplan import PersonScript
    plan.persons.append(PersonScript(position=(7.0, 5.0)))
    config = SimConfig(person_detect_noise=0.0)
    world = World(plan, config)
    (point, stamp), = world.visible_persons(Pose(2.0, 5.0, 0.0), CameraModel())
    # Localized at the nearest point of the person disc facing the robot.
    assert point[0] == pytest.approx(7.0 - config.person_disc_radius)
    assert point[1] == pytest.approx(5.0)


def test_stationary_person_appears_in_scans_after_imprint_delay():
    plan = square_room()
    from wayfinder.simworld.floorplan import PersonScript
    plan.persons.append(PersonScript(position=(7.0, 5.0)))
    world = World(plan)
    pose = Pose(2.0, 5.0, 0.0)
    early = world.lidar_scan(pose, n_beams=1)  # beam along +x
    for _ in range(25):
        world.step(0.1)
    late = world.lidar_scan(pose, n_beams=1)
    assert early.points[0][0] == pytest.approx(10.0)
    assert late.points[0][0] == pytest.approx(
        7.0 - world.config.person_disc_radius, abs=1e-6)


def test_read_tag_exact_when_no_misread():
    plan = square_room()
    plan.doors.append(__import__("wayfinder.simworld.floorplan",
                                 fromlist=["Door"]).Door(
        (4.0, 0.0), (4.9, 0.0), "g010"))
    world = World(plan)
    pose = Pose(4.45, 1.0, -math.pi / 2)
    assert world.read_door_tag(pose, 0) == "g010"


def test_read_tag_misread_with_forced_confusion():
    plan = square_room()
    from wayfinder.simworld.floorplan import Door
    plan.doors.append(Door((4.0, 0.0), (4.9, 0.0), "g010"))
    config = SimConfig(tag_misread_prob=1.0)
    world = World(plan, config, TrialRandom(3))
    pose = Pose(4.45, 1.0, -math.pi / 2)
    assert world.read_door_tag(pose, 0) == "goio"


def test_read_tag_unreadable_when_far_or_misaligned():
    plan = square_room()
    from wayfinder.simworld.floorplan import Door
    plan.doors.append(Door((4.0, 0.0), (4.9, 0.0), "g010"))
    world = World(plan)
    assert world.read_door_tag(Pose(4.45, 3.0, -math.pi / 2), 0) == "unreadable"
    assert world.read_door_tag(Pose(4.45, 1.0, 0.0), 0) == "unreadable"


def test_confusion_table_is_involutive():
    for a, b in CONFUSION_TABLE.items():
        assert CONFUSION_TABLE[b] == a


def test_determinism_same_seed_same_outputs():
    def run():
        plan = square_room()
        from wayfinder.simworld.floorplan import PersonScript
        plan.persons.append(PersonScript(position=(7.0, 5.0),
                                         waypoints=[(8.0, 6.0, 0.5)]))
        config = SimConfig(lidar_noise_sigma=0.01)
        world = World(plan, config, TrialRandom(42))
        outputs = []
        pose = Pose(2.0, 5.0, 0.1)
        for _ in range(30):
            world.step(0.1)
            scan = world.lidar_scan(pose, n_beams=16)
            persons = world.visible_persons(pose, CameraModel())
            outputs.append((scan.points, tuple(persons)))
        return outputs

    assert run() == run()
