"""Central knob box. Every tunable lives here with its default."""

from __future__ import annotations

from dataclasses import dataclass, field, fields


@dataclass
class SimConfig:
    # Robot kinematics
    linear_speed: float = 0.5          # m/s
    angular_speed: float = 1.0         # rad/s
    wall_standoff: float = 0.3         # m, motion stops this far from walls
    robot_clearance: float = 0.6       # m, circumscribed radius for drivability

    # LiDAR
    n_beams: int = 180
    lidar_max_range: float = 20.0      # m
    lidar_noise_sigma: float = 0.0     # m, Gaussian range noise

    # Camera (pinhole, mounted at robot origin facing the heading)
    image_width: int = 1280
    image_height: int = 720
    camera_hfov_deg: float = 90.0
    camera_height: float = 1.0         # m above the floor

    # Person simulation
    person_disc_radius: float = 0.15   # m, obstacle imprint radius
    person_detect_noise: float = 0.05  # m, positional noise on detections
    person_imprint_after: float = 2.0  # s stationary before appearing in scans

    # Door tags
    tag_read_range: float = 1.5        # m
    tag_read_angle_deg: float = 30.0
    tag_misread_prob: float = 0.0
    tag_normalize_confusions: bool = True

    # Synthesized image segments
    segment_drop_prob: float = 0.1
    door_lintel_height: float = 2.1    # m
    wall_band_height: float = 2.2      # m, search band for door tops

    # Grid / mapping
    grid_resolution: float = 0.05      # m per cell
    obstacle_sticky_window: float = 1.0  # s a cell resists being freed

    # Trajectories and intersections
    trajectory_distances: tuple[float, ...] = (1.2, 2.4, 3.6, 4.8, 6.0, 7.2)
    n_headings: int = 64
    tuple_angle_tol_deg: float = 15.0  # tolerance around 90-degree spacing
    suppress_radius: float = 2.0       # m, no new registrations near existing
    refine_radius: float = 5.0         # m, refine only when robot this close
    refine_grid_spacing: float = 0.4   # m, 3x3 re-detection grid
    max_location_shift: float = 2.4    # m, cumulative cap on refinement moves
    hallway_match_max_deg: float = 30.0  # correspondence edge cutoff
    visit_radius: float = 0.5          # m, graph visit trigger
    edge_link_radius: float = 3.0      # m, backward path search tolerance

    # Behavior thresholds
    track_prune_age: float = 0.5       # s without detections
    track_classify_age: float = 1.5    # s before classification
    track_speed_break: float = 2.5     # m/s, implausible pairing speed
    track_radial_rate: float = 0.3     # m/s approach/recede threshold
    approach_stop: float = 0.8         # m from person
    approach_hail_range: float = 7.0   # m
    approach_intro_range: float = 2.0  # m
    approach_goal_update: float = 0.5  # m, re-issue threshold
    conversation_timeout: float = 5.0  # s of silence
    door_approach_range: float = 3.0   # m before driving up to a door
    door_cluster_linkage: float = 0.5  # m
    door_min_cluster: int = 3          # clusters must exceed this size
    door_score_threshold: float = 0.75
    door_width_range: tuple[float, float] = (0.5, 1.25)

    # Wall extraction
    dp_epsilon: float = 0.05           # m, Douglas-Peucker tolerance
    wall_angle_cluster_deg: float = 10.0
    wall_offset_cluster: float = 0.3   # m
    post_cluster_dist: float = 0.15    # m, vertical-line 3D clustering
    top_tolerance: float = 0.15        # m, vertical slack on the top band
    post_coverage_dist: float = 0.2    # m, segments counted toward post cover

    # Harness pacing
    behavior_hz: float = 10.0
    nav_hz: float = 1.0
    scan_hz: float = 5.0
    door_pipeline_hz: float = 3.0
    snapshot_stream_hz: float = 5.0
    response_delay: float = 1.0        # s before a scripted reply lands
    max_sim_seconds: float = 600.0
    max_door_failures: int = 3         # wander cycles after exhaustive failure

    overrides: dict = field(default_factory=dict)

    def apply_overrides(self, params: dict[str, str]) -> None:
        """Apply CLI-style key=value overrides, coercing to the field type."""
        by_name = {f.name: f for f in fields(self)}
        for key, value in params.items():
            if key not in by_name:
                raise KeyError(f"unknown parameter: {key}")
            current = getattr(self, key)
            if isinstance(current, bool):
                coerced = str(value).lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                coerced = int(value)
            elif isinstance(current, float):
                coerced = float(value)
            elif isinstance(current, tuple):
                coerced = tuple(float(v) for v in str(value).split(","))
            else:
                coerced = value
            setattr(self, key, coerced)
            self.overrides[key] = value
