#!/usr/bin/env python3
"""Generate the bundled floor-plan fixture library.

Corridors are described as rectangles (or arbitrary polygons); walls come
from the boundary of their union. Each fixture carries annotations: a start
pose, a centerline node graph, ground-truth intersections, and a sweep order
that covers every corridor. Run from the repository root:

    python3 tools/make_fixtures.py [--verify]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from shapely.geometry import LineString, Polygon, box
from shapely.ops import unary_union

OUT = Path(__file__).resolve().parent.parent / "src" / "wayfinder" / "fixtures"

W = 2.0  # default corridor width


def diag_corridor(a, b, width=2.6):
    return LineString([a, b]).buffer(width / 2.0, cap_style=2, join_style=2)


def walls_from_shapes(shapes) -> list[list[float]]:
    union = unary_union(shapes).simplify(0.0)
    segs = []

    def ring_segments(ring):
        pts = [(round(x, 3), round(y, 3)) for x, y in ring.coords]
        for i in range(len(pts) - 1):
            if pts[i] != pts[i + 1]:
                segs.append([pts[i][0], pts[i][1], pts[i + 1][0], pts[i + 1][1]])

    polys = [union] if union.geom_type == "Polygon" else list(union.geoms)
    for poly in polys:
        ring_segments(poly.exterior)
        for interior in poly.interiors:
            ring_segments(interior)
    return segs


def door(x1, y1, x2, y2, tag, side=""):
    return {"posts": [[x1, y1], [x2, y2]], "tag": tag, "side": side}


def fixture(name, shapes, doors=(), persons=(), hallway_width=3.2,
            margin=0.5, annotations=None):
    union = unary_union(list(shapes))
    minx, miny, maxx, maxy = union.bounds
    return name, {
        "format": 1,
        "bounds": [round(minx - margin, 2), round(miny - margin, 2),
                   round(maxx + margin, 2), round(maxy + margin, 2)],
        "hallway_width": hallway_width,
        "walls": walls_from_shapes(shapes),
        "doors": list(doors),
        "persons": [{"position": list(p), "waypoints": [], "responses": {}}
                    for p in persons],
        "annotations": annotations or {},
    }, union


def hcorr(y, x0, x1, half=1.3):
    return box(x0, y - half, x1, y + half)


def vcorr(x, y0, y1, half=1.3):
    return box(x - half, y0, x + half, y1)


def build_all():
    out = []

    out.append(fixture(
        "corridor_straight",
        [hcorr(0, 0, 20)],
        doors=[door(8.0, 1.3, 8.9, 1.3, "101"),
               door(10.0, -1.3, 10.9, -1.3, "102"),
               door(13.0, 1.3, 13.9, 1.3, "103")],
        persons=[(15.0, -0.75)],
        annotations={
            "start": [2.0, 0.0, 0.0],
            "nodes": {"A": [1.0, 0.0], "B": [19.0, 0.0]},
            "edges": [["A", "B"]],
            "intersections": {},
            "sweep": ["A", "B"],
        }))

    out.append(fixture(
        "corridor_l",
        [hcorr(0, 0, 11.3), vcorr(10, -1.3, 12)],
        doors=[door(8.7, 6.0, 8.7, 6.9, "201"),
               door(11.3, 8.0, 11.3, 8.9, "202"),
               door(4.0, -1.3, 4.9, -1.3, "203")],
        persons=[(6.0, -0.75)],
        annotations={
            "start": [1.5, 0.0, 0.0],
            "nodes": {"A": [1.0, 0.0], "C": [10.0, 0.0], "B": [10.0, 11.0]},
            "edges": [["A", "C"], ["C", "B"]],
            "intersections": {"C": "elbow"},
            "sweep": ["A", "C", "B"],
        }))

    out.append(fixture(
        "corridor_t",
        [hcorr(8, 0, 20), vcorr(10, 0, 9.3)],
        doors=[door(4.0, 9.3, 4.9, 9.3, "301"),
               door(14.0, 6.7, 14.9, 6.7, "302"),
               door(8.7, 3.0, 8.7, 3.9, "303")],
        persons=[(10.75, 4.0)],
        annotations={
            "start": [10.0, 1.0, 90.0],
            "nodes": {"S": [10.0, 1.0], "C": [10.0, 8.0],
                      "L": [1.0, 8.0], "R": [19.0, 8.0]},
            "edges": [["S", "C"], ["C", "L"], ["C", "R"]],
            "intersections": {"C": "three-way"},
            "sweep": ["S", "C", "L", "C", "R"],
        }))

    out.append(fixture(
        "corridor_plus",
        [hcorr(8, 0, 20), vcorr(10, 0, 16)],
        doors=[door(4.0, 9.3, 4.9, 9.3, "401"),
               door(15.0, 6.7, 15.9, 6.7, "402"),
               door(8.7, 12.0, 8.7, 12.9, "403")],
        persons=[(10.75, 4.0)],
        annotations={
            "start": [10.0, 1.0, 90.0],
            "nodes": {"S": [10.0, 1.0], "C": [10.0, 8.0], "W": [1.0, 8.0],
                      "E": [19.0, 8.0], "N": [10.0, 15.0]},
            "edges": [["S", "C"], ["C", "W"], ["C", "E"], ["C", "N"]],
            "intersections": {"C": "four-way"},
            "sweep": ["S", "C", "W", "C", "N", "C", "E"],
        }))

    out.append(fixture(
        "plus_short_stubs",
        [hcorr(8, 0, 20), vcorr(10, 4.5, 11.5)],
        doors=[door(5.0, 9.3, 5.9, 9.3, "501"),
               door(14.0, 6.7, 14.9, 6.7, "502")],
        persons=[(16.0, 7.45)],
        annotations={
            "start": [2.0, 8.0, 0.0],
            "nodes": {"W": [1.0, 8.0], "C": [10.0, 8.0], "E": [19.0, 8.0],
                      "S": [10.0, 5.2], "N": [10.0, 10.8]},
            "edges": [["W", "C"], ["C", "E"], ["C", "S"], ["C", "N"]],
            "intersections": {"C": "four-way"},
            "detect_scales": {"C": [1.2, 2.4]},
            "sweep": ["W", "C", "E"],
        }))

    out.append(fixture(
        "wide_entry_elbow",
        [hcorr(0, 0, 14), box(10, -1.3, 15, 5.2), vcorr(12.5, 5.2, 12)],
        doors=[door(11.2, 7.0, 11.2, 7.9, "601"),
               door(5.0, -1.3, 5.9, -1.3, "602")],
        persons=[(6.0, -0.75)],
        annotations={
            "start": [1.0, 0.0, 0.0],
            "nodes": {"A": [1.0, 0.0], "C": [12.5, 0.0], "B": [12.5, 11.0]},
            "edges": [["A", "C"], ["C", "B"]],
            "intersections": {"C": "elbow"},
            "detect_scales": {"C": [4.8, 6.0, 7.2]},
            "sweep": ["A", "C", "B"],
        }))

    out.append(fixture(
        "corridor_45",
        [hcorr(0, 0, 16), diag_corridor((8.0, 0.0), (12.2, 4.2), 2.6),
         vcorr(15, -1.3, 10)],
        doors=[door(3.0, 1.3, 3.9, 1.3, "701"),
               door(16.3, 5.0, 16.3, 5.9, "702")],
        persons=[(5.0, -0.75)],
        annotations={
            "start": [1.0, 0.0, 0.0],
            "nodes": {"A": [1.0, 0.0], "Br": [8.0, 0.0], "BrEnd": [11.9, 3.9],
                      "C": [15.0, 0.0], "B": [15.0, 9.0]},
            "edges": [["A", "Br"], ["Br", "BrEnd"], ["Br", "C"], ["C", "B"]],
            "intersections": {"C": "elbow"},
            "sweep": ["A", "Br", "C", "B"],
        }))

    out.append(fixture(
        "alcove_corridor",
        [hcorr(0, 0, 20), box(8, 1.3, 12, 2.7)],
        doors=[door(5.0, 1.3, 5.9, 1.3, "801"),
               door(15.0, -1.3, 15.9, -1.3, "802")],
        persons=[(16.0, -0.75)],
        annotations={
            "start": [1.0, 0.0, 0.0],
            "nodes": {"A": [1.0, 0.0], "B": [19.0, 0.0]},
            "edges": [["A", "B"]],
            "intersections": {},
            "sweep": ["A", "B"],
        }))

    out.append(fixture(
        "corridor_loop",
        [hcorr(0, -1.3, 15.3), hcorr(10, -1.3, 15.3),
         vcorr(0, -1.3, 11.3), vcorr(14, -1.3, 11.3)],
        doors=[door(6.0, -1.3, 6.9, -1.3, "901"),
               door(8.0, 11.3, 8.9, 11.3, "902"),
               door(-1.3, 5.0, -1.3, 5.9, "903"),
               door(15.3, 6.0, 15.3, 6.9, "904")],
        persons=[(10.0, -0.75)],
        annotations={
            "start": [5.0, 0.0, 0.0],
            "nodes": {"c1": [0.0, 0.0], "c2": [14.0, 0.0],
                      "c3": [14.0, 10.0], "c4": [0.0, 10.0]},
            "edges": [["c1", "c2"], ["c2", "c3"], ["c3", "c4"], ["c4", "c1"]],
            "intersections": {"c1": "elbow", "c2": "elbow",
                              "c3": "elbow", "c4": "elbow"},
            "sweep": ["c1", "c2", "c3", "c4", "c1"],
        }))

    out.append(fixture(
        "corridor_doors",
        [hcorr(0, 0, 24)],
        doors=[door(6.0, 1.3, 6.9, 1.3, "331", "left"),
               door(10.0, 1.3, 10.9, 1.3, "333", "left"),
               door(14.0, 1.3, 14.9, 1.3, "335", "left"),
               door(8.0, -1.3, 8.9, -1.3, "330", "right"),
               door(12.0, -1.3, 12.9, -1.3, "332", "right"),
               door(16.0, -1.3, 16.9, -1.3, "334", "right")],
        persons=[(20.0, -0.75)],
        annotations={
            "start": [1.0, 0.0, 0.0],
            "nodes": {"A": [1.0, 0.0], "B": [23.0, 0.0]},
            "edges": [["A", "B"]],
            "intersections": {},
            "hallway": ["A", "B"],
            "sweep": ["A", "B"],
        }))

    out.append(fixture(
        "corridor_double_t",
        [hcorr(8, 0, 24), vcorr(6, 0, 9.3), vcorr(18, 0, 9.3)],
        doors=[door(2.0, 9.3, 2.9, 9.3, "111"),
               door(11.0, 6.7, 11.9, 6.7, "112"),
               door(4.7, 3.0, 4.7, 3.9, "113"),
               door(19.3, 4.0, 19.3, 4.9, "114")],
        persons=[(12.0, 8.75)],
        annotations={
            "start": [6.0, 1.0, 90.0],
            "nodes": {"S1": [6.0, 1.0], "T1": [6.0, 8.0], "W": [1.0, 8.0],
                      "T2": [18.0, 8.0], "E": [23.0, 8.0], "S2": [18.0, 1.0]},
            "edges": [["S1", "T1"], ["T1", "W"], ["T1", "T2"],
                      ["T2", "E"], ["T2", "S2"]],
            "intersections": {"T1": "three-way", "T2": "three-way"},
            "sweep": ["S1", "T1", "W", "T1", "T2", "S2", "T2", "E"],
        }))

    out.append(fixture(
        "corridor_u",
        [vcorr(0, 0, 11.3), hcorr(10, -1.3, 13.3), vcorr(12, 0, 11.3)],
        doors=[door(1.3, 4.0, 1.3, 4.9, "121"),
               door(6.0, 11.3, 6.9, 11.3, "122"),
               door(10.7, 6.0, 10.7, 6.9, "123")],
        persons=[(6.0, 9.45)],
        annotations={
            "start": [0.0, 2.0, 90.0],
            "nodes": {"A": [0.0, 1.0], "c1": [0.0, 10.0],
                      "c2": [12.0, 10.0], "B": [12.0, 1.0]},
            "edges": [["A", "c1"], ["c1", "c2"], ["c2", "B"]],
            "intersections": {"c1": "elbow", "c2": "elbow"},
            "sweep": ["A", "c1", "c2", "B"],
        }))

    out.append(fixture(
        "office_floor",
        [hcorr(0, -1.3, 19.3), hcorr(12, -1.3, 19.3),
         vcorr(0, -1.3, 13.3), vcorr(18, -1.3, 13.3),
         vcorr(9, -8, 1.3)],
        doors=[door(7.7, -5.0, 7.7, -4.1, "710"),
               door(10.3, -3.0, 10.3, -2.1, "711"),
               door(4.0, -1.3, 4.9, -1.3, "721"),
               door(14.0, -1.3, 14.9, -1.3, "722"),
               door(19.3, 6.0, 19.3, 6.9, "723"),
               door(8.0, 13.3, 8.9, 13.3, "724")],
        persons=[(9.75, -4.0)],
        annotations={
            "start": [9.0, -6.5, 90.0],
            "nodes": {"S": [9.0, -7.0], "T": [9.0, 0.0], "c1": [0.0, 0.0],
                      "c2": [18.0, 0.0], "c3": [18.0, 12.0],
                      "c4": [0.0, 12.0]},
            "edges": [["S", "T"], ["T", "c1"], ["T", "c2"], ["c1", "c4"],
                      ["c4", "c3"], ["c3", "c2"]],
            "intersections": {"T": "three-way", "c1": "elbow", "c2": "elbow",
                              "c3": "elbow", "c4": "elbow"},
            "sweep": ["S", "T", "c1", "c4", "c3", "c2", "T"],
        }))

    return out


def verify(name, doc, union):
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
    from util_gt import ground_truth_grid

    from wayfinder.config import SimConfig
    from wayfinder.nav.trajectories import ClearanceField
    from wayfinder.nav.intersections import detect_intersection
    from wayfinder.simworld.floorplan import load_floorplan

    plan = load_floorplan(json.dumps(doc))
    grid = ground_truth_grid(plan)
    config = SimConfig()
    ann = doc["annotations"]
    problems = []
    for node, expected in ann.get("intersections", {}).items():
        at = tuple(ann["nodes"][node])
        field = ClearanceField(grid, at, half_extent=9.0)
        det = detect_intersection(field, at, doc["hallway_width"], config)
        if det is None:
            problems.append(f"{node}: no detection (expected {expected})")
        elif det.type != expected:
            problems.append(f"{node}: detected {det.type}, expected {expected} "
                            f"at scale {det.scale}")
        scales = ann.get("detect_scales", {}).get(node)
        if scales and det is not None and det.scale not in scales:
            problems.append(f"{node}: winning scale {det.scale} not in {scales}")
    # Non-intersection probes: nodes without ground truth should not detect.
    for node, at in ann.get("nodes", {}).items():
        if node in ann.get("intersections", {}):
            continue
        at = tuple(at)
        field = ClearanceField(grid, at, half_extent=9.0)
        det = detect_intersection(field, at, doc["hallway_width"], config)
        if det is not None:
            problems.append(f"{node}: spurious {det.type} at scale {det.scale}")
    status = "ok" if not problems else "FAIL"
    print(f"  [{status}] {name}")
    for p in problems:
        print(f"      - {p}")
    return not problems


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--verify", action="store_true",
                        help="check annotations against the detector")
    args = parser.parse_args()
    OUT.mkdir(parents=True, exist_ok=True)
    ok = True
    for name, doc, union in build_all():
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1), encoding="utf-8")
        print(f"wrote {path.relative_to(OUT.parent.parent.parent)}"
              f" ({len(doc['walls'])} walls)")
        if args.verify:
            ok = verify(name, doc, union) and ok
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
