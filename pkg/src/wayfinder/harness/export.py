"""Artifact export: event log, SVG map overlay, transcript, metrics."""

from __future__ import annotations

import json
import math
from pathlib import Path

from .runner import TrialRecord


def _svg_map(record: TrialRecord, plan) -> str:
    x0, y0, x1, y1 = plan.bounds
    scale = 30.0
    width = (x1 - x0) * scale
    height = (y1 - y0) * scale

    def sx(x):
        return (x - x0) * scale

    def sy(y):
        return (y1 - y) * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
             f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
             f'<rect width="{width:.0f}" height="{height:.0f}" fill="#fff"/>']
    for (wx1, wy1, wx2, wy2) in plan.walls:
        parts.append(f'<line x1="{sx(wx1):.1f}" y1="{sy(wy1):.1f}" '
                     f'x2="{sx(wx2):.1f}" y2="{sy(wy2):.1f}" '
                     'stroke="#444" stroke-width="2"/>')
    if record.path:
        points = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for (x, y) in record.path)
        parts.append(f'<polyline points="{points}" fill="none" '
                     'stroke="red" stroke-width="2"/>')
    for vertex in record.qmap_export.get("vertices", []):
        vx, vy = vertex["location"]
        for hall in vertex["hallways"]:
            hx, hy = hall["target"]
            dx, dy = hx - vx, hy - vy
            norm = math.hypot(dx, dy) or 1.0
            tip_x, tip_y = vx + dx / norm * 1.5, vy + dy / norm * 1.5
            color = "#e0c010" if hall["active"] else "#d8d8d8"
            parts.append(f'<line x1="{sx(vx):.1f}" y1="{sy(vy):.1f}" '
                         f'x2="{sx(tip_x):.1f}" y2="{sy(tip_y):.1f}" '
                         f'stroke="{color}" stroke-width="3"/>')
        parts.append(f'<circle cx="{sx(vx):.1f}" cy="{sy(vy):.1f}" r="6" '
                     'fill="blue"/>')
        parts.append(f'<text x="{sx(vx) + 8:.1f}" y="{sy(vy) - 8:.1f}" '
                     f'font-size="10">{vertex["type"]}</text>')
    for door in plan.doors:
        cx, cy = door.center
        parts.append(f'<rect x="{sx(cx) - 4:.1f}" y="{sy(cy) - 4:.1f}" '
                     'width="8" height="8" fill="green"/>')
        parts.append(f'<text x="{sx(cx) + 6:.1f}" y="{sy(cy) + 4:.1f}" '
                     f'font-size="9">{door.tag}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def transcript_lines(record: TrialRecord) -> list[str]:
    lines = []
    for rec in record.log.of_kind("utterance"):
        payload = rec["payload"]
        speaker = "Robot" if payload.get("speaker") == "robot" else "Person"
        lines.append(f'{speaker}: {payload.get("text", "")}')
    return lines


def export_artifacts(record: TrialRecord, out_dir: str | Path) -> dict:
    from .metrics import compute_metrics
    from .runner import load_plan

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plan = load_plan(record.config.floorplan)
    record.log.write(out / "events.jsonl")
    (out / "map.svg").write_text(_svg_map(record, plan), encoding="utf-8")
    (out / "transcript.txt").write_text(
        "\n".join(transcript_lines(record)) + "\n", encoding="utf-8")
    (out / "qualitative_map.json").write_text(
        json.dumps(record.qmap_export, indent=2), encoding="utf-8")
    summary = compute_metrics([record])
    summary["outcome"] = record.outcome
    summary["digest"] = record.digest
    (out / "metrics.json").write_text(json.dumps(summary, indent=2),
                                      encoding="utf-8")
    return {"events": out / "events.jsonl", "map": out / "map.svg",
            "transcript": out / "transcript.txt",
            "metrics": out / "metrics.json"}
