"""Trial configuration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class TrialConfig:
    floorplan: str                 # path or bundled fixture name
    goal_tag: str
    seed: int
    giver: str = "scripted"        # scripted | oracle | interactive
    script: str | None = None      # path, for scripted mode
    wrong_turns: int = 0           # oracle mode: errors injected per plan
    start: tuple[float, float, float] | None = None  # x, y, heading degrees
    params: dict[str, str] = field(default_factory=dict)
    max_sim_seconds: float | None = None
    wait_for_human: bool = False

    def to_dict(self) -> dict:
        return {
            "floorplan": self.floorplan,
            "goal_tag": self.goal_tag,
            "seed": self.seed,
            "giver": self.giver,
            "script": self.script,
            "wrong_turns": self.wrong_turns,
            "start": list(self.start) if self.start else None,
            "params": dict(self.params),
            "max_sim_seconds": self.max_sim_seconds,
            "wait_for_human": self.wait_for_human,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrialConfig":
        start = data.get("start")
        return cls(
            floorplan=data["floorplan"],
            goal_tag=str(data["goal_tag"]),
            seed=int(data["seed"]),
            giver=data.get("giver", "scripted"),
            script=data.get("script"),
            wrong_turns=int(data.get("wrong_turns", 0)),
            start=tuple(start) if start else None,
            params=dict(data.get("params", {})),
            max_sim_seconds=data.get("max_sim_seconds"),
            wait_for_human=bool(data.get("wait_for_human", False)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "TrialConfig":
        text = Path(path).read_text(encoding="utf-8")
        return cls.from_dict(json.loads(text))
