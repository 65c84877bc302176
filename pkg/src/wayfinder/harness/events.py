"""Trial event stream: one structured record per line, replayable and
hashable."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

LOG_VERSION = 1


def canonical(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


class EventLog:
    def __init__(self):
        self.records: list[dict] = []

    def emit(self, t: float, kind: str, payload: dict) -> None:
        self.records.append({"v": LOG_VERSION, "t": round(t, 4),
                             "kind": kind, "payload": payload})

    def lines(self) -> list[str]:
        return [canonical(r) for r in self.records]

    def digest(self) -> str:
        h = hashlib.sha256()
        for line in self.lines():
            h.update(line.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def write(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.lines()) + "\n",
                              encoding="utf-8")

    def of_kind(self, kind: str) -> list[dict]:
        return [r for r in self.records if r["kind"] == kind]


def read_log(path: str | Path) -> list[dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [json.loads(line) for line in lines if line.strip()]
