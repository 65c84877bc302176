"""Live session service for an interactive direction-giver.

Speaks newline-delimited JSON frames over TCP, and the same frames over
WebSocket (RFC 6455 text frames, no extensions) for browser clients; the
path requested during the opening handshake is ignored. One client drives
one trial. Outbound frames: hello, snapshot, query, utterance, plan,
transition, trial-end, error. Inbound messages: utterance, misunderstood,
start-over, control.
"""

from __future__ import annotations

import base64
import hashlib
import json
import queue
import socket
import struct
import threading
import time as wall_time

from ..behaviors.fsm import CONVERSE
from .config import TrialConfig
from .runner import Trial, TrialRecord

PROTOCOL_VERSION = 1
_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


class SessionGiver:
    """Feeds the conversation from a queue of inbound client messages."""

    def __init__(self, inbound: "queue.Queue[dict]", response_delay: float):
        self.inbound = inbound
        self.response_delay = response_delay
        self._ready: dict | None = None
        self._ready_at: float | None = None
        self.waiting = False

    def ask(self, query_text: str, query_type: str, t: float) -> None:
        self.waiting = True

    def poll(self, t: float) -> dict | None:
        if self._ready is None:
            try:
                self._ready = self.inbound.get_nowait()
                self._ready_at = t + self.response_delay
            except queue.Empty:
                return None
        if t < self._ready_at:
            return None
        event = self._ready
        self._ready = None
        self.waiting = False
        return event


class _Transport:
    """A connected client; reads inbound lines/frames, writes outbound."""

    def __init__(self, conn: socket.socket):
        self.conn = conn
        self.is_websocket = False
        self.buffer = b""

    def handshake(self) -> bool:
        """Peek the first bytes; upgrade to WebSocket on an HTTP request."""
        self.conn.settimeout(5.0)
        try:
            first = self.conn.recv(4096)
        except socket.timeout:
            self.conn.settimeout(0.0)
            return True  # a silent TCP client is fine
        if not first:
            return False
        if first.startswith(b"GET "):
            header_blob = first
            while b"\r\n\r\n" not in header_blob:
                header_blob += self.conn.recv(4096)
            headers = {}
            for line in header_blob.split(b"\r\n")[1:]:
                if b":" in line:
                    key, _, value = line.partition(b":")
                    headers[key.strip().lower()] = value.strip()
            key = headers.get(b"sec-websocket-key", b"")
            accept = base64.b64encode(hashlib.sha1(
                key + _WS_GUID.encode()).digest())
            self.conn.sendall(
                b"HTTP/1.1 101 Switching Protocols\r\n"
                b"Upgrade: websocket\r\nConnection: Upgrade\r\n"
                b"Sec-WebSocket-Accept: " + accept + b"\r\n\r\n")
            self.is_websocket = True
        else:
            self.buffer = first
        self.conn.settimeout(0.0)
        return True

    def send_json(self, frame: dict) -> None:
        data = json.dumps(frame, sort_keys=True).encode("utf-8")
        if self.is_websocket:
            header = b"\x81"
            n = len(data)
            if n < 126:
                header += struct.pack("!B", n)
            elif n < 65536:
                header += struct.pack("!BH", 126, n)
            else:
                header += struct.pack("!BQ", 127, n)
            self.conn.sendall(header + data)
        else:
            self.conn.sendall(data + b"\n")

    def read_messages(self) -> list[dict]:
        """Drain whatever the client has sent; non-blocking."""
        try:
            while True:
                chunk = self.conn.recv(65536)
                if not chunk:
                    break
                self.buffer += chunk
        except (BlockingIOError, socket.timeout):
            pass
        except OSError:
            return []
        out = []
        if self.is_websocket:
            while True:
                parsed = self._parse_ws_frame()
                if parsed is None:
                    break
                out.append(parsed)
        else:
            while b"\n" in self.buffer:
                line, _, self.buffer = self.buffer.partition(b"\n")
                if line.strip():
                    out.append(self._decode(line))
        return [m for m in out if m is not None]

    def _parse_ws_frame(self):
        buf = self.buffer
        if len(buf) < 2:
            return None
        length = buf[1] & 0x7F
        masked = bool(buf[1] & 0x80)
        offset = 2
        if length == 126:
            if len(buf) < 4:
                return None
            length = struct.unpack("!H", buf[2:4])[0]
            offset = 4
        elif length == 127:
            if len(buf) < 10:
                return None
            length = struct.unpack("!Q", buf[2:10])[0]
            offset = 10
        mask = b""
        if masked:
            if len(buf) < offset + 4:
                return None
            mask = buf[offset:offset + 4]
            offset += 4
        if len(buf) < offset + length:
            return None
        payload = buf[offset:offset + length]
        self.buffer = buf[offset + length:]
        if masked:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        opcode = buf[0] & 0x0F
        if opcode == 0x8:  # close
            return {"kind": "control", "action": "disconnect"}
        if opcode not in (0x1, 0x2):
            return None
        return self._decode(payload)

    @staticmethod
    def _decode(raw: bytes):
        try:
            return json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            return {"kind": "malformed", "raw": raw[:200].decode(
                "utf-8", "replace")}

    def close(self):
        try:
            self.conn.close()
        except OSError:
            pass


class SessionServer:
    """Runs one trial per connected client."""

    def __init__(self, config: TrialConfig, port: int = 0):
        if config.giver != "interactive":
            raise ValueError("session service needs giver mode interactive")
        self.config = config
        self.listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self.listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self.listener.bind(("127.0.0.1", port))
        self.listener.listen(1)
        self.port = self.listener.getsockname()[1]
        self.record: TrialRecord | None = None

    def serve_one(self) -> TrialRecord:
        conn, _ = self.listener.accept()
        transport = _Transport(conn)
        if not transport.handshake():
            transport.close()
            raise RuntimeError("client handshake failed")
        try:
            self.record = self._run_session(transport)
        finally:
            transport.close()
            self.listener.close()
        return self.record

    def _run_session(self, transport: _Transport) -> TrialRecord:
        inbound: queue.Queue[dict] = queue.Queue()
        giver = SessionGiver(inbound, 0.2)
        trial = Trial(self.config, giver=giver)
        cfg = trial.sim_config
        stream_every = max(1, round(cfg.behavior_hz / cfg.snapshot_stream_hz))
        transport.send_json({"v": PROTOCOL_VERSION, "type": "hello",
                             "goal": self.config.goal_tag,
                             "floorplan": self.config.floorplan,
                             "walls": trial.plan.walls,
                             "bounds": trial.plan.bounds,
                             "doors": [
                                 {"center": list(d.center), "tag": d.tag}
                                 for d in trial.plan.doors]})
        state = {"tick": 0, "events_sent": 0, "nudge": False}

        def on_tick(running: Trial) -> None:
            state["tick"] += 1
            for message in transport.read_messages():
                kind = message.get("kind") or message.get("type")
                if kind in ("utterance", "misunderstood", "start-over"):
                    payload = {"kind": kind}
                    if kind == "utterance":
                        payload["text"] = str(message.get("text", ""))
                    inbound.put(payload)
                elif kind == "control":
                    if message.get("action") == "nudge":
                        state["nudge"] = True
                elif kind == "malformed":
                    transport.send_json({"v": PROTOCOL_VERSION,
                                         "type": "error",
                                         "text": "malformed message"})
            # Forward new log events of conversational interest.
            records = running.log.records
            for rec in records[state["events_sent"]:]:
                if rec["kind"] in ("utterance", "plan", "transition",
                                   "tag-read", "trial-end"):
                    frame = {"v": PROTOCOL_VERSION, "type": rec["kind"],
                             "t": rec["t"]}
                    frame.update(rec["payload"])
                    transport.send_json(frame)
            state["events_sent"] = len(records)
            if state["tick"] % stream_every == 0:
                transport.send_json(snapshot_frame(running))
            # Pause sim time while waiting on the human, when configured.
            if self.config.wait_for_human and giver.waiting and \
                    running.brain.state == CONVERSE:
                deadline = wall_time.monotonic() + 3600.0
                while inbound.empty() and wall_time.monotonic() < deadline:
                    for message in transport.read_messages():
                        kind = message.get("kind") or message.get("type")
                        if kind in ("utterance", "misunderstood",
                                    "start-over"):
                            payload = {"kind": kind}
                            if kind == "utterance":
                                payload["text"] = str(message.get("text", ""))
                            inbound.put(payload)
                    wall_time.sleep(0.02)

        trial.on_tick = on_tick
        record = trial.run()
        return record




def snapshot_frame(trial: Trial) -> dict:
    """The live snapshot frame for one trial tick."""
    grid = trial.mapper.grid if trial.mapper.last_pose else None
    digest = ""
    if grid is not None:
        digest = hashlib.sha256(grid.cells.tobytes()).hexdigest()[:16]
    qmap = trial.nav.qmap.to_dict()
    doors = []
    if trial.brain.door is not None:
        by_side = trial.brain.door.clusters_by_side()
        for side_clusters in by_side.values():
            for c in side_clusters:
                doors.append({"center": list(c.center), "side": c.side,
                              "index": c.index, "count": c.count})
    return {
        "v": PROTOCOL_VERSION, "type": "snapshot", "t": round(trial.time, 2),
        "pose": {"x": round(trial.pose.x, 3), "y": round(trial.pose.y, 3),
                 "heading": round(trial.pose.heading, 4)},
        "state": trial.brain.state,
        "grid_digest": digest,
        "qualitative_map": qmap,
        "door_clusters": doors,
        "path": [[round(x, 2), round(y, 2)]
                 for (x, y) in trial.nav.path[-400:]],
    }


def serve_session(config: TrialConfig, port: int = 0) -> SessionServer:
    """Bind a session server; call serve_one() to accept a client and run."""
    return SessionServer(config, port)
