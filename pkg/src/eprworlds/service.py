"""Local HTTP+JSON service backing the exhibit front end.

Endpoints (all JSON, every document carries ``schema: 1``):

    GET  /health                      liveness probe
    POST /sessions                    create {seed?, kind?, s?, grid_m_total?, mode?}
    GET  /sessions/{id}               session state
    POST /sessions/{id}/reset         clear history, rewind the seeded stream
    POST /sessions/{id}/angles        {coin_alice, coin_bob} -> current setting
    POST /sessions/{id}/toss          sample a pointer, return outcome + tubes
    POST /sessions/{id}/mode          {mode} toggle ball-toss vs world-count view
    GET  /sessions/{id}/partition     partition JSON for rendering
    GET  /sessions/{id}/counts        world counts and internal probability
    GET  /sessions/{id}/bell          empirical report over history + model bounds
    GET  /sessions/{id}/audit         tube counts vs recomputed fold
    GET  /sessions/{id}/snapshot      full replayable dump

Errors: 400 malformed input, 404 unknown session, 409 action needs angles
first. Sessions are in-memory; one session's mutations are serialized by a
per-session lock. Session randomness is a seeded stream so exhibit runs are
replayable (the seed is the client's, or the session counter).
"""
from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .actualization import ActPointer, act_outcome, sample_act
from .angles import AngleSetting, PAIR_KEYS, choose_setting
from .bell import bell_counts, bell_terms, bell_to_json
from .geometry import (
    KIND_ARCS,
    KIND_DIAMONDS,
    KIND_GRID,
    Partition,
    cross_section_arcs,
    diamond_counts,
    diamond_partition,
    grid_counts,
    grid_partition,
    grid_spec_for_delta,
    partition_to_json,
)
from .models import prob_classical, prob_quantum, prob_transition

MODE_BALL_TOSS = "external_act"
MODE_WORLD_COUNT = "internal_count"
_KINDS = (KIND_ARCS, KIND_DIAMONDS, KIND_GRID)


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class ExhibitSession:
    id: str
    seed: int
    kind: str = KIND_DIAMONDS
    s: float = 0.05
    grid_m_total: int = 40
    mode: str = MODE_BALL_TOSS
    setting: AngleSetting | None = None
    history: list[dict] = field(default_factory=list)
    tubes: dict[int, dict[str, int]] = field(default_factory=dict)
    misses: dict[int, int] = field(default_factory=dict)
    rng: np.random.Generator = None  # seeded in __post_init__
    lock: threading.Lock = field(default_factory=threading.Lock)
    partitions: dict[int, Partition] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.rng = np.random.default_rng(self.seed)

    def reset(self) -> None:
        self.setting = None
        self.history.clear()
        self.tubes.clear()
        self.misses.clear()
        self.partitions.clear()
        self.rng = np.random.default_rng(self.seed)

    def partition_for(self, setting: AngleSetting) -> Partition:
        if setting.d not in self.partitions:
            if self.kind == KIND_ARCS:
                part = cross_section_arcs(setting)
            elif self.kind == KIND_DIAMONDS:
                part = diamond_partition(setting, self.s)
            else:
                part = grid_partition(
                    grid_spec_for_delta(self.grid_m_total, setting.delta))
            self.partitions[setting.d] = part
        return self.partitions[setting.d]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "id": self.id,
            "seed": self.seed,
            "kind": self.kind,
            "s": self.s,
            "grid_m_total": self.grid_m_total,
            "mode": self.mode,
            "setting": _setting_json(self.setting),
            "tosses": len(self.history),
            "tubes": _tubes_json(self.tubes),
            "misses": {str(d): n for d, n in sorted(self.misses.items())},
        }


def _setting_json(setting: AngleSetting | None) -> dict | None:
    if setting is None:
        return None
    return {
        "a": setting.a, "b": setting.b, "alpha": setting.alpha,
        "beta": setting.beta, "delta": setting.delta, "d": setting.d,
    }


def _tubes_json(tubes: dict[int, dict[str, int]]) -> dict:
    out = {}
    for d, cells in sorted(tubes.items()):
        e = cells.get("00", 0) + cells.get("11", 0)
        u = cells.get("01", 0) + cells.get("10", 0)
        out[str(d)] = {"E": e, "U": u, "total": e + u, **cells}
    return out


class ExhibitService:
    """Session registry plus all endpoint logic, independent of HTTP."""

    def __init__(self) -> None:
        self._sessions: dict[str, ExhibitSession] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def create_session(self, body: dict) -> dict:
        kind = body.get("kind", KIND_DIAMONDS)
        if kind not in _KINDS:
            raise ApiError(400, f"kind must be one of {_KINDS}")
        mode = body.get("mode", MODE_BALL_TOSS)
        if mode not in (MODE_BALL_TOSS, MODE_WORLD_COUNT):
            raise ApiError(400, "unknown mode")
        s = float(body.get("s", 0.05))
        if not 0 < s <= 1:
            raise ApiError(400, "s must lie in (0, 1]")
        m_total = int(body.get("grid_m_total", 40))
        if m_total < 1:
            raise ApiError(400, "grid_m_total must be positive")
        with self._lock:
            self._counter += 1
            sid = f"s{self._counter}"
            seed = body.get("seed", self._counter)
            if not isinstance(seed, int) or seed < 0:
                raise ApiError(400, "seed must be a non-negative integer")
            session = ExhibitSession(
                id=sid, seed=seed, kind=kind, s=s,
                grid_m_total=m_total, mode=mode,
            )
            self._sessions[sid] = session
        return session.to_json()

    def _session(self, sid: str) -> ExhibitSession:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise ApiError(404, f"unknown session {sid!r}")
        return session

    def get_session(self, sid: str) -> dict:
        return self._session(sid).to_json()

    def reset(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            session.reset()
            return session.to_json()

    def set_angles(self, sid: str, body: dict) -> dict:
        session = self._session(sid)
        coin_a = body.get("coin_alice")
        coin_b = body.get("coin_bob")
        if coin_a not in (0, 1) or coin_b not in (0, 1):
            raise ApiError(400, "coin_alice and coin_bob must be bits (0 or 1)")
        with session.lock:
            session.setting = choose_setting(coin_a, coin_b)
            return {
                "schema": 1,
                "setting": _setting_json(session.setting),
            }

    def set_mode(self, sid: str, body: dict) -> dict:
        session = self._session(sid)
        mode = body.get("mode")
        if mode not in (MODE_BALL_TOSS, MODE_WORLD_COUNT):
            raise ApiError(400, "unknown mode")
        with session.lock:
            session.mode = mode
            return session.to_json()

    def toss(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            if session.setting is None:
                raise ApiError(409, "set angles before tossing")
            part = session.partition_for(session.setting)
            mode = "angle" if session.kind == KIND_ARCS else "point"
            pointer = sample_act(mode, session.rng)
            outcome = act_outcome(part, pointer)
            d = session.setting.d
            if outcome is None:
                session.misses[d] = session.misses.get(d, 0) + 1
            else:
                bin_ = session.tubes.setdefault(d, {k: 0 for k in PAIR_KEYS})
                bin_[outcome.key] += 1
            entry = {
                "index": len(session.history),
                "d": d,
                "pointer": _pointer_json(pointer),
                "outcome": None if outcome is None else outcome.key,
                "miss": outcome is None,
            }
            session.history.append(entry)
            return {
                "schema": 1,
                "toss": entry,
                "tubes": _tubes_json(session.tubes),
                "misses": {str(k): v for k, v in sorted(session.misses.items())},
            }

    def partition(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            if session.setting is None:
                raise ApiError(409, "set angles before fetching the partition")
            return partition_to_json(session.partition_for(session.setting))

    def counts(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            if session.setting is None:
                raise ApiError(409, "set angles before fetching counts")
            setting = session.setting
            delta = setting.delta
            if session.kind == KIND_ARCS:
                n_e = prob_classical(delta).p["E"]
                n_u = 1.0 - n_e
                exact = False
            elif session.kind == KIND_DIAMONDS:
                cells = diamond_counts(delta, session.s)
                n_e = cells["00"] + cells["11"]
                n_u = cells["01"] + cells["10"]
                exact = True
            else:
                cells = grid_counts(
                    grid_spec_for_delta(session.grid_m_total, delta))
                n_e = cells["00"] + cells["11"]
                n_u = cells["01"] + cells["10"]
                exact = True
            total = n_e + n_u
            pr_e = n_e / total if total else None
            return {
                "schema": 1,
                "kind": session.kind,
                "d": setting.d,
                "delta": delta,
                "n_E": n_e,
                "n_U": n_u,
                "exact_counts": exact,
                "pr_E": pr_e,
                "pr_U": None if pr_e is None else 1.0 - pr_e,
                "model_p_E": {
                    "classical_C": prob_classical(delta).p["E"],
                    "quantum_P": prob_quantum(delta).p["E"],
                    "transition_Pstar": prob_transition(delta).p["E"],
                },
            }

    def bell(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            doc: dict = {
                "schema": 1,
                "bounds": {
                    name: bell_to_json(bell_terms(name))
                    for name in ("classical_C", "quantum_P", "transition_Pstar")
                },
            }
            missing = [d for d in (1, 2, 3) if d not in session.tubes]
            if missing:
                doc["empirical"] = None
                doc["missing_d"] = missing
            else:
                doc["empirical"] = bell_to_json(bell_counts(session.tubes))
                doc["missing_d"] = []
            return doc

    def audit(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            recomputed: dict[int, dict[str, int]] = {}
            miss_fold: dict[int, int] = {}
            for entry in session.history:
                d = entry["d"]
                if entry["miss"]:
                    miss_fold[d] = miss_fold.get(d, 0) + 1
                    continue
                bin_ = recomputed.setdefault(d, {k: 0 for k in PAIR_KEYS})
                bin_[entry["outcome"]] += 1
            consistent = recomputed == session.tubes and miss_fold == session.misses
            return {
                "schema": 1,
                "tubes": _tubes_json(session.tubes),
                "recomputed": _tubes_json(recomputed),
                "misses": {str(d): n for d, n in sorted(session.misses.items())},
                "recomputed_misses": {str(d): n for d, n in sorted(miss_fold.items())},
                "consistent": consistent,
            }

    def snapshot(self, sid: str) -> dict:
        session = self._session(sid)
        with session.lock:
            doc = session.to_json()
            doc["history"] = list(session.history)
            return doc


def _pointer_json(pointer: ActPointer) -> dict:
    if pointer.mode == "angle":
        return {"mode": "angle", "angle": pointer.angle}
    return {"mode": "point", "x": pointer.x, "y": pointer.y}


_ROUTES = [
    ("GET", re.compile(r"^/health$"), lambda svc, m, body: {"schema": 1, "ok": True}),
    ("POST", re.compile(r"^/sessions$"),
     lambda svc, m, body: svc.create_session(body)),
    ("GET", re.compile(r"^/sessions/([^/]+)$"),
     lambda svc, m, body: svc.get_session(m.group(1))),
    ("POST", re.compile(r"^/sessions/([^/]+)/reset$"),
     lambda svc, m, body: svc.reset(m.group(1))),
    ("POST", re.compile(r"^/sessions/([^/]+)/angles$"),
     lambda svc, m, body: svc.set_angles(m.group(1), body)),
    ("POST", re.compile(r"^/sessions/([^/]+)/mode$"),
     lambda svc, m, body: svc.set_mode(m.group(1), body)),
    ("POST", re.compile(r"^/sessions/([^/]+)/toss$"),
     lambda svc, m, body: svc.toss(m.group(1))),
    ("GET", re.compile(r"^/sessions/([^/]+)/partition$"),
     lambda svc, m, body: svc.partition(m.group(1))),
    ("GET", re.compile(r"^/sessions/([^/]+)/counts$"),
     lambda svc, m, body: svc.counts(m.group(1))),
    ("GET", re.compile(r"^/sessions/([^/]+)/bell$"),
     lambda svc, m, body: svc.bell(m.group(1))),
    ("GET", re.compile(r"^/sessions/([^/]+)/audit$"),
     lambda svc, m, body: svc.audit(m.group(1))),
    ("GET", re.compile(r"^/sessions/([^/]+)/snapshot$"),
     lambda svc, m, body: svc.snapshot(m.group(1))),
]


class _Handler(BaseHTTPRequestHandler):
    service: ExhibitService = None
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _dispatch(self, method: str) -> None:
        body = {}
        if method == "POST":
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if raw:
                try:
                    body = json.loads(raw)
                except json.JSONDecodeError:
                    self._reply(400, {"schema": 1, "error": "malformed JSON body"})
                    return
            if not isinstance(body, dict):
                self._reply(400, {"schema": 1, "error": "body must be a JSON object"})
                return
        for verb, pattern, fn in _ROUTES:
            if verb != method:
                continue
            match = pattern.match(self.path)
            if match:
                try:
                    self._reply(200, fn(self.service, match, body))
                except ApiError as exc:
                    self._reply(exc.status, {"schema": 1, "error": exc.message})
                except Exception as exc:  # defensive: keep the server alive
                    self._reply(500, {"schema": 1, "error": str(exc)})
                return
        self._reply(404, {"schema": 1, "error": f"no route for {method} {self.path}"})

    def _reply(self, status: int, doc: dict) -> None:
        data = json.dumps(doc).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()


def serve(port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Build a ready-to-run server; the caller owns serve_forever/shutdown."""
    handler = type("Handler", (_Handler,), {"service": ExhibitService()})
    return ThreadingHTTPServer((host, port), handler)
