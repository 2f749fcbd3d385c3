"""Mixed-initiative session state: one JSON file per session, forward-only
state machine with an explicit reset back to problem finding."""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional

STATES = ("problem_finding", "generated", "selected", "planned")

# transitions allowed in addition to the explicit reset
_FORWARD = {
    "problem_finding": {"problem_finding", "generated"},
    "generated": {"selected"},
    "selected": {"planned"},
    "planned": {"planned"},  # re-planning with a different cook count is allowed
}


class SessionError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class Session:
    id: str
    state: str = "problem_finding"
    problem: Optional[dict] = None
    candidates: Optional[list[dict]] = None
    selection: Optional[str] = None
    plan: Optional[dict] = None
    seed: Optional[int] = None
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    version: int = 0

    def transition(self, new_state: str) -> None:
        if new_state == "problem_finding":  # explicit reset is always allowed
            self.state = new_state
            return
        if new_state not in _FORWARD.get(self.state, set()):
            raise SessionError("invalid_state",
                               f"cannot move from {self.state} to {new_state}")
        self.state = new_state

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "Session":
        return cls(**obj)


class SessionStore:
    """Directory-backed store; per-session locks linearize mutations and a
    version check turns lost-update races into conflict errors."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def create(self) -> Session:
        session = Session(id=uuid.uuid4().hex[:12])
        self.save(session)
        return session

    def save(self, session: Session) -> None:
        session.updated = time.time()
        tmp = self._path(session.id).with_suffix(".tmp")
        tmp.write_text(json.dumps(session.to_json(), sort_keys=True))
        tmp.replace(self._path(session.id))

    def load(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not path.exists():
            raise SessionError("session_not_found", f"no session {session_id!r}")
        try:
            return Session.from_json(json.loads(path.read_text()))
        except (json.JSONDecodeError, TypeError) as exc:
            raise SessionError("corrupt_session",
                               f"corrupt session file {path}: {exc}") from exc

    def mutate(self, session_id: str, fn) -> Session:
        """Apply fn(session) under the session lock; bump version on success."""
        with self._lock(session_id):
            session = self.load(session_id)
            before = session.version
            fn(session)
            fresh = self.load(session_id)
            if fresh.version != before:
                raise SessionError("conflict", "session modified concurrently")
            session.version = before + 1
            self.save(session)
            return session

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))
