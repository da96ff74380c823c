"""Live session endpoint speaking a newline-delimited protocol.

Inbound: verbatim iCode event lines, plus control lines
"REAUTH ok|fail <principal>", "CHALLENGE ok|fail", and "RESTORE".
Outbound: "DETECTION <id> <verdict> <key=value ...>",
"DIRECTIVE <name> <key=value ...>", "ALERT <level> <message>", and
"ERROR <reason>" for protocol violations (which never drop the session).

A connection is one session; it ends on the exit button or disconnect,
after which the black box is written out. The same driver serves offline
replay so a socket session and a file replay emit identical records.
"""

from __future__ import annotations

import os
import socketserver
import threading
from typing import Iterable, Optional

from .config import EngineConfig
from .model import Event, EventKind
from .parser import ParseMode, parse_line, salvage_raw_time
from .planner import Directive, DirectiveKind, NotPagedError
from .runtime import (
    NoChallengeError,
    NotLockedError,
    ReauthResult,
    Session,
    SessionTerminatedError,
    detection_record,
    directive_record,
)


def directive_line(d: Directive) -> str:
    if d.kind is DirectiveKind.ALERT:
        return f"ALERT {d.params['level']} {d.params['message']}"
    return f"DIRECTIVE {directive_record(d)}"


class SessionDriver:
    """Adapts one Session to the line protocol."""

    def __init__(self, config: Optional[EngineConfig] = None):
        self.session = Session(config)
        self.finished = False
        self._line_no = 0

    def feed_line(self, line: str) -> list[str]:
        line = line.rstrip("\r\n")
        self._line_no += 1
        if line.startswith("REAUTH "):
            return self._feed_reauth(line)
        if line.startswith("CHALLENGE "):
            return self._feed_challenge(line)
        if line == "RESTORE":
            return self._feed_restore()
        return self._feed_event(line)

    def _feed_event(self, line: str) -> list[str]:
        responses = []
        outcome = parse_line(line, self._line_no, ParseMode.RECOVERY)
        event = outcome.event
        if outcome.diagnostic is not None:
            responses.append(f"ERROR parse {outcome.diagnostic}")
            if salvage_raw_time(line) is None and len(self.session.trace):
                trace = self.session.trace
                event = Event.error(trace.epoch + trace.rel_times[-1])
        try:
            directives = self.session.ingest(event)
        except SessionTerminatedError:
            return responses + ["ERROR session-terminated"]
        responses.extend(
            f"DETECTION {detection_record(d)}" for d in self.session.last_ko_detections
        )
        responses.extend(directive_line(d) for d in directives)
        if event.kind is EventKind.BUTTON_EXIT:
            self.finished = True
        return responses

    def _feed_reauth(self, line: str) -> list[str]:
        parts = line.split(" ")
        if len(parts) < 2 or parts[1] not in ("ok", "fail"):
            return ["ERROR reauth expects: REAUTH ok|fail <principal>"]
        principal = parts[2] if len(parts) > 2 else ""
        try:
            directives = self.session.handle_reauth(
                ReauthResult(parts[1] == "ok", principal)
            )
        except NotLockedError:
            return ["ERROR not-locked"]
        return [directive_line(d) for d in directives]

    def _feed_challenge(self, line: str) -> list[str]:
        parts = line.split(" ")
        if len(parts) != 2 or parts[1] not in ("ok", "fail"):
            return ["ERROR challenge expects: CHALLENGE ok|fail"]
        try:
            directives = self.session.handle_challenge(parts[1] == "ok")
        except NoChallengeError:
            return ["ERROR no-challenge"]
        return [directive_line(d) for d in directives]

    def _feed_restore(self) -> list[str]:
        try:
            directives = self.session.handle_restore()
        except NotPagedError:
            return ["ERROR not-paged"]
        return [directive_line(d) for d in directives]


def replay_lines(lines: Iterable[str], config: Optional[EngineConfig] = None) -> list[str]:
    """Offline replay: identical outbound records to a live connection."""
    driver = SessionDriver(config)
    out: list[str] = []
    for line in lines:
        out.extend(driver.feed_line(line))
        if driver.finished:
            break
    return out


class _SessionHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        driver = SessionDriver(self.server.engine_config)
        try:
            for raw in self.rfile:
                responses = driver.feed_line(raw.decode("utf-8", errors="replace"))
                for response in responses:
                    self.wfile.write(response.encode("utf-8") + b"\n")
                self.wfile.flush()
                if driver.finished:
                    break
        except (ConnectionError, BrokenPipeError):
            pass
        finally:
            self.server.write_blackbox(driver.session)


class IcodeServer(socketserver.ThreadingTCPServer):
    """One session per connection; sessions share nothing."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        config: Optional[EngineConfig] = None,
        blackbox_dir: Optional[str] = None,
    ):
        super().__init__(address, _SessionHandler)
        self.engine_config = config or EngineConfig()
        self.blackbox_dir = blackbox_dir
        self._session_counter = 0
        self._counter_lock = threading.Lock()

    @property
    def port(self) -> int:
        return self.server_address[1]

    def write_blackbox(self, session: Session) -> Optional[str]:
        if self.blackbox_dir is None:
            return None
        with self._counter_lock:
            self._session_counter += 1
            serial = self._session_counter
        os.makedirs(self.blackbox_dir, exist_ok=True)
        path = os.path.join(self.blackbox_dir, f"session-{serial:04d}.log")
        with open(path, "w", encoding="utf-8") as f:
            f.write(session.export_blackbox())
        return path


def serve(port: int, config: Optional[EngineConfig] = None, blackbox_dir: Optional[str] = None) -> None:
    with IcodeServer(("", port), config, blackbox_dir) as server:
        server.serve_forever()
