"""Client side of the "tagger/1" line protocol for external tagger processes.

The adapter speaks newline-delimited JSON on stdin/stdout: one handshake
line, then one response line per request line.  One handle serves one
in-flight request at a time.
"""

from __future__ import annotations

import json
import os
import select
import shlex
import subprocess

from .core import LABEL_SET
from .errors import AdapterCrashed, ProtocolError

PROTOCOL = "tagger/1"
DEFAULT_TIMEOUT = 30.0


class _LineReader:
    """Buffered line reader over a raw pipe fd with select-based timeouts."""

    def __init__(self, fd: int):
        self.fd = fd
        self.buf = b""

    def readline(self, timeout: float) -> bytes | None:
        while b"\n" not in self.buf:
            ready, _, _ = select.select([self.fd], [], [], timeout)
            if not ready:
                return None
            chunk = os.read(self.fd, 65536)
            if not chunk:  # EOF
                if self.buf:
                    line, self.buf = self.buf, b""
                    return line
                return b""
            self.buf += chunk
        line, _, self.buf = self.buf.partition(b"\n")
        return line


class ExternalTagger:
    """Handle on a running adapter process after a successful handshake."""

    def __init__(self, command: str, timeout: float = DEFAULT_TIMEOUT):
        self.command = command
        self.timeout = timeout
        self._counter = 0
        try:
            self.proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
            )
        except OSError as e:
            raise AdapterCrashed(f"could not start adapter: {e}") from e
        self._reader = _LineReader(self.proc.stdout.fileno())
        hello = self._read_line()
        name = hello.get("name")
        if hello.get("protocol") != PROTOCOL or not isinstance(name, str):
            raise ProtocolError(f"bad handshake line: {hello!r}")
        self.name = name

    def _read_line(self) -> dict:
        line = self._reader.readline(self.timeout)
        if line is None:
            self._kill()
            raise AdapterCrashed(
                f"adapter timed out after {self.timeout}s"
            )
        if line == b"":
            code = self.proc.poll()
            raise AdapterCrashed(f"adapter closed its output (exit={code})")
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolError(f"non-JSON line from adapter: {line[:200]!r}")
        if not isinstance(obj, dict):
            raise ProtocolError(f"adapter line is not an object: {obj!r}")
        return obj

    def predict(self, tokens: list[str], boundary: int) -> list[str]:
        self._counter += 1
        req_id = f"q{self._counter}"
        request = {"id": req_id, "tokens": tokens, "boundary": boundary}
        try:
            self.proc.stdin.write((json.dumps(request) + "\n").encode("utf-8"))
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise AdapterCrashed(f"adapter pipe closed: {e}") from e
        resp = self._read_line()
        if resp.get("id") != req_id:
            raise ProtocolError(
                f"response id {resp.get('id')!r} does not match {req_id!r}"
            )
        labels = resp.get("labels")
        if not isinstance(labels, list) or any(
            lab not in LABEL_SET for lab in labels
        ):
            raise ProtocolError(f"bad labels field: {labels!r}")
        if len(labels) != len(tokens):
            raise ProtocolError(
                f"{len(labels)} labels for {len(tokens)} tokens"
            )
        return list(labels)

    def _kill(self):
        if self.proc.poll() is None:
            self.proc.kill()
            self.proc.wait()

    def close(self):
        try:
            if self.proc.stdin and not self.proc.stdin.closed:
                self.proc.stdin.close()
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self._kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def external_predict(
    adapter: ExternalTagger, tokens: list[str], boundary: int
) -> list[str]:
    return adapter.predict(tokens, boundary)
