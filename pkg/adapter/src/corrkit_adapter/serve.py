"""tagger/1 wire protocol server.

Line-delimited JSON on stdin/stdout: one handshake object, then one
response per request. Every write is flushed so the client never
blocks on buffering.
"""

from __future__ import annotations

import json
import sys

from . import __version__
from .model import Tagger


def serve(tagger: Tagger, stdin=None, stdout=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout

    def emit(obj):
        stdout.write(json.dumps(obj) + "\n")
        stdout.flush()

    emit(
        {
            "protocol": "tagger/1",
            "name": "corrkit-neural-adapter",
            "version": __version__,
        }
    )
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        labels = tagger.predict(list(request["tokens"]), request["boundary"])
        emit({"id": request["id"], "labels": labels})
    return 0
