#!/usr/bin/env python3
"""tagger/1 test adapter that always returns one label too few."""

import json
import sys

print(json.dumps({"protocol": "tagger/1", "name": "bad-length"}), flush=True)
for line in sys.stdin:
    if line.strip():
        req = json.loads(line)
        labels = ["C"] * (len(req["tokens"]) - 1)
        print(json.dumps({"id": req["id"], "labels": labels}), flush=True)
