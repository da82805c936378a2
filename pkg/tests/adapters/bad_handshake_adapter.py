#!/usr/bin/env python3
"""tagger/1 test adapter that botches the handshake line."""

import sys

print("hello i am definitely a tagger")
sys.stdout.flush()
sys.stdin.read()
