"""Single-shot sandboxed executor for untrusted Python candidate programs.

One process handles exactly one request: a JSON document on stdin describing
the program text, the entry convention and the limits; the response is exactly
one JSON line on stdout with fields ``status``, ``value``, ``stderr`` and
``wall_time``. Exit code is 0 for any handled candidate outcome (including
parse errors, crashes and timeouts) and nonzero only when the request itself
is malformed.
"""

from progrunner.protocol import (
    ENTRY_KINDS,
    ProtocolError,
    canonical_value,
    parse_request,
)
from progrunner.runner import run_request

__all__ = [
    "ENTRY_KINDS",
    "ProtocolError",
    "canonical_value",
    "parse_request",
    "run_request",
]
