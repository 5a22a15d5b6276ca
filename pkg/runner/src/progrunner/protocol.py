"""Wire protocol: request parsing and canonical value serialization."""

import json
from dataclasses import dataclass

ENTRY_KINDS = ("call_function", "evaluate_assertion", "run_script")

DEFAULT_FUNCTION_NAME = "compute_answer"
DEFAULT_TIME_LIMIT = 2.0

REPR_TAG = "!repr:"


class ProtocolError(Exception):
    """The request document itself is malformed (not a candidate failure)."""


@dataclass
class RunRequest:
    program_text: str
    entry: str
    function_name: str
    time_limit: float
    memory_limit_mb: int | None


def parse_request(raw: str) -> RunRequest:
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError(f"request is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProtocolError("request must be a JSON object")
    program_text = doc.get("program_text")
    if not isinstance(program_text, str):
        raise ProtocolError("program_text must be a string")
    entry = doc.get("entry", "call_function")
    if entry not in ENTRY_KINDS:
        raise ProtocolError(f"entry must be one of {ENTRY_KINDS}, got {entry!r}")
    function_name = doc.get("function_name", DEFAULT_FUNCTION_NAME)
    if not isinstance(function_name, str) or not function_name.isidentifier():
        raise ProtocolError(f"function_name must be an identifier, got {function_name!r}")
    time_limit = doc.get("time_limit", DEFAULT_TIME_LIMIT)
    if not isinstance(time_limit, (int, float)) or isinstance(time_limit, bool) or time_limit <= 0:
        raise ProtocolError(f"time_limit must be a positive number, got {time_limit!r}")
    memory_limit_mb = doc.get("memory_limit_mb")
    if memory_limit_mb is not None:
        if not isinstance(memory_limit_mb, int) or isinstance(memory_limit_mb, bool) or memory_limit_mb <= 0:
            raise ProtocolError("memory_limit_mb must be a positive integer when given")
    return RunRequest(
        program_text=program_text,
        entry=entry,
        function_name=function_name,
        time_limit=float(time_limit),
        memory_limit_mb=memory_limit_mb,
    )


def _in_domain(value) -> bool:
    if value is None or isinstance(value, (bool, int, str)):
        return True
    if isinstance(value, float):
        return True
    if isinstance(value, list):
        return all(_in_domain(v) for v in value)
    if isinstance(value, dict):
        return all(isinstance(k, str) and _in_domain(v) for k, v in value.items())
    return False


def canonical_value(value) -> str:
    """Serialize a return value to its canonical single-line text form.

    Numbers, strings, lists, string-keyed maps, booleans and null serialize
    as JSON with sorted keys; integers carry no decimal point while floats
    keep full round-trip precision, so the encoding is injective on that
    domain. Anything else degrades to a tagged repr that only supports text
    equality.
    """
    if _in_domain(value):
        return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return REPR_TAG + repr(value)


def response_line(status: str, value: str | None, stderr: str, wall_time: float, **extra) -> str:
    doc = {"status": status, "value": value, "stderr": stderr, "wall_time": wall_time}
    doc.update(extra)
    return json.dumps(doc, ensure_ascii=False)
