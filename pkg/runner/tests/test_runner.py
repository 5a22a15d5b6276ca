import json
import subprocess
import sys
import time

from progrunner.protocol import parse_request
from progrunner.runner import run_request

CRUX_FIXTURE_FN = """\
def f(list):
    original = list[:]
    while len(list) > 1:
        list.pop(len(list) - 1)
        for i in range(len(list)):
            list.pop(i)
    list = original[:]
    if list:
        list.pop(0)
    return list
"""


def _run(doc):
    return run_request(parse_request(json.dumps(doc)))


def test_call_function_returns_two():
    resp = _run({"program_text": "def compute_answer(): return 0 + 2"})
    assert resp["status"] == "ok"
    assert resp["value"] == "2"


def test_call_function_missing_entry_point():
    resp = _run({"program_text": "x = 1"})
    assert resp["status"] == "runtime_error"
    assert "compute_answer" in resp["stderr"]


def test_parse_error_from_compile_phase():
    resp = _run({"program_text": "def compute_answer(: return 2"})
    assert resp["status"] == "parse_error"
    assert resp["value"] is None
    assert "SyntaxError" in resp["stderr"]


def test_runtime_error_carries_type_name():
    resp = _run({"program_text": "def compute_answer(): return 1 / 0"})
    assert resp["status"] == "runtime_error"
    assert "ZeroDivisionError" in resp["stderr"]


def test_evaluate_assertion_holds():
    program = CRUX_FIXTURE_FN + "assert f([5]) == []\n"
    resp = _run({"program_text": program, "entry": "evaluate_assertion"})
    assert resp["status"] == "ok"
    assert resp["value"] == "true"


def test_evaluate_assertion_fails():
    program = CRUX_FIXTURE_FN + "assert f([1, 2, 3, 4, 5]) == []\n"
    resp = _run({"program_text": program, "entry": "evaluate_assertion"})
    assert resp["status"] == "runtime_error"
    assert "AssertionError" in resp["stderr"]


def test_run_script_captures_stdout():
    resp = _run({"program_text": "print('hello')", "entry": "run_script"})
    assert resp["status"] == "ok"
    assert resp["value"] == "null"
    assert resp["stdout"] == "hello\n"


def test_timeout_within_grace():
    start = time.monotonic()
    resp = _run({"program_text": "def compute_answer():\n  while True: pass", "time_limit": 2.0})
    elapsed = time.monotonic() - start
    assert resp["status"] == "timeout"
    assert resp["value"] is None
    assert elapsed < 2.5


def test_deterministic_for_pure_candidates():
    doc = {"program_text": "def compute_answer(): return sum(range(10))"}
    a, b = _run(doc), _run(doc)
    for key in ("status", "value", "stderr", "stdout"):
        assert a[key] == b[key]


def test_network_denied():
    program = (
        "def compute_answer():\n"
        "    import socket\n"
        "    s = socket.socket()\n"
        "    s.connect(('127.0.0.1', 9))\n"
        "    return 1\n"
    )
    resp = _run({"program_text": program})
    assert resp["status"] == "runtime_error"


def test_file_write_denied(tmp_path):
    program = (
        "def compute_answer():\n"
        f"    open({str(tmp_path / 'x')!r}, 'w').write('no')\n"
        "    return 1\n"
    )
    resp = _run({"program_text": program})
    assert resp["status"] == "runtime_error"
    assert not (tmp_path / "x").exists()


def _invoke_cli(payload: str, timeout=30.0):
    return subprocess.run(
        [sys.executable, "-m", "progrunner"],
        input=payload,
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def test_cli_one_line_response_and_exit_zero():
    proc = _invoke_cli(json.dumps({"program_text": "def compute_answer(): return 0 + 2"}))
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert len(lines) == 1
    resp = json.loads(lines[0])
    assert resp["status"] == "ok"
    assert resp["value"] == "2"
    assert set(resp) >= {"status", "value", "stderr", "wall_time"}


def test_cli_handled_failure_still_exits_zero():
    proc = _invoke_cli(json.dumps({"program_text": "1/0", "entry": "run_script"}))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "runtime_error"


def test_cli_malformed_request_protocol_error():
    proc = _invoke_cli("this is not json")
    assert proc.returncode != 0
    resp = json.loads(proc.stdout)
    assert resp["status"] == "protocol_error"
