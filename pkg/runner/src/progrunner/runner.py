"""Execute one candidate program in a killable child process."""

import io
import multiprocessing
import sys
import time
import traceback
from contextlib import redirect_stderr, redirect_stdout

from progrunner.protocol import RunRequest, canonical_value

# Extra time the parent allows the child to die after a kill; the response is
# always emitted before limit + grace.
REAP_GRACE = 0.5

_STDERR_EXCERPT = 4000

_DENIED_AUDIT_EVENTS = (
    "socket.connect",
    "socket.bind",
    "socket.sendto",
    "socket.getaddrinfo",
    "os.system",
    "subprocess.Popen",
)


class EntryPointNotFound(RuntimeError):
    pass


def _deny_hook(event, args):
    # Best-effort defense in depth, not a security boundary: block network use
    # and write-mode file opens from candidate code.
    if event in _DENIED_AUDIT_EVENTS:
        raise RuntimeError(f"denied by sandbox policy: {event}")
    if event == "open":
        mode = args[1]
        if isinstance(mode, str) and any(c in mode for c in "wax+"):
            raise RuntimeError("denied by sandbox policy: file write")


def _apply_limits(memory_limit_mb):
    if memory_limit_mb is not None:
        import resource

        limit = memory_limit_mb * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
    sys.addaudithook(_deny_hook)


def _child_main(conn, code, request: RunRequest):
    out_buf, err_buf = io.StringIO(), io.StringIO()
    result = {"status": "runtime_error", "value": None, "stderr": "", "stdout": ""}
    try:
        _apply_limits(request.memory_limit_mb)
        with redirect_stdout(out_buf), redirect_stderr(err_buf):
            namespace = {"__name__": "__main__"}
            exec(code, namespace)
            if request.entry == "call_function":
                fn = namespace.get(request.function_name)
                if not callable(fn):
                    raise EntryPointNotFound(
                        f"program defines no callable {request.function_name!r}"
                    )
                value = fn()
            elif request.entry == "evaluate_assertion":
                # The assertions are part of the script; reaching this point
                # means they all held.
                value = True
            else:
                value = None
        result.update(status="ok", value=canonical_value(value))
    except BaseException as exc:  # noqa: BLE001 - candidate code may raise anything
        tb = traceback.format_exception_only(type(exc), exc)
        result.update(
            status="runtime_error",
            value=None,
            error_type=type(exc).__name__,
            stderr=(err_buf.getvalue() + "".join(tb))[-_STDERR_EXCERPT:],
        )
    else:
        result["stderr"] = err_buf.getvalue()[-_STDERR_EXCERPT:]
    result["stdout"] = out_buf.getvalue()[-_STDERR_EXCERPT:]
    conn.send(result)
    conn.close()


def run_request(request: RunRequest) -> dict:
    """Run one request to completion and return the response fields.

    The compile phase runs in-process (it does not execute candidate code);
    execution happens in a forked child that is SIGKILLed once the wall-clock
    limit expires.
    """
    start = time.monotonic()
    try:
        code = compile(request.program_text, "<candidate>", "exec")
    except (SyntaxError, ValueError) as exc:
        msg = "".join(traceback.format_exception_only(type(exc), exc))
        return {
            "status": "parse_error",
            "value": None,
            "stderr": msg[-_STDERR_EXCERPT:],
            "wall_time": time.monotonic() - start,
        }

    ctx = multiprocessing.get_context("fork")
    parent_conn, child_conn = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child_main, args=(child_conn, code, request))
    proc.start()
    child_conn.close()

    result = None
    if parent_conn.poll(request.time_limit):
        try:
            result = parent_conn.recv()
        except EOFError:
            result = None
    elapsed = time.monotonic() - start

    if result is None and proc.is_alive():
        proc.kill()
        proc.join(REAP_GRACE)
        return {"status": "timeout", "value": None, "stderr": "", "wall_time": elapsed}

    proc.join(REAP_GRACE)
    if proc.is_alive():
        proc.kill()
        proc.join(REAP_GRACE)
    if result is None:
        return {
            "status": "runtime_error",
            "value": None,
            "stderr": f"candidate process died without a result (exit code {proc.exitcode})",
            "wall_time": elapsed,
        }
    result["wall_time"] = elapsed
    return result
