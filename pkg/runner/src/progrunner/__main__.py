"""Entry point: one request on stdin, one response line on stdout."""

import sys

from progrunner.protocol import ProtocolError, parse_request, response_line
from progrunner.runner import run_request


def main() -> int:
    raw = sys.stdin.read()
    try:
        request = parse_request(raw)
    except ProtocolError as exc:
        print(response_line("protocol_error", None, str(exc), 0.0), flush=True)
        return 2
    result = run_request(request)
    print(
        response_line(
            result.pop("status"),
            result.pop("value"),
            result.pop("stderr"),
            result.pop("wall_time"),
            **result,
        ),
        flush=True,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
