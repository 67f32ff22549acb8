"""Command-line entry point: ``relmult --input problem.rm [flags]``."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import NoStabilization, ParseError, RelmultError, StabilizationMismatch
from .frontend import RunFlags, parse_problem, run
from .oracle import ORACLE_PRIME, SIZE_BOUND

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSTABLE = 2
EXIT_PARSE = 3
EXIT_MISMATCH = 4


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="relmult",
        description="Relative mixed multiplicities and finiteness criteria for multigraded inclusions.")
    ap.add_argument("--input", "-i", required=True, help="problem document ('-' for stdin)")
    ap.add_argument("--prime", type=int, help="override the document's prime")
    ap.add_argument("--second-prime", type=int,
                    help="rerun everything over this prime and report disagreements")
    ap.add_argument("--max-origin", type=int, help="largest fitting-window origin to try")
    ap.add_argument("--json", dest="json_out", help="also write the report to this file")
    ap.add_argument("--oracle", action="store_true",
                    help="replay every piece dimension through the brute-force oracle")
    ap.add_argument("--oracle-prime", type=int, default=ORACLE_PRIME)
    ap.add_argument("--oracle-bound", type=int, default=SIZE_BOUND,
                    help="skip oracle queries of total degree above this")
    return ap


def _fail(code: int, payload: dict) -> int:
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        return _fail(EXIT_ERROR, {"error": "IOError", "message": str(exc)})
    try:
        doc = parse_problem(text)
        flags = RunFlags(args.prime, args.second_prime, args.max_origin, args.oracle,
                         args.oracle_prime, args.oracle_bound)
        report = run(doc, flags)
    except ParseError as exc:
        return _fail(EXIT_PARSE, exc.to_dict())
    except (NoStabilization, StabilizationMismatch) as exc:
        return _fail(EXIT_UNSTABLE, {"error": type(exc).__name__, "message": str(exc)})
    except (RelmultError, ValueError) as exc:
        return _fail(EXIT_ERROR, {"error": type(exc).__name__, "message": str(exc)})
    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if report.get("mismatches"):
        return EXIT_MISMATCH
    results = report.get("results", [report])
    for res in results:
        verdicts = res.get("verdicts") or {}
        if any(v == "undetermined" for v in verdicts.values()):
            return EXIT_UNSTABLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
