"""Command line entry point: ``lascar-lab run`` and ``lascar-lab list``."""

import argparse
import json
import sys

from . import report
from .errors import LascarLabError, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="lascar-lab", description="Verify closure, stabilizer and reconstruction properties.")
    sub = p.add_subparsers(dest="command")
    r = sub.add_parser("run", help="run verification suites from a JSON config")
    r.add_argument("--config", help="path to a JSON config file (not needed with --replay)")
    r.add_argument("--suite", action="append", default=[], metavar="NAME",
                   help="suite to run; repeatable (default: the config's list, or all)")
    r.add_argument("--seed", type=int, help="override the config seed")
    r.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
    r.add_argument("--md", metavar="OUT", help="write the markdown report here")
    r.add_argument("--replay", metavar="CEX", help="re-run the check recorded in a report or replay file")
    r.add_argument("--inject", choices=report.INJECTIONS,
                   help="deliberately break one property to confirm it is caught")
    sub.add_parser("list", help="list suite names with a one-line description")
    return p


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _replays(data):
    """Replay records found in a report, a single check, or a bare replay object."""
    if "suite" in data and "check" in data and "config" in data:
        return [data]
    if "replay" in data:
        return [data["replay"]]
    canonical = data.get("canonical", data)
    return [c["replay"] for s in canonical.get("suites", []) for c in s["checks"] if "replay" in c]


def _write(path, text):
    if path == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def cmd_list(out=None):
    out = out or sys.stdout
    width = max(map(len, report.SUITES))
    for name, desc in report.SUITES.items():
        out.write(f"{name:<{width}}  {desc}\n")
    return EXIT_OK


def cmd_run(args):
    if args.replay:
        records = _replays(_load_json(args.replay))
        if not records:
            raise UsageError(f"{args.replay} holds no failing checks to replay")
        failed = False
        for rec in records:
            fresh = report.replay(rec)
            print(f"{rec['suite']}/{rec['check']}: {fresh['status']}")
            if fresh["status"] == "fail":
                print("  counterexample: " + json.dumps(fresh["counterexample"], sort_keys=True, default=str))
                failed = True
        return EXIT_FAIL if failed else EXIT_OK

    if not args.config:
        raise UsageError("run needs --config (or --replay)")
    config = _load_json(args.config)
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    if args.seed is not None:
        config["seed"] = args.seed
    if args.inject:
        config["inject"] = args.inject
    canonical, timings = report.run(config, args.suite or None)
    for rep in canonical["suites"]:
        print(f"{rep['suite']:<26} {rep['verdict']} ({timings[rep['suite']]:.2f} s)")
        for c in rep["checks"]:
            if c["status"] == "fail":
                print(f"  FAIL {c['name']}: " + json.dumps(c["counterexample"], sort_keys=True, default=str))
    if args.json:
        _write(args.json, json.dumps({"canonical": canonical, "timings": timings},
                                     sort_keys=True, indent=2, default=str))
    if args.md:
        _write(args.md, report.to_markdown(canonical, timings))
    return EXIT_FAIL if canonical["verdict"] == "fail" else EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "list":
            return cmd_list()
        if args.command == "run":
            return cmd_run(args)
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"lascar-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LascarLabError as exc:
        print(f"lascar-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
