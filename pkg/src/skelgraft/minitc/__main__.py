"""CLI: python3 -m skelgraft.minitc {build,test} <workdir> [options]."""

from __future__ import annotations

import argparse
import sys

from skelgraft.minitc.runner import run_build, run_tests


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="minitc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="parse and resolve a workdir")
    build.add_argument("workdir")

    test = sub.add_parser("test", help="run unit tests in a workdir")
    test.add_argument("workdir")
    test.add_argument("--filter", default="*", help="Class.Method, Class, or *")
    test.add_argument("--marker", action="store_true",
                      help="write BEGIN/END test markers to the trace stream")
    test.add_argument("--list", action="store_true", dest="list_only",
                      help="list matching tests without running them")

    args = parser.parse_args(argv)
    if args.command == "build":
        return run_build(args.workdir)
    return run_tests(args.workdir, args.filter, args.marker, args.list_only)


if __name__ == "__main__":
    sys.exit(main())
