"""Command line entry point.

    prismlab run SPEC --out REPORT.json [--trunc E] [--weight-max W] [--verify] [--seed INT] [--threads N]
    prismlab render SPEC

Exit codes: 0 when every executed check passes (or is skipped with a flag),
2 on parse errors, 3 when any check fails or a task errors.
"""

from __future__ import annotations

import argparse
import sys

from .spec_parser import SpecError, parse_spec, render

EXIT_OK, EXIT_PARSE, EXIT_CHECK = 0, 2, 3


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prismlab")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a session spec and write a JSON report")
    r.add_argument("spec")
    r.add_argument("--out", required=True, help="report path ('-' for stdout)")
    r.add_argument("--trunc", type=_positive, help="override base trunc (e)")
    r.add_argument("--weight-max", type=_positive, help="override base weight_max (W)")
    r.add_argument("--verify", action="store_true", help="also run the independent oracles")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--threads", type=_positive, default=1)
    r.add_argument("--stable-only", action="store_true", help="write only the stable section")
    p = sub.add_parser("render", help="parse a spec and print its canonical form")
    p.add_argument("spec")
    return ap


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as ex:
        print(f"{path}: cannot read spec: {ex}", file=sys.stderr)
        return None
    try:
        return parse_spec(text)
    except SpecError as ex:
        print(f"{path}:{ex}", file=sys.stderr)
        return None


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    spec = _load(args.spec)
    if spec is None:
        return EXIT_PARSE
    if args.command == "render":
        sys.stdout.write(render(spec))
        return EXIT_OK
    from .runner import apply_overrides, dumps, run
    try:
        spec = apply_overrides(spec, args.trunc, args.weight_max)
        report = run(spec, verify=args.verify, seed=args.seed, threads=args.threads)
    except ValueError as ex:  # e.g. a malformed budget variable
        print(f"prismlab: {ex}", file=sys.stderr)
        return EXIT_PARSE
    text = (dumps(report.stable()) if args.stable_only else report.to_json()) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    for o in report.outcomes:
        mark = "FAIL" if o.failed else o.status if o.status != "ok" else (o.verdict or "ok")
        print(f"[{o.index}] {o.kind}: {mark}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
