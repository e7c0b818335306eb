"""tslx-export: dump model artifacts into TSLX/vocab/JSON files.

Exit codes: 0 success, 1 usage error, 2 export failure.
"""

from __future__ import annotations

import argparse
import sys

from .export import TARGETS, ExportError, ExportSpec, export


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="tslx-export", description=__doc__)
    parser.add_argument("--model", required=True, help="checkpoint path or hub id")
    for target in TARGETS:
        parser.add_argument(
            f"--{target.replace('_', '-')}",
            dest=target,
            action="store_true",
            help=f"export {target}",
        )
    parser.add_argument("--layer", type=int, help="attention layer index (default: last)")
    parser.add_argument("--head", type=int, help="attention head index (default: mean over heads)")
    parser.add_argument("--prompt", help="prompt string for attention / prompt-embedding export")
    parser.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        targets = tuple(t for t in TARGETS if getattr(args, t))
        spec = ExportSpec(
            model=args.model,
            targets=targets,
            out=args.out,
            layer=args.layer,
            head=args.head,
            prompt=args.prompt,
        )
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ExportError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        manifest = export(spec)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for name, shape in manifest["files"].items():
        print(f"wrote {name} ({shape[0]} x {shape[1]})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
