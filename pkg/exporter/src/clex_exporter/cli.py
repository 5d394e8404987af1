"""Command line: export records from a checkpoint, or validate a record file."""

from __future__ import annotations

import argparse
import json
import sys

from .export import ExportConfig, export
from .records import validate_record_file


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="clex-export", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("export", help="run a checkpoint over a slice file")
    run.add_argument("--checkpoint", required=True, help="model path or identifier")
    run.add_argument("--in", dest="slice_path", required=True, help="tokenized slice file")
    run.add_argument("--out", dest="output_path", required=True, help="record file to write")
    run.add_argument("--period", required=True, help="period name stamped on every record")
    run.add_argument("--max-len", type=int, default=512, help="maximum sequence length")
    run.add_argument("--layers", type=int, default=4, help="number of last hidden layers to keep")
    run.add_argument("--batch", type=int, default=8, help="sentences per inference batch")

    check = sub.add_parser("validate", help="re-check every record invariant")
    check.add_argument("records", help="record file to validate")

    args = parser.parse_args(argv)
    try:
        if args.command == "export":
            summary = export(
                ExportConfig(
                    checkpoint=args.checkpoint,
                    slice_path=args.slice_path,
                    output_path=args.output_path,
                    period=args.period,
                    max_length=args.max_len,
                    layers=args.layers,
                    batch_size=args.batch,
                )
            )
            print(json.dumps(summary.to_dict()))
        else:
            violations = validate_record_file(args.records)
            for violation in violations:
                print(violation)
            if violations:
                return 1
            print("ok")
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
