"""semmut-bridge: one-shot batch inference from a variants file to the
prediction JSONL consumed by `semmut ensemble`."""

from __future__ import annotations

import argparse
import logging
import sys

from .predict import BridgeLoadError, ModelRef, predict_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semmut-bridge")
    parser.add_argument("--model-id", required=True, help="model id stamped on every line")
    parser.add_argument("--checkpoint", required=True, help="local path or hub identifier")
    parser.add_argument("--in", dest="input", required=True, help="variants JSONL")
    parser.add_argument("--out", required=True, help="predictions JSONL")
    parser.add_argument("--max-len", type=int, default=512)
    parser.add_argument("--batch", type=int, default=16)
    parser.add_argument("--seed", type=int, default=42)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING)
    args = build_parser().parse_args(argv)
    ref = ModelRef(
        model_id=args.model_id,
        checkpoint=args.checkpoint,
        max_len=args.max_len,
        batch_size=args.batch,
    )
    try:
        flagged = predict_file(ref, args.input, args.out, seed=args.seed)
    except (BridgeLoadError, FileNotFoundError, ValueError) as exc:
        print(f"semmut-bridge: {exc}", file=sys.stderr)
        return 1
    if flagged:
        print(f"{flagged} lines flagged with inference errors", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
