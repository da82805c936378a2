"""The `adapter` command: train a checkpoint, serve it, or build a base."""

from __future__ import annotations

import argparse
import sys


def cmd_train(args) -> int:
    from .data import read_examples
    from .model import TrainSettings, train

    examples = read_examples(args.data)
    print(f"training on {len(examples)} examples from {args.data}", file=sys.stderr)
    train(
        examples,
        args.base,
        args.out,
        TrainSettings(
            epochs=args.epochs,
            lr=args.lr,
            seed=args.seed,
            batch_size=args.batch_size,
            use_separator=not args.no_separator,
        ),
        log=lambda msg: print(msg, file=sys.stderr),
    )
    print(f"checkpoint written to {args.out}", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    from .model import load
    from .serve import serve

    return serve(load(args.checkpoint))


def cmd_init_base(args) -> int:
    from .init_base import build_base

    out = build_base(
        args.data,
        args.out,
        hidden_size=args.hidden_size,
        num_layers=args.layers,
        num_heads=args.heads,
        seed=args.seed,
    )
    print(f"base model written to {out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adapter", description="Neural correction tagger (tagger/1)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fine-tune a token-classification tagger")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--base", default="bert-base-cased")
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--no-separator", action="store_true",
                   help="omit the separator between request and correction")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("serve", help="answer tagger/1 requests on stdin/stdout")
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser(
        "init-base",
        help="build a small randomly initialized base from a dataset vocabulary",
    )
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_init_base)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
