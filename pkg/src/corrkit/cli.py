"""Command-line entry point: generate / train / correct / eval / adapter-check.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
Every command writes a manifest next to its outputs with the resolved
configuration, so a run can be repeated identically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .adapter_client import ExternalTagger
from .core import token_texts, tokenize, TaggedPair
from .datagen import (
    GenerationConfig,
    default_data_dir,
    generate,
    read_jsonl,
    write_jsonl,
)
from .errors import AdapterCrashed, CorrkitError, ParseError, ProtocolError, SchemaError
from .evaluation import evaluate, format_report, write_report
from .merging import merge
from .tagger import (
    TrainConfig,
    load_model,
    predict,
    repair_labels,
    save_model,
    train,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _default_seed() -> int:
    env = os.environ.get("CORRKIT_SEED")
    return int(env) if env else 0


def _write_manifest(path: Path, command: str, config: dict, started: float):
    manifest = {
        "command": command,
        "config": config,
        "toolkit_version": __version__,
        "duration_seconds": round(time.monotonic() - started, 3),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")


def _parse_sizes(text: str) -> tuple[int, int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected 4 comma-separated sizes")
    return tuple(parts)  # type: ignore[return-value]


def cmd_generate(args) -> int:
    started = time.monotonic()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = GenerationConfig(
        seed=args.seed,
        train_size=args.train_size,
        val_sizes=args.val_sizes,
        test_sizes=args.test_sizes,
        templates_dir=Path(args.templates),
        lexicons_dir=Path(args.lexicons),
        dedup=not args.no_dedup,
    )
    buckets = {"train": [], "val": [], "test": []}
    for rec in generate(config):
        buckets[rec.split.split("_")[0]].append(rec)
    for name, records in buckets.items():
        n = write_jsonl(records, out_dir / f"{name}.jsonl")
        print(f"wrote {n} records to {out_dir / (name + '.jsonl')}")
    _write_manifest(
        out_dir / "manifest.json",
        "generate",
        {
            "seed": config.seed,
            "train_size": config.train_size,
            "val_sizes": list(config.val_sizes),
            "test_sizes": list(config.test_sizes),
            "templates": str(config.templates_dir),
            "lexicons": str(config.lexicons_dir),
            "dedup": config.dedup,
            "out": str(out_dir),
        },
        started,
    )
    return EXIT_OK


def cmd_train(args) -> int:
    started = time.monotonic()
    records = list(read_jsonl(args.train))
    config = TrainConfig(epochs=args.epochs, seed=args.seed)
    model = train(records, config)
    save_model(model, args.out)

    correct = total = 0
    for rec in records:
        tokens = [t.text for t in rec.tagged.all_tokens]
        pred = predict(model, tokens, rec.tagged.boundary)
        correct += sum(p == g for p, g in zip(pred, rec.tagged.labels))
        total += len(pred)
    acc = correct / total if total else 0.0
    print(f"training-set label accuracy: {100 * acc:.2f} %")
    _write_manifest(
        Path(str(args.out) + ".manifest.json"),
        "train",
        {
            "train": str(args.train),
            "out": str(args.out),
            "epochs": args.epochs,
            "seed": args.seed,
            "records": len(records),
        },
        started,
    )
    return EXIT_OK


def _make_label_source(args):
    """Returns (label_source, closer).  --gold maps to a None source."""
    if getattr(args, "gold", False):
        return None, lambda: None
    if args.model:
        model = load_model(args.model)
        return (lambda tokens, boundary: predict(model, tokens, boundary)), lambda: None
    adapter = ExternalTagger(args.external)
    return adapter.predict, adapter.close


def cmd_correct(args) -> int:
    request = tokenize(args.request)
    correction = tokenize(args.correction)
    tokens = token_texts(list(request)) + token_texts(list(correction))
    boundary = len(request)

    source, close = _make_label_source(args)
    try:
        labels = source(tokens, boundary)
    finally:
        close()
    labels = repair_labels(labels, boundary)
    pair = TaggedPair.from_texts(
        token_texts(list(request)), token_texts(list(correction)), labels
    )
    result = merge(pair)
    print(
        json.dumps(
            {
                "corrected": " ".join(token_texts(list(result.corrected_tokens))),
                "pairs": [
                    {
                        "slot": p.slot_index,
                        "reparandum": " ".join(token_texts(list(p.reparandum))),
                        "repair": " ".join(token_texts(list(p.repair))),
                    }
                    for p in result.pairs
                ],
            },
            ensure_ascii=False,
        )
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    started = time.monotonic()
    records = list(read_jsonl(args.data))
    source, close = _make_label_source(args)
    try:
        outcome = evaluate(records, source, lenient_repair=args.lenient)
    finally:
        close()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    text = write_report(outcome, out_dir / "report.txt", out_dir / "report.json")
    print(text, end="")
    _write_manifest(
        out_dir / "eval.manifest.json",
        "eval",
        {
            "data": str(args.data),
            "model": args.model,
            "external": args.external,
            "gold": args.gold,
            "lenient": args.lenient,
            "out": str(out_dir),
        },
        started,
    )
    return EXIT_OK


ADAPTER_PROBES = [
    (["cook", "rice", "for", "me", "no", "curry", "rice"], 4),
    (["put", "the", "knives", "into", "the", "drawer", "no", "the", "forks"], 6),
    (["bring", "the", "cups"], 3),
]


def cmd_adapter_check(args) -> int:
    with ExternalTagger(args.external) as adapter:
        print(f"handshake ok: protocol tagger/1, name {adapter.name!r}")
        for i, (tokens, boundary) in enumerate(ADAPTER_PROBES, 1):
            labels = adapter.predict(tokens, boundary)
            print(f"probe {i}: {len(labels)} labels for {len(tokens)} tokens ok")
    print("adapter conforms to tagger/1")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrkit",
        description="Correction resolution toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic dataset")
    p.add_argument("--templates", default=str(default_data_dir() / "templates"))
    p.add_argument("--lexicons", default=str(default_data_dir() / "lexicons"))
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--train-size", type=int, default=50_000)
    p.add_argument("--val-sizes", type=_parse_sizes, default=(100, 100, 100, 100))
    p.add_argument("--test-sizes", type=_parse_sizes, default=(205, 606, 584, 332))
    p.add_argument("--no-dedup", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train the baseline tagger")
    p.add_argument("--train", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("correct", help="resolve one request/correction pair")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model")
    group.add_argument("--external")
    p.add_argument("--request", required=True)
    p.add_argument("--correction", required=True)
    p.set_defaults(func=cmd_correct, gold=False)

    p = sub.add_parser("eval", help="dual-target accuracy report")
    p.add_argument("--data", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--model")
    group.add_argument("--external")
    group.add_argument("--gold", action="store_true")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("adapter-check", help="probe an external tagger")
    p.add_argument("--external", required=True)
    p.set_defaults(func=cmd_adapter_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError, ParseError, SchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (AdapterCrashed, ProtocolError) as e:
        print(f"adapter error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except CorrkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
