#!/usr/bin/env python3
"""Full baseline experiment: generate, train, evaluate, print the table.

Produces a dataset under --workdir, trains the averaged sparse tagger on
the train split, and reports dual-target exact-match accuracy on the
validation and test splits, broken down by generalization condition.

Usage:
    python scripts/run_baseline_experiment.py --workdir runs/baseline
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from corrkit.datagen import GenerationConfig, generate, read_jsonl, write_jsonl
from corrkit.evaluation import evaluate, format_report, write_report
from corrkit.tagger import TrainConfig, load_model, predict, save_model, train


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workdir", default="runs/baseline")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--train-size", type=int, default=50_000)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--strict", action="store_true",
                        help="score invalid predictions as-is instead of repairing")
    args = parser.parse_args()

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)

    print(f"generating dataset (seed {args.seed}) ...")
    started = time.monotonic()
    records = list(
        generate(GenerationConfig(seed=args.seed, train_size=args.train_size))
    )
    buckets = {"train": [], "val": [], "test": []}
    for rec in records:
        buckets[rec.split.split("_")[0]].append(rec)
    for name, split_records in buckets.items():
        write_jsonl(split_records, workdir / f"{name}.jsonl")
    print(f"  {len(records)} records in {time.monotonic() - started:.1f}s")

    model_path = workdir / "model.bin"
    if model_path.exists():
        print(f"reusing model at {model_path}")
        model = load_model(model_path)
    else:
        print(f"training ({args.epochs} epochs on {len(buckets['train'])} records) ...")
        started = time.monotonic()
        model = train(
            buckets["train"], TrainConfig(epochs=args.epochs, seed=args.seed)
        )
        save_model(model, model_path)
        print(f"  done in {time.monotonic() - started:.1f}s")

    def source(tokens, boundary):
        return predict(model, tokens, boundary)

    eval_records = buckets["val"] + buckets["test"]
    outcome = evaluate(eval_records, source, lenient_repair=not args.strict)
    text = write_report(outcome, workdir / "report.txt", workdir / "report.json")
    print()
    print(text, end="")
    print(f"\nartifacts in {workdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
