"""Build a small randomly initialized base model from a dataset's vocabulary.

Intended for offline environments where no pretrained checkpoint can be
fetched: the resulting directory is a drop-in --base for `adapter
train`. Expect far weaker generalization than a pretrained base.
"""

from __future__ import annotations

from pathlib import Path

from transformers import BertConfig, BertModel, BertTokenizer

from .data import read_examples

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]


def build_base(
    data_path: str | Path,
    out_dir: str | Path,
    hidden_size: int = 64,
    num_layers: int = 2,
    num_heads: int = 2,
    seed: int = 0,
) -> Path:
    words = sorted({w for ex in read_examples(data_path) for w in ex.tokens})
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    vocab_file = out_dir / "vocab.txt"
    vocab_file.write_text("\n".join(SPECIALS + words) + "\n", encoding="utf-8")

    import torch

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(SPECIALS) + len(words),
        hidden_size=hidden_size,
        num_hidden_layers=num_layers,
        num_attention_heads=num_heads,
        intermediate_size=4 * hidden_size,
        max_position_embeddings=128,
    )
    # save the bare encoder; the classification head is added at fine-tune time
    BertModel(config).save_pretrained(out_dir)
    BertTokenizer(str(vocab_file), do_lower_case=True).save_pretrained(out_dir)
    return out_dir
