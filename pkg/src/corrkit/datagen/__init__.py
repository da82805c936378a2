from .templates import Lexicon, Template, parse_lexicon_file, parse_template_file
from .records import DatasetRecord, read_jsonl, write_jsonl
from .generator import (
    GenerationConfig,
    default_data_dir,
    generate,
    instantiate,
    verify_disjointness,
)

__all__ = [
    "Lexicon",
    "Template",
    "parse_lexicon_file",
    "parse_template_file",
    "DatasetRecord",
    "read_jsonl",
    "write_jsonl",
    "GenerationConfig",
    "default_data_dir",
    "generate",
    "instantiate",
    "verify_disjointness",
]
