import json

import pytest

from corrkit_adapter.data import read_examples


def write_record(path, **overrides):
    record = {
        "request_tokens": ["cook", "rice"],
        "correction_tokens": ["no", "pasta"],
        "labels": ["C", "R1", "D", "S1"],
        "boundary": 2,
    }
    record.update(overrides)
    path.write_text(json.dumps(record) + "\n")


class TestReadExamples:
    def test_reads_record(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_record(path)
        (ex,) = read_examples(path)
        assert ex.tokens == ("cook", "rice", "no", "pasta")
        assert ex.boundary == 2
        assert ex.labels == ("C", "R1", "D", "S1")

    def test_skips_blank_lines(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_record(path)
        path.write_text(path.read_text() + "\n")
        assert len(read_examples(path)) == 1

    def test_length_mismatch_rejected(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_record(path, labels=["C", "R1", "D"])
        with pytest.raises(ValueError, match="length"):
            read_examples(path)

    def test_boundary_mismatch_rejected(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_record(path, boundary=3)
        with pytest.raises(ValueError, match="boundary"):
            read_examples(path)

    def test_unknown_label_rejected(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_record(path, labels=["C", "R1", "D", "X9"])
        with pytest.raises(ValueError, match="unknown"):
            read_examples(path)

    def test_generated_dataset_loads(self, workspace):
        examples = read_examples(workspace["data"])
        assert len(examples) == 150
