import sys
from pathlib import Path

import pytest

from corrkit.adapter_client import ExternalTagger
from corrkit.datagen import write_jsonl
from corrkit.errors import AdapterCrashed, ProtocolError

ADAPTERS = Path(__file__).parent / "adapters"


def adapter_cmd(name, *args):
    return " ".join([sys.executable, str(ADAPTERS / name), *map(str, args)])


class TestProtocol:
    def test_gold_echo(self, tmp_path, default_dataset):
        sample = default_dataset[:20]
        data = tmp_path / "sample.jsonl"
        write_jsonl(sample, data)
        with ExternalTagger(adapter_cmd("gold_adapter.py", data)) as adapter:
            assert adapter.name == "gold-lookup"
            for rec in sample:
                tokens = [t.text for t in rec.tagged.all_tokens]
                labels = adapter.predict(tokens, rec.tagged.boundary)
                assert labels == list(rec.tagged.labels)

    def test_unknown_input_falls_back_to_all_c(self):
        with ExternalTagger(adapter_cmd("gold_adapter.py")) as adapter:
            assert adapter.predict(["x", "y"], 1) == ["C", "C"]

    def test_length_mismatch_is_protocol_error(self):
        with ExternalTagger(adapter_cmd("bad_length_adapter.py")) as adapter:
            with pytest.raises(ProtocolError):
                adapter.predict(["a", "b", "c"], 2)

    def test_bad_handshake(self):
        with pytest.raises(ProtocolError):
            ExternalTagger(adapter_cmd("bad_handshake_adapter.py"))

    def test_timeout_is_adapter_crashed(self):
        adapter = ExternalTagger(adapter_cmd("hang_adapter.py"), timeout=0.5)
        with pytest.raises(AdapterCrashed):
            adapter.predict(["a"], 1)

    def test_missing_binary_is_adapter_crashed(self):
        with pytest.raises(AdapterCrashed):
            ExternalTagger("/nonexistent/adapter-binary")

    def test_clean_shutdown_on_closed_stream(self):
        adapter = ExternalTagger(adapter_cmd("gold_adapter.py"))
        adapter.close()
        assert adapter.proc.returncode == 0
