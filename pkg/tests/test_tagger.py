import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from corrkit.core import LABELS, TaggedPair, validate
from corrkit.errors import EmptyTrainingSet, FormatError
from corrkit.tagger import (
    TrainConfig,
    featurize,
    load_model,
    predict,
    repair_labels,
    save_model,
    train,
)

FIG4 = TaggedPair.from_texts(
    ["cook", "rice", "for", "me"],
    ["no", "curry", "rice"],
    ["C", "R1", "C", "C", "D", "S1", "S1"],
)
FIG4_TOKENS = [t.text for t in FIG4.all_tokens]


class TestFeaturize:
    def test_position_zero(self):
        feats = featurize(FIG4_TOKENS, 4, 0, [])
        assert "w0=cook" in feats
        assert "seg=request" in feats
        assert "p1=<BOS>" in feats
        assert "w-1=<BOS>" in feats

    def test_boundary_position(self):
        feats = featurize(FIG4_TOKENS, 4, 4, ["C", "R1", "C", "C"])
        assert "seg=correction" in feats
        assert "dist_boundary=0" in feats

    def test_deterministic(self):
        a = featurize(FIG4_TOKENS, 4, 2, ["C", "R1"])
        b = featurize(FIG4_TOKENS, 4, 2, ["C", "R1"])
        assert a == b

    def test_out_of_range_position(self):
        with pytest.raises(ValueError):
            featurize(FIG4_TOKENS, 4, 7, [])


class TestTrainPredict:
    def test_overfit_single_record(self):
        model = train([FIG4] * 50, TrainConfig(epochs=5, seed=0))
        assert predict(model, FIG4_TOKENS, 4) == list(FIG4.labels)

    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSet):
            train([], TrainConfig())

    def test_zero_epochs_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=0)

    def test_untrained_model_predicts_all_c(self):
        from corrkit.tagger import TaggerModel

        model = TaggerModel(weights={}, averaged={})
        assert predict(model, FIG4_TOKENS, 4) == ["C"] * 7

    def test_training_deterministic(self, tmp_path):
        records = [FIG4] * 20
        a_path, b_path = tmp_path / "a.bin", tmp_path / "b.bin"
        save_model(train(records, TrainConfig(epochs=3, seed=9)), a_path)
        save_model(train(records, TrainConfig(epochs=3, seed=9)), b_path)
        assert a_path.read_bytes() == b_path.read_bytes()

    def test_predict_argument_checks(self):
        model = train([FIG4], TrainConfig(epochs=1))
        with pytest.raises(ValueError):
            predict(model, [], 0)
        with pytest.raises(ValueError):
            predict(model, ["a"], 2)


def _random_labels(rng, n):
    return [rng.choice(LABELS) for _ in range(n)]


class TestRepairLabels:
    def test_clean_input_is_fixpoint(self):
        labels = list(FIG4.labels)
        assert repair_labels(labels, 4) == labels

    def test_unpaired_s2_becomes_d(self):
        labels = ["C", "R1", "C", "C", "D", "S1", "S2"]
        assert repair_labels(labels, 4) == ["C", "R1", "C", "C", "D", "S1", "D"]

    def test_stray_s_in_request(self):
        # the stray S1 moves to C; the mixed D/C correction segment is then
        # normalized to all-D so the result validates
        labels = ["S1", "C", "C", "C", "D", "C", "C"]
        assert repair_labels(labels, 4) == ["C", "C", "C", "C", "D", "D", "D"]

    def test_discontiguous_run_keeps_longest(self):
        labels = ["R1", "C", "R1", "R1", "S1", "S1"]
        repaired = repair_labels(labels, 4)
        assert repaired == ["C", "C", "R1", "R1", "S1", "S1"]

    def test_randomized_repair_always_validates(self):
        rng = random.Random(0)
        for _ in range(2000):
            n = rng.randint(2, 12)
            boundary = rng.randint(1, n)
            labels = _random_labels(rng, n)
            repaired = repair_labels(labels, boundary)
            request = [f"w{i}" for i in range(boundary)]
            correction = [f"w{i}" for i in range(n - boundary)]
            pair = TaggedPair.from_texts(request, correction, repaired)
            assert validate(pair).ok, (labels, boundary, repaired)
            assert repair_labels(repaired, boundary) == repaired

    @given(
        st.integers(min_value=2, max_value=12),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=200)
    def test_repair_idempotent(self, n, rng):
        boundary = rng.randint(1, n)
        labels = [rng.choice(LABELS) for _ in range(n)]
        once = repair_labels(labels, boundary)
        assert repair_labels(once, boundary) == once


class TestModelIO:
    def test_roundtrip_predictions(self, tmp_path):
        model = train([FIG4] * 50, TrainConfig(epochs=5, seed=0))
        path = tmp_path / "model.bin"
        save_model(model, path)
        loaded = load_model(path)
        assert predict(loaded, FIG4_TOKENS, 4) == predict(model, FIG4_TOKENS, 4)
        assert loaded.epochs == model.epochs
        assert loaded.record_count == model.record_count

    def test_truncated_file(self, tmp_path):
        model = train([FIG4], TrainConfig(epochs=1))
        path = tmp_path / "model.bin"
        save_model(model, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) // 2])
        with pytest.raises(FormatError):
            load_model(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "model.bin"
        path.write_bytes(b"NOTAMODEL" + b"\x00" * 64)
        with pytest.raises(FormatError):
            load_model(path)
