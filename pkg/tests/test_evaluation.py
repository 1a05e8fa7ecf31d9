from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from polyrel.engine import Scorer, ScorerConfig
from polyrel.evaluation import (
    REPORT_COLUMNS,
    ReportRow,
    UndefinedCorrelationError,
    average_ranks,
    gain,
    pearson,
    read_report,
    render_report,
    report_json,
    spearman,
)
from polyrel.harness import evaluate, evaluate_matrix
from polyrel.ingest import GoldDataset


class TestPearson:
    def test_examples(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_undefined(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1.0], [2.0])
        with pytest.raises(UndefinedCorrelationError):
            pearson([1, 1, 1], [1, 2, 3])
        with pytest.raises(ValueError):
            pearson([1, 2], [1, 2, 3])

    @settings(max_examples=60)
    @given(
        st.lists(st.floats(-100, 100), min_size=3, max_size=30),
        st.floats(0.1, 10),
        st.floats(-50, 50),
    )
    def test_affine_invariance(self, xs, a, b):
        ys = [x * x for x in xs]
        try:
            r = pearson(xs, ys)
        except UndefinedCorrelationError:
            return
        assert pearson([a * x + b for x in xs], ys) == pytest.approx(r, abs=1e-6)


class TestSpearman:
    def test_ranks_with_ties(self):
        assert average_ranks([10, 20, 20, 5]).tolist() == [2.0, 3.5, 3.5, 1.0]

    def test_monotone_transform(self):
        xs = [0.1, 0.5, 0.2, 0.9, 0.3]
        ys = [1, 3, 2, 5, 4]
        assert spearman(np.exp(xs), ys) == pytest.approx(spearman(xs, ys))

    def test_matches_scipy_with_ties(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(3, 25))
            x = rng.integers(0, 5, n).astype(float)
            y = rng.integers(0, 5, n).astype(float)
            try:
                got = spearman(x, y)
            except UndefinedCorrelationError:
                assert np.ptp(x) == 0 or np.ptp(y) == 0
                continue
            assert got == pytest.approx(stats.spearmanr(x, y).statistic, abs=1e-12)


def test_gain():
    assert gain(0.88, 0.80) == pytest.approx(0.10)
    assert gain(0.80, 0.80) == 0.0
    with pytest.raises(ZeroDivisionError):
        gain(0.5, 0.0)


ROWS = [
    ReportRow("mc28", "seco", "baseline", 0.81234, 0.8, 0.0, 0.0, 28, 0),
    ReportRow("mc28", "seco", "s4", 0.85, 0.79, 0.0463, -0.0125, 28, 0),
    ReportRow("tiny", "zhou", "s3", math.nan, math.nan, math.nan, math.nan, 1, 2),
]


class TestReport:
    def test_csv_round_trip(self):
        text = render_report(ROWS)
        assert text.splitlines()[0] == ",".join(REPORT_COLUMNS)
        assert "0.8123" in text
        back = read_report(text)
        assert [r.strategy for r in back] == ["baseline", "s4", "s3"]
        assert back[0].pearson == 0.8123
        assert math.isnan(back[2].pearson)
        assert render_report(back) == text

    def test_json_round_trip(self):
        text = report_json(ROWS)
        assert "null" in text
        back = read_report(text)
        assert back[:2] == ROWS[:2]
        assert math.isnan(back[2].spearman)

    def test_markdown(self):
        md = render_report(ROWS, "md").splitlines()
        assert md[0].startswith("| dataset |")
        assert len(md) == 2 + len(ROWS)

    def test_empty(self):
        assert render_report([]) == ",".join(REPORT_COLUMNS) + "\n"
        assert read_report(render_report([])) == []

    def test_bad_input(self):
        with pytest.raises(ValueError):
            render_report(ROWS, "xml")
        with pytest.raises(ValueError):
            read_report("a,b\n1,2\n")


class TestHarness:
    def test_three_pairs(self, vehicles):
        data = GoldDataset("three", (("car", "automobile", 4.0), ("car", "wheel", 2.5), ("fuel", "train", 0.5)))
        rows = evaluate(Scorer(vehicles, ScorerConfig()), data)
        assert [r.strategy for r in rows] == ["baseline", "s1", "s2", "s3", "s4"]
        base = rows[0]
        assert base.pairs_scored == 3 and base.pairs_skipped == 0
        assert base.gain_pearson == 0.0
        scorer = Scorer(vehicles, ScorerConfig())
        vals = [scorer.pair(a, b).scores["s4"] for a, b, _ in data.pairs]
        assert rows[-1].pearson == pytest.approx(pearson(vals, data.scores))

    def test_unknown_words_are_skipped(self, vehicles):
        data = GoldDataset("x", (("car", "automobile", 4.0), ("car", "wheel", 2.5), ("car", "zzz", 1.0), ("fuel", "train", 0.1)))
        rows = evaluate(Scorer(vehicles, ScorerConfig()), data, ["baseline"])
        assert rows[0].pairs_scored == 3 and rows[0].pairs_skipped == 1

    def test_too_few_pairs_give_nan(self, vehicles):
        data = GoldDataset("one", (("car", "wheel", 1.0),))
        rows = evaluate(Scorer(vehicles, ScorerConfig()), data, ["s4"])
        assert math.isnan(rows[0].pearson) and math.isnan(rows[0].gain_pearson)

    def test_unknown_strategy(self, vehicles):
        with pytest.raises(ValueError):
            evaluate(Scorer(vehicles, ScorerConfig()), GoldDataset("x", ()), ["s9"])

    def test_matrix_order_and_threads(self, vehicles):
        data = [
            GoldDataset("a", (("car", "automobile", 4.0), ("car", "wheel", 2.5), ("fuel", "train", 0.5))),
            GoldDataset("b", (("door", "engine", 2.0), ("wheel", "door", 3.0), ("train", "car", 3.5))),
        ]
        one = evaluate_matrix(vehicles, data, ["seco", "zhou"])
        two = evaluate_matrix(vehicles, data, ["seco", "zhou"], threads=2)
        assert render_report(one) == render_report(two)
        assert [(r.dataset, r.baseline) for r in one[::5]] == [("a", "seco"), ("a", "zhou"), ("b", "seco"), ("b", "zhou")]
