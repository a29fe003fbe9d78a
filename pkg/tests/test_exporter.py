import numpy as np
import pandas as pd
import pytest
import yaml

from utils.errors import InvalidInputError
from utils.exporter import (
    export_csv,
    export_txt,
    export_yaml,
    format_value,
    write_labels,
    write_report,
    write_series,
)


@pytest.fixture
def summary():
    return pd.DataFrame({"hyper": [0.1, 1.0], "acc": [0.5, 1.0], "weight_std": [0.02, 0.0]})


class TestFormatting:
    @pytest.mark.parametrize(
        "value, expected",
        [
            (0.1, "0.10000000000000001"),
            (3, "3"),
            (np.int64(7), "7"),
            (True, "true"),
            (None, ""),
            ([0.5, 0.25], "0.5,0.25"),
            (np.array([1.0, 2.0]), "1,2"),
            ("clr", "clr"),
        ],
    )
    def test_values(self, value, expected):
        assert format_value(value) == expected

    def test_full_precision_round_trip(self, rng):
        for value in rng.normal(size=100):
            assert float(format_value(value)) == value


class TestFiles:
    def test_report(self, tmp_path):
        path = write_report([("method", "clr"), ("weights", [0.25, 0.75]), ("acc", None)], tmp_path / "r.txt")
        assert path.read_text(encoding="utf-8") == "method=clr\nweights=0.25,0.75\nacc=\n"

    def test_series(self, tmp_path):
        path = write_series([1, 5], [0.5, 0.25], tmp_path / "s.tsv")
        assert path.read_text(encoding="utf-8") == "1\t0.5\n5\t0.25\n"
        with pytest.raises(InvalidInputError):
            write_series([1], [0.5, 0.25], tmp_path / "bad.tsv")

    def test_labels(self, tmp_path):
        path = write_labels([2, 0, 1], tmp_path / "nested" / "labels.txt")
        assert path.read_text(encoding="utf-8").split() == ["2", "0", "1"]

    def test_summary_exports(self, tmp_path, summary):
        records = yaml.safe_load(export_yaml(summary, tmp_path / "s.yaml").read_text(encoding="utf-8"))
        assert records[1] == {"hyper": 1.0, "acc": 1.0, "weight_std": 0.0}
        pd.testing.assert_frame_equal(pd.read_csv(export_csv(summary, tmp_path / "s.csv")), summary)
        assert "weight_std" in export_txt(summary, tmp_path / "s.txt").read_text(encoding="utf-8")
