import pytest
from numpy.testing import assert_array_equal

from utils.errors import DatasetError, InvalidInputError
from utils.parser import (
    clean_line,
    key_value_dict,
    parse_float_list,
    parse_int_list,
    parse_key_values,
    parse_label_lines,
    parse_matrix_lines,
)


class TestLists:
    def test_clean_line(self):
        assert clean_line("  0.1   0.2\t0.3 \n") == "0.1 0.2 0.3"

    @pytest.mark.parametrize("text, expected", [("4,1.5", [4.0, 1.5]), ("4 1.5", [4.0, 1.5]), ("0.1, 0.4", [0.1, 0.4])])
    def test_floats(self, text, expected):
        assert parse_float_list(text) == expected

    def test_ints(self):
        assert parse_int_list("0,1,2") == [0, 1, 2]
        with pytest.raises(InvalidInputError):
            parse_int_list("1,2.5")

    @pytest.mark.parametrize("text", ["", "a,b", "1,,x"])
    def test_invalid_floats(self, text):
        with pytest.raises(InvalidInputError):
            parse_float_list(text)


class TestFiles:
    def test_matrix(self):
        matrix = parse_matrix_lines(["0 1\n", "\n", "2.5 -3e-2\n"])
        assert_array_equal(matrix, [[0.0, 1.0], [2.5, -0.03]])

    def test_ragged_matrix(self):
        with pytest.raises(DatasetError) as info:
            parse_matrix_lines(["0 1", "1 2 3"], "m.txt")
        assert info.value.row == 2
        assert str(info.value).startswith("m.txt, row 2: ")

    def test_non_finite_matrix(self):
        with pytest.raises(DatasetError):
            parse_matrix_lines(["0 nan"])

    def test_non_finite_value_reports_file_line(self):
        with pytest.raises(DatasetError) as info:
            parse_matrix_lines(["0 1", "", "inf 2"], "m.txt")
        assert info.value.row == 3
        assert str(info.value).startswith("m.txt, row 3: ")

    def test_labels(self):
        assert_array_equal(parse_label_lines(["1\n", "0\n", "\n", "2\n"]), [1, 0, 2])
        with pytest.raises(DatasetError):
            parse_label_lines(["1", "b"])

    def test_key_values_keep_order(self):
        pairs = parse_key_values(["# comment", "kind=graphs", "view=a.txt", "view = b.txt", ""])
        assert pairs == [("kind", "graphs"), ("view", "a.txt"), ("view", "b.txt")]
        assert key_value_dict(pairs)["view"] == "b.txt"

    def test_key_values_reject_bare_lines(self):
        with pytest.raises(DatasetError):
            parse_key_values(["kind graphs"])
