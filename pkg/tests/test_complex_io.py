"""facet 파일 입출력 테스트"""
import json

import pytest

from models.complex import Complex
from models.exceptions import InputFormatError
from models.face import make_face
from utils.complex_io import FacetFileParser


class TestParseText:
    def test_comments_order_and_empty_face(self):
        text = "# 주석\n!order b a\n\na b\n{}\n"
        assert FacetFileParser.parse_text(text) == (["b", "a"], [["a", "b"], []], None)

    def test_rank_directive(self):
        _, facets, r = FacetFileParser.parse_text("!r 2\nx y\n")
        assert r == 2
        assert facets == [["x", "y"]]

    @pytest.mark.parametrize("text", [
        "!bogus\na\n",
        "!r two\na b\n",
        "!order a\n!order a\na\n",
        "a a\n",
    ])
    def test_bad_lines(self, text):
        with pytest.raises(InputFormatError):
            FacetFileParser.parse_text(text)

    def test_empty_face_is_not_json(self):
        complex_, labels = FacetFileParser.complex_from_text("{}\na\n")
        assert labels == ["a"]
        assert complex_.facets == (make_face([0]),)


class TestComplexFromText:
    def test_numeric_labels_sorted_numerically(self):
        complex_, labels = FacetFileParser.complex_from_text("9 10\n1 2\n")
        assert labels == ["1", "2", "9", "10"]
        assert complex_.facets == (make_face([0, 1]), make_face([2, 3]))

    def test_string_labels(self):
        _, labels = FacetFileParser.complex_from_text("b c\na b\n")
        assert labels == ["a", "b", "c"]

    def test_mixed_labels_sorted_as_strings(self):
        complex_, labels = FacetFileParser.complex_from_text("a 10\n9 a\n")
        assert labels == ["10", "9", "a"]
        assert complex_.facets == (make_face([0, 2]), make_face([1, 2]))

    def test_numbering_ignores_first_appearance(self):
        _, labels = FacetFileParser.complex_from_text("3 2\n1 2\n")
        assert labels == ["1", "2", "3"]

    def test_order_directive_overrides_sorting(self):
        _, labels = FacetFileParser.complex_from_text("!order 10 2 1\n1 2\n10 2\n")
        assert labels == ["10", "2", "1"]

    def test_order_directive_keeps_unused_vertices(self):
        complex_, labels = FacetFileParser.complex_from_text("!order c b a z\na b\n")
        assert labels == ["c", "b", "a", "z"]
        assert complex_.n_vertices == 4
        assert complex_.facets == (make_face([1, 2]),)

    def test_json(self):
        text = json.dumps({"facets": [["a", "b"], ["b", "c"]]})
        complex_, labels = FacetFileParser.complex_from_text(text)
        assert labels == ["a", "b", "c"]
        assert complex_.f_vector() == (1, 3, 2)

    def test_json_by_extension(self):
        complex_, _ = FacetFileParser.complex_from_text('{"facets": [[1, 2, 3]]}', "x.json")
        assert complex_.is_simplex

    @pytest.mark.parametrize("text", [
        "# 비어 있음\n",
        '{"faces": []}',
        "!order a a\na\n",
        "!order a\na b\n",
    ])
    def test_rejected(self, text):
        with pytest.raises(InputFormatError):
            FacetFileParser.complex_from_text(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFormatError):
            FacetFileParser.load_complex(str(tmp_path / "nope.txt"))


class TestFamilies:
    def test_uniform_family(self):
        family = FacetFileParser.family_from_text("!r 2\na b\nb c\n", ["a", "b", "c"])
        assert family.r == 2
        assert family.is_uniform
        assert len(family) == 2

    def test_sperner_family(self):
        family = FacetFileParser.family_from_text("a\nb c\n", ["a", "b", "c"])
        assert not family.is_uniform
        assert family.is_sperner()

    def test_unknown_label(self):
        with pytest.raises(InputFormatError):
            FacetFileParser.family_from_text("a q\n", ["a", "b"])


class TestWrite:
    def test_dump_records_order(self, two_triangles):
        text = FacetFileParser.dump_complex(two_triangles)
        assert text.splitlines()[0] == "!order 0 1 2 3 4"
        assert "0 1 2" in text.splitlines()

    @pytest.mark.parametrize("name", ["out.txt", "out.json"])
    def test_write_and_reload(self, tmp_path, two_triangles, name):
        labels = ["v", "a", "b", "c", "d"]
        path = str(tmp_path / name)
        FacetFileParser.write_complex(path, two_triangles, labels)
        complex_, loaded = FacetFileParser.load_complex(path)
        assert loaded == labels
        assert complex_ == two_triangles
        assert [p.name for p in tmp_path.iterdir()] == [name]

    def test_empty_complex_round_trip(self, tmp_path):
        path = str(tmp_path / "void.txt")
        FacetFileParser.write_complex(path, Complex(2, [0]))
        complex_, labels = FacetFileParser.load_complex(path)
        assert labels == ["0", "1"]
        assert complex_ == Complex(2, [0])
