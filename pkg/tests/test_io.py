import numpy as np
import pytest

from pigeonring.io import DataFormatError, read_sets, read_strings, read_vectors


class TestReadVectors:
    def test_binary_lines(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("0101\n1111\n\n0000\n")
        arr = read_vectors(p)
        assert arr.dtype == np.uint8
        assert arr.tolist() == [[0, 1, 0, 1], [1, 1, 1, 1], [0, 0, 0, 0]]

    def test_hex_msb_first(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("0xa1\n0x0F\n")
        arr = read_vectors(p)
        assert arr.tolist() == [
            [1, 0, 1, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1, 1, 1, 1],
        ]

    def test_dimension_mismatch_reports_line(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("0101\n011\n")
        with pytest.raises(DataFormatError) as ei:
            read_vectors(p)
        assert ei.value.line_no == 2

    def test_bad_character(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("0102\n")
        with pytest.raises(DataFormatError) as ei:
            read_vectors(p)
        assert ei.value.line_no == 1

    def test_bad_hex(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("0xzz\n")
        with pytest.raises(DataFormatError):
            read_vectors(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("")
        arr = read_vectors(p)
        assert arr.shape == (0, 0)


class TestReadSets:
    def test_whitespace_tokens(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_bytes(b"a b  c\nx\t y\n\n")
        assert read_sets(p) == [[b"a", b"b", b"c"], [b"x", b"y"], []]

    def test_crlf(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_bytes(b"a b\r\nc\r\n")
        assert read_sets(p) == [[b"a", b"b"], [b"c"]]


class TestReadStrings:
    def test_raw_bytes(self, tmp_path):
        p = tmp_path / "t.txt"
        p.write_bytes(b"hello\nwith space\n\xff\xfe\n\n")
        assert read_strings(p) == [b"hello", b"with space", b"\xff\xfe", b""]

    def test_crlf_stripped(self, tmp_path):
        p = tmp_path / "t.txt"
        p.write_bytes(b"abc\r\n")
        assert read_strings(p) == [b"abc"]
