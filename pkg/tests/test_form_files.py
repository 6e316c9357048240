import os

import pytest

from src.fibermodel import Sl2Fiber
from src.form_files import FormFileError, format_form, parse_form_file, parse_form_text, write_form_file
from src.quadform import QuadraticForm, direct_sum, hyperbolic_plane, so7_form, so8_form
from src.scalars import GF2, GF4, RATIONAL, TOWER, gf2k

FORMS_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "forms")


def form_path(name):
    return os.path.join(FORMS_DIR, name)


def test_shipped_forms():
    h = hyperbolic_plane(GF2)
    assert parse_form_file(form_path("hyperbolic.form")) == h
    assert parse_form_file(form_path("hyperbolic2.form")) == direct_sum(h, h)
    assert parse_form_file(form_path("so7.form")) == so7_form(GF2)
    assert parse_form_file(form_path("so8.form")) == so8_form(GF2)
    assert parse_form_file(form_path("sl2_det.form")) == Sl2Fiber(GF4).form
    odd = parse_form_file(form_path("odd3.form"))
    assert odd.is_nondegenerate() and odd.dim == 3
    assert not parse_form_file(form_path("degenerate.form")).is_nondegenerate()


def test_twisted_form_file():
    t = RATIONAL.t()
    expected = so7_form(RATIONAL) + QuadraticForm.from_terms(RATIONAL, 7, {(0, 0): t})
    assert parse_form_file(form_path("so7_twisted.form")) == expected


def test_malformed_file_reports_the_line():
    with pytest.raises(FormFileError) as info:
        parse_form_file(form_path("malformed.form"))
    assert info.value.line_number == 4
    assert "malformed.form:4" in str(info.value)


def test_bare_names_resolve_to_shipped_forms(monkeypatch):
    monkeypatch.setattr("src.form_files.FORMS_DIR", FORMS_DIR)
    assert parse_form_file("so8.form") == so8_form(GF2)


def test_missing_file():
    with pytest.raises(FormFileError):
        parse_form_file(form_path("does-not-exist.form"))


@pytest.mark.parametrize("text, line", [
    ("dim 2\n", 1),
    ("field gf2^1\nfield gf2^1\n", 2),
    ("field gf2^1\ndim two\n", 2),
    ("field gf2^1\ndim 2\nterm 1 3 1\n", 3),
    ("field gf2^1\ndim 2\nterm 1 2 1\nterm 1 2 1\n", 4),
    ("field gf2^1\ndim 2\nterm 1 1 2\n", 3),
    ("field gf2^1\ndim 2\nscale 1\n", 3),
    ("field gf5^1\n", 1),
    ("# nothing here\n", 0),
    ("field rational\ndim 1\nterm 1 1 1/0\n", 3),
    ("field tower\ndim 1\nterm 1 1 1 + s*1/00\n", 3),
])
def test_parse_errors(text, line):
    with pytest.raises(FormFileError) as info:
        parse_form_text(text)
    assert info.value.line_number == line
    assert isinstance(info.value, ValueError)


def test_comments_and_blank_lines():
    text = "# header\n\nfield gf2^1   # the prime field\ndim 2\n\nterm 1 2 1 # x1*x2\n"
    assert parse_form_text(text) == hyperbolic_plane(GF2)


@pytest.mark.parametrize("form", [
    so7_form(GF2),
    Sl2Fiber(gf2k(3)).form,
    so7_form(RATIONAL) + QuadraticForm.from_terms(RATIONAL, 7, {(0, 0): RATIONAL.t(), (1, 2): RATIONAL.parse("1/11")}),
    QuadraticForm.from_terms(TOWER, 2, {(0, 0): TOWER.s(), (0, 1): TOWER.parse("01 + s*1")}),
], ids=["gf2", "gf8", "rational", "tower"])
def test_written_forms_load_back(form, tmp_path):
    path = str(tmp_path / "forms" / "saved.form")
    write_form_file(form, path)
    assert parse_form_file(path) == form
    assert parse_form_text(format_form(form)) == form
