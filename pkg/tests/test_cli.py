import os

import pytest

from scripts.char2_cli import main
from src import verifier
from src.linalg import Subspace
from src.ortho import LieSubalgebra
from src.reports import Report
from src.verifier import VerifyOptions, collect_suite

FORMS_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "forms")
GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out.splitlines()


def test_verify_lie_suite(capsys):
    code, lines = run(capsys, "verify", "--suite", "lie")
    assert code == 0
    assert lines[0] == "CHECK run.seed INFO seed=20240601"
    assert "CHECK lie.so8.dim PASS dim=28" in lines
    assert "CHECK lie.so7.smooth.dim PASS dim=21" in lines
    assert "CHECK lie.so7.scheme.dim PASS dim=22" in lines
    assert all(" FAIL" not in line for line in lines)


def test_verify_polar_for_one_dimension(capsys):
    code, lines = run(capsys, "verify", "--suite", "polar", "--n", "3")
    assert code == 0
    assert "CHECK polar.ker.dim PASS n=3 dim=3 field=gf2^1" in lines
    assert "CHECK polar.coker.dim PASS n=3 dim=3 field=gf2^2" in lines


def test_verify_descent_suite(capsys):
    code, lines = run(capsys, "verify", "--suite", "descent")
    assert code == 0
    assert "CHECK descent.K.no-sqrt-t PASS" in lines
    assert "CHECK descent.Kprime.witness PASS lambda=s" in lines
    assert any(line.startswith("CHECK descent.scope INFO text=") for line in lines)


def test_verify_output_is_reproducible(capsys):
    _, first = run(capsys, "verify", "--suite", "scalars", "--seed", "7")
    _, second = run(capsys, "verify", "--suite", "scalars", "--seed", "7")
    assert first == second
    assert first[0] == "CHECK run.seed INFO seed=7"


def test_verify_all_is_identical_across_runs_and_workers(capsys):
    code, single = run(capsys, "verify", "--suite", "all", "--workers", "1")
    _, again = run(capsys, "verify", "--suite", "all", "--workers", "1")
    _, threaded = run(capsys, "verify", "--suite", "all", "--workers", "2")
    assert code == 0
    assert single == again == threaded
    assert [line for line in single if " FAIL" in line] == []


@pytest.mark.parametrize("suite", ["dickson", "isotropic"])
def test_verify_output_does_not_depend_on_workers(capsys, suite):
    _, single = run(capsys, "verify", "--suite", suite, "--workers", "1")
    _, sharded = run(capsys, "verify", "--suite", suite, "--workers", "2")
    assert single == sharded


def test_all_assembles_suites_in_fixed_order(monkeypatch):
    def fake(name):
        def suite(options):
            report = Report()
            report.check(f"{name}.only", True)
            return report
        return suite

    fakes = {name: fake(name) for name in verifier.SUITES}
    monkeypatch.setattr(verifier, "SUITES", fakes)
    sequential = collect_suite("all", VerifyOptions(workers=1)).render()
    threaded = collect_suite("all", VerifyOptions(workers=4)).render()
    assert sequential == threaded
    ids = [line.split()[1] for line in sequential.splitlines()[1:]]
    assert ids == [f"{name}.only" for name in fakes]


def test_failing_check_sets_exit_code(monkeypatch, capsys):
    def failing(options):
        report = Report()
        report.check("lie.broken", False, witness="x1*x2")
        return report

    monkeypatch.setitem(verifier.SUITES, "lie", failing)
    code, lines = run(capsys, "verify", "--suite", "lie")
    assert code == 1
    assert "CHECK lie.broken FAIL witness=x1*x2" in lines


def test_lie_command(capsys):
    code, lines = run(capsys, "lie", "--group", "so7", "--variant", "scheme")
    assert code == 0
    assert lines == ["CHECK lie.so7.scheme.dim INFO dim=22 field=gf2^1"]
    code, lines = run(capsys, "lie", "--group", "so8", "--print-basis")
    assert code == 0
    assert sum(1 for line in lines if line.startswith("BASIS ")) == 28


def test_census_command(capsys):
    code, lines = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "hyperbolic2.form"), "--group-order")
    assert code == 0
    assert "CHECK census.nondegenerate PASS dim=4 field=gf2^1" in lines
    assert "CHECK census.isotropic INFO count=10" in lines
    assert "CHECK census.group-order INFO order=72 dickson_kernel=36" in lines


def test_census_exit_codes(capsys):
    code, lines = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "degenerate.form"))
    assert code == 1
    assert lines[0].startswith("CHECK census.nondegenerate FAIL")
    code, _ = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "malformed.form"))
    assert code == 2
    code, _ = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "missing.form"))
    assert code == 2
    code, lines = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "so7_twisted.form"))
    assert code == 0
    assert 'CHECK census.isotropic INFO count=none reason="not enumerable"' in lines


def test_census_reports_the_radical(capsys):
    code, lines = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "so7.form"))
    assert code == 0
    assert "CHECK census.radical INFO dim=1 generators=0,0,0,0,1,0,0" in lines
    assert "CHECK census.isotropic INFO count=64" in lines


def test_census_group_order_rejects_large_forms(capsys):
    code, _ = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "so7.form"), "--group-order")
    assert code == 2


def test_fiber_command(capsys):
    code, lines = run(capsys, "fiber", "--kind", "so7", "--check", "descent")
    assert code == 0
    assert lines == [
        "CHECK fiber.so7.pad0.descent.K PASS",
        "CHECK fiber.so7.pad0.descent.Kprime PASS lambda=s",
    ]
    code, lines = run(capsys, "fiber", "--kind", "so8-B", "--pad", "1")
    assert code == 0
    assert [line.split()[1] for line in lines] == [
        "fiber.so8-B.pad1.twist",
        "fiber.so8-B.pad1.involution",
        "fiber.so8-B.pad1.descent.K",
        "fiber.so8-B.pad1.descent.Kprime",
        "fiber.so8-B.pad1.phi-class",
    ]


def test_invalid_arguments_exit_with_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "nonsense"])
    assert info.value.code == 2


def test_census_rejects_a_zero_denominator(tmp_path, capsys):
    path = tmp_path / "zero.form"
    path.write_text("field rational\ndim 1\nterm 1 1 1/0\n")
    code, lines = run(capsys, "census", "--form", str(path))
    assert code == 2
    assert lines == []


@pytest.mark.parametrize("argv", [
    ["--n", "0"],
    ["--n", "-3"],
    ["--k", "0"],
    ["--k", "9"],
    ["--workers", "0"],
])
def test_verify_rejects_out_of_range_options(capsys, argv):
    code, lines = run(capsys, "verify", "--suite", "polar", *argv)
    assert code == 2
    assert lines == []


def test_verify_options_validation():
    with pytest.raises(ValueError):
        VerifyOptions(n=0)
    with pytest.raises(ValueError):
        VerifyOptions(k=0)
    with pytest.raises(ValueError):
        VerifyOptions(samples=-1)
    assert VerifyOptions(n=1, k=8).n == 1


def test_census_failure_names_a_radical_vector(capsys):
    code, lines = run(capsys, "census", "--form", os.path.join(FORMS_DIR, "degenerate.form"))
    assert code == 1
    assert lines[0] == "CHECK census.nondegenerate FAIL dim=4 field=gf2^1 witness=0,0,1,0"


def test_bracket_failure_carries_a_witness(monkeypatch, capsys):
    monkeypatch.setattr(LieSubalgebra, "bracket_witness", lambda self: (0, 1))
    code, lines = run(capsys, "verify", "--suite", "lie")
    assert code == 1
    failures = [line for line in lines if " FAIL " in line]
    assert [line.split()[1] for line in failures] == ["lie.so8.bracket", "lie.so7.bracket", "lie.so7.scheme.bracket"]
    assert failures[0].startswith("CHECK lie.so8.bracket FAIL dim=28 witness=[B1,B2]=")


def test_quotient_failures_carry_witnesses(monkeypatch, capsys):
    monkeypatch.setattr("src.ortho.d_line", lambda g, w_basis: Subspace.zero(g.field, len(w_basis) ** 2))
    code, lines = run(capsys, "verify", "--suite", "quotient")
    assert code == 1
    failures = [line for line in lines if " FAIL" in line]
    assert failures
    assert all(" witness=" in line for line in failures)
    assert "CHECK quotient.so8.d-line FAIL witness=0,1,1,0" in lines
    assert "CHECK quotient.so8.dimension-count FAIL witness=8+0!=9" in lines
    assert "CHECK quotient.so7.dimension-count FAIL witness=6+0!=7" in lines


def golden_lines(*parts):
    with open(os.path.join(GOLDEN_DIR, *parts)) as f:
        return f.read().splitlines()


def test_verify_all_matches_the_golden_check_list(capsys):
    code, lines = run(capsys, "verify", "--suite", "all")
    assert code == 0
    assert [" ".join(line.split()[1:3]) for line in lines] == golden_lines("verify_all.ids")
    assert not any(" witness=" in line for line in lines)


@pytest.mark.parametrize("form, flags, expected_code", [
    ("hyperbolic", ["--group-order"], 0),
    ("hyperbolic2", ["--group-order"], 0),
    ("odd3", [], 0),
    ("so7", [], 0),
    ("degenerate", [], 1),
])
def test_census_matches_golden_output(capsys, form, flags, expected_code):
    code, lines = run(capsys, "census", "--form", os.path.join(FORMS_DIR, f"{form}.form"), *flags)
    assert code == expected_code
    assert lines == golden_lines("census", f"{form}.txt")


@pytest.mark.parametrize("form, expected_code", [
    ("hyperbolic.form", 0),
    ("hyperbolic2.form", 0),
    ("odd3.form", 0),
    ("so7.form", 0),
    ("so8.form", 0),
    ("sl2_det.form", 0),
    ("so7_twisted.form", 0),
    ("degenerate.form", 1),
    ("malformed.form", 2),
    ("missing.form", 2),
])
def test_form_corpus_exit_codes(capsys, form, expected_code):
    code, _ = run(capsys, "census", "--form", os.path.join(FORMS_DIR, form))
    assert code == expected_code


def test_fiber_matches_golden_output(capsys):
    code, lines = run(capsys, "fiber", "--kind", "so7")
    assert code == 0
    assert lines == golden_lines("fiber_so7.txt")
