import logging

from src.reports import FAIL, INFO, PASS, Report, ReportLine


def test_line_rendering():
    assert ReportLine("lie.so8.dim", PASS, (("dim", 28),)).render() == "CHECK lie.so8.dim PASS dim=28"
    line = ReportLine("descent.scope", INFO, (("text", "graph family only"), ("ok", True), ("witness", None)))
    assert line.render() == 'CHECK descent.scope INFO text="graph family only" ok=true witness=none'
    assert str(ReportLine("polar.identity", FAIL)) == "CHECK polar.identity FAIL"


def test_report_exit_code_and_order():
    report = Report()
    assert report.check("a", True, n=1)
    report.info("b", value="x")
    assert report.exit_code == 0
    assert not report.check("c", False, witness="x1*x2")
    assert report.exit_code == 1
    assert [line.check_id for line in report.failures] == ["c"]
    assert report.render().splitlines() == [
        "CHECK a PASS n=1",
        "CHECK b INFO value=x",
        "CHECK c FAIL witness=x1*x2",
    ]


def test_witness_is_rendered_only_on_failure():
    report = Report()
    report.check("passes", True, n=2, witness="unused")
    report.check("fails", False, n=2, witness=(0, 1, 1, 0))
    assert report.render().splitlines() == [
        "CHECK passes PASS n=2",
        "CHECK fails FAIL n=2 witness=0,1,1,0",
    ]


def test_sequence_values_are_comma_joined():
    line = ReportLine("polar.reconstruction", FAIL, (("witness", (3, (1, 0, 1))),))
    assert line.render() == "CHECK polar.reconstruction FAIL witness=3,(1,0,1)"


def test_failure_without_witness_is_logged(caplog):
    report = Report()
    with caplog.at_level(logging.WARNING, logger="src.reports"):
        report.check("bare", False)
    assert "bare failed without a witness" in caplog.text
    assert report.render() == "CHECK bare FAIL\n"
