import io
import json
import subprocess
import sys

import pytest

from adespectra.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, UsageError, emit_json, main, parse_measure, parse_poly
from adespectra.algebra import Poly
from adespectra.measures import alpha_d_n


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_loops_example():
    code, text = run("loops", "A(4)", "--max-k", "4")
    assert code == EXIT_OK
    assert text.strip() == "1, 1, 2, 5, 13"


def test_series_t_factored():
    code, text = run("series", "E6", "--kind", "t")
    assert code == EXIT_OK
    assert "(1-q^6)(1-q^8)/((1-q^3)(1-q^12))" in text


@pytest.mark.parametrize("kind", ["poincare", "theta", "t"])
def test_series_kinds(kind):
    code, text = run("series", "D(5)", "--kind", kind, "--order", "6")
    assert code == EXIT_OK and text


def test_decompose_e7():
    code, text = run("decompose", "E7")
    assert code == EXIT_OK
    assert "infeasible (period 18)" in text
    assert "witness: c_2 - c_4" in text


def test_decompose_with_period():
    code, text = run("decompose", "A(2)", "--period", "6")
    assert code == EXIT_OK and "feasible (period 6)" in text


def test_measure_verb():
    code, text = run("measure", "E6")
    assert code == EXIT_OK and "alpha*d_12" in text
    code, text = run("measure", "A(2)", "--weights")
    assert code == EXIT_OK


def test_catalog_lists_everything():
    code, text = run("catalog")
    assert code == EXIT_OK
    for g in ("A(2)", "E7", "E8ext", "AInf", "DInf", "AZZ"):
        assert g in text
    code, text = run("catalog", "--format", "json")
    data = json.loads(text)
    assert data["schema"] == "1"
    assert {"graph": "E7", "measure": "eps_7 (not cyclotomic)", "cyclotomic": False} in data["catalog"]


def test_verify_passes_and_fails():
    assert run("verify", "A(4)")[0] == EXIT_OK
    assert run("verify", "AInf", "--max-k", "8")[0] == EXIT_OK
    assert run("verify", "A(4)", "--measure", "AlphaRoots(4)")[0] == EXIT_FAILED
    code, text = run("verify", "A(4)", "--perturb-theta", "q^3")
    assert code == EXIT_FAILED and "FAIL" in text


def test_family_verb():
    assert run("family", "F21_even", "--k-max", "3")[0] == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        ("loops", "X(3)"),
        ("loops", "A(0)"),
        ("report",),
        ("decompose", "E7", "--period", "12"),
        ("measure", "F(3,3,3)"),
        ("nonsense",),
        ("family", "no_such_seed"),
        ("report", "AInf"),
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_empty_filter_report():
    code, text = run("report", "--filter", "nothing", "--format", "json")
    assert code == EXIT_OK
    assert text.strip() == '{"schema":"1","graphs":[]}'


def test_single_graph_report():
    code, text = run("report", "A(2)", "--format", "json", "--max-k", "6")
    assert code == EXIT_OK
    rec = json.loads(text)["graphs"][0]
    assert rec["graph"] == "A(2)"
    assert rec["loops"] == [1] * 7
    assert rec["measure"] == {"AlphaRoots(3)": "1/1"}
    assert rec["ok"] is True


def test_e8_report_marks_non_cyclotomic():
    code, text = run("report", "E8", "--format", "json", "--max-k", "6")
    rec = json.loads(text)["graphs"][0]
    assert rec["measure"] == {"cyclotomic": False}
    assert rec["t_series"]["factored"] == "(1-q^10)(1-q^15)(1-q^18)/((1-q^5)(1-q^9)(1-q^30))"
    assert rec["decomposition"]["feasible"] is False


def test_json_round_trip_is_byte_identical():
    code, text = run("report", "E6", "D1ext(6)", "--format", "json", "--max-k", "6")
    raw = text.strip().encode()
    assert emit_json(json.loads(raw)) == raw


def test_parallel_report_matches_serial():
    strip = lambda text: [{k: v for k, v in r.items() if k != "seconds"} for r in json.loads(text)["graphs"]]
    _, serial = run("report", "--filter", "E.*", "--format", "json", "--max-k", "5")
    _, parallel = run("report", "--filter", "E.*", "--format", "json", "--max-k", "5", "--jobs", "2")
    assert strip(serial) == strip(parallel)
    assert [r["graph"] for r in strip(serial)] == ["E6", "E7", "E8", "E6ext", "E7ext", "E8ext"]


def test_parse_helpers():
    assert parse_measure("AlphaRoots(3)") == alpha_d_n(3)
    assert parse_measure('{"AlphaRoots(3)": "1/1"}') == alpha_d_n(3)
    assert parse_poly("q^3") == Poly.monomial(3)
    with pytest.raises(UsageError):
        parse_measure("wat")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "adespectra", "loops", "A(4)", "--max-k", "4"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "1, 1, 2, 5, 13"
    proc = subprocess.run([sys.executable, "-m", "adespectra", "loops", "X(3)"], capture_output=True, text=True)
    assert proc.returncode == 2 and "error" in proc.stderr
