import io
import json
import subprocess
import sys

import pytest

from asymprod.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_constant_glaisher():
    assert call("constant", "glaisher", "--digits", "25") == (0, "1.2824271291006226368753425\n", "")


def test_fk_two():
    code, out, _ = call("fk", "2", "--digits", "25")
    assert code == 0 and out == "1.0239374116371184015779507\n"


def test_product_catalan():
    assert call("product", "catalan", "--m", "4", "--format", "plain")[:2] == (0, "140\n")


def test_product_kinds():
    assert call("product", "row", "--n", "5")[1] == "2500\n"
    assert call("product", "multinomial", "--m", "2", "--a", "3", "--parts", "1,1,1")[1] == "540\n"
    assert call("product", "scaled_row", "--a", "2", "--n", "2")[1] == "3/2\n"
    assert call("product", "superfactorial", "--k", "2", "--m", "3")[1] == "34560\n"


def test_product_json_encodes_strings():
    code, out, _ = call("product", "central", "--m", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["value"] == "16800" and isinstance(data["log_value"], str)


def test_asympt_json():
    code, out, _ = call("asympt", "binomial", "--a", "5", "--b", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set("rqsltu") <= set(data["form"])
    assert data["form"]["t"].startswith("-0.302777777")
    assert data["constant"]["value"] == "0.6129670404054601065382712"


def test_asympt_hirschhorn_value():
    code, out, _ = call("asympt", "hirschhorn", "--n", "10", "--terms", "6", "--format", "json")
    assert code == 0 and "log_value" in json.loads(out)


def test_verify_grid_json():
    code, out, _ = call("verify", "grid", "--kind", "central", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "pass" and len(data["rows"]) == 6


def test_verify_grid_csv():
    code, out, _ = call("verify", "grid", "--kind", "binomial", "--a", "5", "--b", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "m,log_exact,log_asym,delta"


def test_verify_failure_exit_code(monkeypatch):
    from fractions import Fraction

    from asymprod import asymptotics

    real = asymptotics.for_spec

    def shifted(spec, precision_bits=128):
        constant, form = real(spec, precision_bits)
        return asymptotics.AsymptoticConstant.from_log(constant.name, constant.log_value + Fraction(1, 100)), form

    monkeypatch.setattr(asymptotics, "for_spec", shifted)
    code, out, _ = call("verify", "grid", "--kind", "central")
    assert code == 1 and "FAIL" in out


def test_verify_checks():
    for check in ("golden", "gbound", "bin2", "c_a1", "hirschhorn", "residual"):
        code, out, _ = call("verify", check)
        assert code == 0, (check, out)


def test_table1():
    code, out, _ = call("table1")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "F_1 = 1.0463350667705031809809506"
    assert lines[-1].startswith("max |closed - table form|")


def test_fk_series():
    code, out, _ = call("fk", "3", "--series", "--format", "json")
    assert code == 0 and json.loads(out)["series"]["reliable"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ("constant", "nonsense"),
        ("product", "binomial", "--m", "3"),
        ("product", "catalan"),
        ("fk", "2", "--digits", "25", "--prec-bits", "70"),
        ("frobnicate",),
        ("product", "multinomial", "--m", "2", "--a", "3", "--parts", "1,1"),
    ],
)
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2


def test_usage_error_names_flag():
    code, _, err = call("fk", "2", "--prec-bits", "70")
    assert code == 2 and "--prec-bits" in err


def test_deterministic_output():
    a = call("verify", "grid", "--kind", "row", "--format", "json")
    b = call("verify", "grid", "--kind", "row", "--format", "json")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "asymprod", "constant", "golden_ratio", "--digits", "10"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout == "1.6180339887\n"
