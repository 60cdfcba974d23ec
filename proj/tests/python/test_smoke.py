import pytest

import vbs

MODEL = """\
instance probability
var A t f
var B t f
var C t f
factor A B
0.9 0.1
0.2 0.8
factor B C
0.7 0.3
0.4 0.6
"""

BOOLEAN = """\
instance boolean
var A t f
var B t f
var C t f
factor A B
1 0 0 1
factor B C
0 1 1 0
"""


def test_query_value():
    assert vbs.query_value(MODEL, "A=t | C=f") == pytest.approx(1.54, abs=1e-9)


def test_marginal_values():
    assert vbs.marginal_values(MODEL, ["B"]) == pytest.approx([1.1, 0.9])


def test_marginal_rejects_uncovered_pairs():
    with pytest.raises(ValueError):
        vbs.marginal_values(MODEL, ["A", "C"])


def test_run_cli_roundtrip(tmp_path):
    model = tmp_path / "m.vbs"
    model.write_text(MODEL)
    code, out, err = vbs.run_cli(["query", str(model), "A=t | C=f"])
    assert code == 0
    assert "value: 1.54" in out
    assert err == ""


def test_check_report_verdict():
    report = vbs.check_report("hypergraph\nedge A B\nedge B C\n")
    assert "verdict: hypertree" in report
    kept = vbs.check_report("hypergraph\nedge A B\nedge B C\n", keep=["A", "C"])
    assert "residual edge" in kept


def test_plan_report():
    report = vbs.plan_report(MODEL, ["B"])
    assert "plan node" in report
    assert "root: node" in report


def test_chain_report_feeds_chain_verify(tmp_path):
    chain = vbs.chain_report(MODEL)
    assert chain.startswith("chain probability")
    model = tmp_path / "m.vbs"
    model.write_text(MODEL)
    chain_file = tmp_path / "m.chain"
    chain_file.write_text(chain)
    code, out, err = vbs.run_cli(
        ["chain-verify", str(model), "--chain", str(chain_file)]
    )
    assert code == 0
    assert "matches within tolerance" in out


def test_boolean_chains_raise_capability_error():
    with pytest.raises(RuntimeError):
        vbs.chain_report(BOOLEAN)


def test_boolean_query_single_node():
    assert vbs.query_value(BOOLEAN, "B=t & C=f") == 1.0
