import os
from pathlib import Path

import pytest

import qatp

FIXTURES = Path(os.environ.get("QATP_FIXTURES", Path(__file__).resolve().parents[2] / "fixtures"))


def read(name):
    return (FIXTURES / name).read_text()


def test_polynomial_arithmetic():
    p = qatp.Polynomial("(x + y)^2")
    assert str(p) == "x^2 + 2*x*y + y^2"
    assert p.degree("x") == 2
    assert p.total_degree() == 2
    assert p.evaluate({"x": 3, "y": 4}) == 49
    big = qatp.Polynomial("x^40")
    assert big.evaluate({"x": 3}) == 3**40
    assert (p - p).is_zero()


def test_prem_identity():
    s = qatp.Polynomial("x^3 + 1", ["x", "y"])
    t = qatp.Polynomial("y*x - 2", ["x", "y"])
    r = qatp.prem(s, t, "x")
    lhs = qatp.Polynomial("1", ["x", "y"])
    for _ in range(r["steps"]):
        lhs = lhs * r["multiplier"]
    assert lhs * s == r["quotient"] * t + r["remainder"]
    assert r["remainder"].degree("x") < 1


def test_wu_rhombus_and_cli_backends_agree():
    text = read("rhombus.geo")
    assert qatp.wu_prove(text)["verdict"] == "Proved"
    c = qatp.prove_geo(text, backend="classical")
    q = qatp.prove_geo(text, backend="quantum-sim", word_bits=16)
    assert c["verdict"] == q["verdict"] == "Proved"
    assert q["details"]["conclusions"][0]["pit"]["verdict"] == "ExactZero"


def test_resolution_commands():
    r = qatp.prove_prop(read("contradiction.cnf"), "contradiction.cnf", backend="quantum-sim")
    assert r["verdict"] == "Refuted" and r["exit_code"] == 0
    f = qatp.prove_fol(read("badminton.fol"), backend="classical", herbrand_depth=2)
    assert f["verdict"] == "Refuted"


def test_pit_and_circuits():
    z = qatp.pit(read("pit_zero.poly"), backend="quantum-sim")
    assert z["verdict"] == "ExactZero"
    n = qatp.pit(read("pit_nonzero.poly"), backend="classical", seed=3)
    assert n["verdict"] == "NonzeroWitness"
    assert qatp.evaluate_arith(qatp.Polynomial("x*y - 7"), {"x": 2, "y": 3}, 8, 2) == -1
    e = qatp.emit_circuit(read("pit_nonzero.poly"), var="x", gates=False)
    assert e["queries"]["U_S"] == 3


def test_search_math_and_kravchuk():
    assert qatp.fixed_point_length(0.1, 1 / 32) == 17
    assert qatp.fixed_point_success(17, 0.1, 1 / 32) >= 0.99
    assert [qatp.kravchuk(d, 0, 3) for d in range(4)] == [1, 3, 3, 1]


def test_errors_map_to_python_exceptions():
    with pytest.raises(qatp.ParseError):
        qatp.prove_prop(read("malformed.cnf"), "malformed.cnf")
    with pytest.raises(ValueError):
        qatp.Polynomial("x +* y")
