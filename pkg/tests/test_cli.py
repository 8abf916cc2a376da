"""Tests for the expression language and the command line front end."""

import json
from fractions import Fraction

import numpy as np
import pytest

from motzkin.cli import (
    Add,
    Adj,
    Expect,
    Gen,
    Mul,
    Num,
    Sub,
    evaluate,
    evaluate_operator,
    parse_expression,
    pretty,
    run_command,
)
from motzkin.diagram_core import adjoint, embed, generator, identity
from motzkin.errors import ParameterError, ParseError
from motzkin.jones_wenzl import jones_wenzl
from motzkin.representation import build_example_pair, evaluate_element

QUARTER = Fraction(1, 4)

# Expressions already in canonical form: parsing and printing must give
# them back verbatim.
CORPUS = [
    "t1",
    "l1",
    "r1",
    "p1",
    "p2",
    "id",
    "g",
    "g1",
    "g2",
    "2",
    "1/3",
    "3/4",
    "t1'",
    "l2'",
    "t1''",
    "(t1*l1)'",
    "(t1 + t2)'",
    "t1^2",
    "t1^0",
    "l1^3",
    "t1'^2",
    "t1^2'",
    "E(p2)^2",
    "t1*t1",
    "t1*l1*r1",
    "t1*(l1*r1)",
    "2*t1",
    "1/2*t1",
    "t1 + t2",
    "t1 - t2",
    "t1*t1 - t1",
    "t1 - t2 + t3",
    "1 - p1 - p2",
    "id - p1",
    "id - g2",
    "(t1 + t2)*l1",
    "l1*(t1 + t2)",
    "(t1 + t2)*(t1 - t2)",
    "(2 - 1/2)*t1",
    "1/2*t1 + 1/3*t2",
    "p1*p2 - p2*p1",
    "l1*l1' - p2",
    "r1*l1 - p1",
    "-t1",
    "-1/2",
    "-t1 + t2",
    "-(t1 + t2)",
    "-t1*t2",
    "E(t1)",
    "E(E(t1))",
    "E(t1*l1)",
    "E(t1) + p1",
    "E(t1)'",
    "E(g3)",
    "g2*p1",
    "t1*(t2 - t1)'",
    "(E(t1) + E(l1))*p1",
]


class TestParser:
    def test_round_trip_corpus(self):
        assert len(CORPUS) >= 50
        for text in CORPUS:
            node = parse_expression(text)
            assert pretty(node) == text, text

    def test_reparse_is_stable(self):
        for text in CORPUS:
            node = parse_expression(text)
            assert parse_expression(pretty(node)) == node, text

    def test_tree_shapes(self):
        assert parse_expression("t1*t1 - t1") == Sub(
            Mul(Gen("t", 1), Gen("t", 1)), Gen("t", 1)
        )
        assert parse_expression("E(t1)'") == Adj(Expect(Gen("t", 1)))
        assert parse_expression("1/3 + id") == Add(
            Num(Fraction(1, 3)), Gen("id", None)
        )
        # postfix binds tighter than *, which binds tighter than +
        assert parse_expression("t1 + l1*r1'") == Add(
            Gen("t", 1), Mul(Gen("l", 1), Adj(Gen("r", 1)))
        )

    def test_parse_errors_with_offsets(self):
        cases = [
            ("", 0),
            ("t1 +", 4),
            ("(t1", 3),
            ("t1)", 2),
            ("x1", 0),
            ("t1 @ t2", 3),
            ("E t1", 2),
            ("t1^", 3),
            ("t1^1/2", 3),
        ]
        for text, offset in cases:
            with pytest.raises(ParseError) as info:
                parse_expression(text)
            assert info.value.offset == offset, text
            assert "offset" in str(info.value)

    def test_parse_with_width(self):
        # Elaboration range-checks every index; E raises the width by one.
        parse_expression("t1*p2 - E(p3)", 2)
        parse_expression("E(E(p3))", 1)
        for text, width in [("p3", 2), ("t2", 2), ("E(p4)", 2), ("t1", 0)]:
            with pytest.raises(ParameterError):
                parse_expression(text, width)


class TestEvaluate:
    def test_projection_difference_vanishes(self):
        assert evaluate("t1*t1 - t1", 2, QUARTER).is_zero()

    def test_generator_identities(self):
        assert evaluate("r1*l1 - p1", 2, QUARTER).is_zero()
        assert evaluate("l1*l1' - p2", 2, QUARTER).is_zero()
        assert evaluate("l1'", 2, QUARTER) == generator(2, "r", 1, lam=QUARTER)

    def test_scalars_and_powers(self):
        two_t = evaluate("2*t1 - t1 - t1", 2, QUARTER)
        assert two_t.is_zero()
        assert evaluate("t1^0", 2, QUARTER) == identity(2, lam=QUARTER)
        assert evaluate("t1^3", 2, QUARTER) == generator(2, "t", 1, lam=QUARTER)

    def test_expectation_lowers_width(self):
        lam = QUARTER
        elem = evaluate("E(p3)", 2, lam)
        assert elem.width == 2
        assert elem == identity(2, lam=lam).scale(lam)
        assert evaluate("E(t1)", 1, lam).width == 1
        nested = evaluate("E(E(id))", 1, lam)
        assert nested == identity(1, lam=lam)

    def test_tower_idempotents(self):
        lam = QUARTER
        assert evaluate("g", 3, lam) == jones_wenzl(3, lam)
        assert evaluate("g2", 3, lam) == embed(jones_wenzl(2, lam))
        assert evaluate("g2*g3 - g3", 3, lam).is_zero()

    def test_adjoint_distributes(self):
        lam = QUARTER
        lhs = evaluate("(t1*l1)'", 3, lam)
        rhs = evaluate("l1'*t1'", 3, lam)
        assert lhs == rhs

    def test_width_errors(self):
        with pytest.raises(ParameterError):
            evaluate("t1", 0, QUARTER)
        with pytest.raises(ParameterError):
            evaluate("p3", 2, QUARTER)
        with pytest.raises(ParameterError):
            evaluate("id3", 2, QUARTER)
        with pytest.raises(ParameterError):
            evaluate("t", 2, QUARTER)
        with pytest.raises(ParameterError):
            evaluate("g4", 3, QUARTER)


class TestEvaluateOperator:
    def test_abstract_zeros_vanish(self):
        pair = build_example_pair("iii", 4, 1, QUARTER)
        zeros = ("t1*t1 - t1", "r1*l1 - p1", "g2*p1", "t1*l1*t1 - 1/4*t1")
        for expr in zeros:
            mat = evaluate_operator(expr, 2, pair)
            assert np.linalg.norm(mat) < 1e-12, expr

    def test_matches_diagram_evaluation(self):
        pair = build_example_pair("iii", 4, 1, QUARTER)
        expr = "g2 - p1 + 1/2*t1 + l1'"
        element = evaluate(expr, 2, QUARTER)
        direct = evaluate_operator(expr, 2, pair)
        assert np.linalg.norm(evaluate_element(pair, element) - direct) < 1e-12

    def test_expectation_and_power(self):
        pair = build_example_pair("iii", 4, 1, QUARTER)
        mat = evaluate_operator("E(p3)", 2, pair)
        assert np.linalg.norm(mat - 0.25 * np.eye(16)) < 1e-12
        assert np.linalg.norm(evaluate_operator("t1^2 - t1", 2, pair)) < 1e-12


class TestRunCommand:
    def test_dims_csv(self, capsys):
        assert run_command(["dims", "--n", "4", "--kmax", "5"]) == 0
        assert capsys.readouterr().out == "1,3,8,21,55,144\n"
        assert run_command(["dims", "--n", "3", "--kmax", "6"]) == 0
        assert capsys.readouterr().out == "1,2,3,4,5,6,7\n"

    def test_dims_json(self, capsys):
        assert run_command(["dims", "--n", "4", "--kmax", "3", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data == {"dims": [1, 3, 8, 21], "n": 4}

    def test_basis_csv(self, capsys):
        assert run_command(["basis", "--k", "1", "--format", "csv"]) == 0
        assert capsys.readouterr().out == "-1,-1\n1,0\n"

    def test_basis_json_counts(self, capsys):
        assert run_command(["basis", "--k", "3"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["count"] == 51 and len(data["pairings"]) == 51

    def test_eval_exit_codes(self, capsys):
        assert run_command(["eval", "t1*t1 - t1", "--k", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["is_zero"] is True and data["terms"] == []
        assert run_command(["eval", "t1*(", "--k", "2"]) == 2
        assert "parse error" in capsys.readouterr().err
        assert run_command(["eval", "t5", "--k", "2"]) == 2
        assert "width" in capsys.readouterr().err

    def test_eval_terms_are_exact(self, capsys):
        assert run_command(["eval", "E(p3)", "--k", "2", "--lambda", "1/3"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["terms"] == [{"coeff": "1/3", "pairing": [2, 3, 0, 1]}]

    def test_eval_rep_mode(self, capsys):
        # Abstract zeros at the pair's lam stay zero through the operators.
        code = run_command(["eval", "t1*l1*t1 - 1/4*t1", "--k", "2", "--rep"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["is_zero"] is True and data["shape"] == [16, 16]
        assert data["norm"] < 1e-12
        # the same word against the wrong scalar stays visibly nonzero
        code = run_command(["eval", "t1*l1*t1 - 1/3*t1", "--k", "2", "--rep"])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["is_zero"] is False

    def test_presentation_and_jw(self, capsys):
        assert run_command(["presentation", "--k", "2", "--lambda", "1/3"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is True and data["checked"] == 6
        assert run_command(["jw", "--k", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is True and data["identity_coefficient"] == "1"

    def test_pair_round_trip(self, tmp_path, capsys):
        path = tmp_path / "pair.json"
        assert (
            run_command(
                [
                    "pair", "make", "--family", "i", "--n", "3",
                    "--lambda", "1/3", "--out", str(path),
                ]
            )
            == 0
        )
        assert run_command(["rep", "check", "--in", str(path), "--k", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is True and data["n"] == 3

    def test_rep_faithful(self, capsys):
        assert run_command(["rep", "faithful", "--k", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["span_dimension"] == 9 and data["rounds"] <= 8

    def test_fock_build(self, capsys):
        assert (
            run_command(
                ["fock", "build", "--levels", "4", "--family", "i", "--n", "3",
                 "--lambda", "1/3"]
            )
            == 0
        )
        data = json.loads(capsys.readouterr().out)
        assert data["dims"] == [1, 2, 3, 4, 5]
        assert data["ok"] is True

    def test_fock_toeplitz_tolerance_failure(self, capsys):
        # an absurd tolerance flips the check into a reported failure
        code = run_command(
            ["fock", "toeplitz", "--levels", "2", "--tol", "1e-20"]
        )
        assert code == 1
        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is False

    def test_matrix_units_csv(self, capsys):
        assert run_command(["fock", "matrix-units", "--kmax", "2"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "k,space_dim,rank,expected,measured"
        assert out[1:] == ["0,1,1,1,1", "1,3,3,9,9", "2,8,8,64,64"]

    def test_usage_errors_exit_two(self):
        with pytest.raises(SystemExit) as info:
            run_command(["no-such-command"])
        assert info.value.code == 2
        with pytest.raises(SystemExit) as info:
            run_command(["dims"])  # missing required --n
        assert info.value.code == 2

    def test_csv_not_available(self, capsys):
        code = run_command(["jw", "--k", "2", "--format", "csv"])
        assert code == 2
        assert "csv" in capsys.readouterr().err
