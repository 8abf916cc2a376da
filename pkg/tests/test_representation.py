"""Tests for the Motzkin-pair operator layer."""

from fractions import Fraction

import numpy as np
import pytest

from motzkin.diagram_core import (
    Element,
    MotzkinDiagram,
    adjoint,
    conditional_expectation,
    enumerate_basis,
    generator as diagram_generator,
    motzkin_number,
)
from motzkin.errors import (
    LimitError,
    ParameterError,
    UnsupportedDiagramError,
)
from motzkin.jones_wenzl import jones_wenzl
from motzkin.representation import (
    MotzkinPair,
    build_example_pair,
    evaluate_diagram,
    evaluate_element,
    evaluate_word,
    generator_operator,
    l_matrix,
    p_matrix,
    rep_conditional_expectation,
    relation_residuals,
    span_dimension,
    t_matrix,
    validate_pair,
)

QUARTER = Fraction(1, 4)
THIRD = Fraction(1, 3)


def _pair4():
    return build_example_pair("iii", 4, 1, QUARTER)


def _pair3():
    return build_example_pair("i", 3, 0, THIRD)


PAIRS = [_pair4(), _pair3()]


class TestExamplePairs:
    def test_frozen_values(self):
        p4 = _pair4()
        assert np.allclose(p4.a, 0.5)
        assert np.allclose(p4.b, [2**-0.5, 0.0, 0.0, 2**-0.5])
        p3 = _pair3()
        assert np.allclose(p3.a, 3**-0.5)
        assert np.allclose(p3.b, [0.0, 1.0, 0.0])

    def test_families_validate(self):
        cases = [
            ("i", 3, 0, THIRD),
            ("i", 5, 0, Fraction(1, 5)),
            ("ii", 4, 1, Fraction(1, 5)),
            ("iii", 4, 1, QUARTER),
            ("iii", 6, 2, Fraction(1, 6)),
            ("iii", 4, 2, QUARTER),
            ("iii", 5, 1, Fraction(1, 5)),
        ]
        for family, n, r, lam in cases:
            pair = build_example_pair(family, n, r, lam)
            report = validate_pair(pair)
            assert report.ok, (family, n, r, lam, report)

    def test_bad_parameters(self):
        with pytest.raises(ParameterError):
            build_example_pair("i", 4, 0, QUARTER)  # family i needs odd n
        with pytest.raises(ParameterError):
            build_example_pair("iii", 4, 3, QUARTER)  # r too large
        with pytest.raises(ParameterError):
            build_example_pair("iii", 4, 2, Fraction(1, 5))  # moduli cannot sum to 1
        with pytest.raises(ParameterError):
            build_example_pair("x", 4, 1, QUARTER)
        with pytest.raises(ParameterError):
            MotzkinPair(n=3, lam=Fraction(2, 5), a=np.ones(3), b=np.ones(3))

    def test_derived_reverse_vector(self):
        # sum_i a_i conj(b_ibar) v_i is proportional to v with modulus sqrt(lam).
        for pair in PAIRS:
            w = pair.a * pair.b[::-1].conj()
            c = np.vdot(pair.b, w)  # <w, b> with b unit
            assert abs(abs(c) - float(pair.lam) ** 0.5) < 1e-12
            assert np.linalg.norm(w - c * pair.b) < 1e-12

    def test_json_round_trip(self):
        pair = _pair4()
        data = pair.to_json_dict()
        back = MotzkinPair.from_json_dict(data)
        assert back.n == pair.n and back.lam == pair.lam
        assert np.allclose(back.a, pair.a) and np.allclose(back.b, pair.b)


class TestGeneratorOperators:
    def test_p_t_are_projections(self):
        for pair in PAIRS:
            P = p_matrix(pair)
            T = t_matrix(pair)
            assert np.linalg.norm(P @ P - P) < 1e-14
            assert np.linalg.norm(P - P.conj().T) < 1e-14
            assert np.linalg.norm(T @ T - T) < 1e-14
            assert np.linalg.norm(T - T.conj().T) < 1e-14

    def test_t_compression_identity(self):
        # (1 (x) P) t (1 (x) P) = lam (P (x) P)
        for pair in PAIRS:
            n = pair.n
            P = p_matrix(pair)
            T = t_matrix(pair)
            IP = np.kron(np.eye(n), P)
            lhs = IP @ T @ IP
            rhs = float(pair.lam) * np.kron(P, P)
            assert np.linalg.norm(lhs - rhs) < 1e-12

    def test_zigzag(self):
        for pair in PAIRS:
            n = pair.n
            vA2 = pair.vA().reshape(n, n)
            M = np.einsum("ml,jm->lj", vA2, vA2.conj())
            assert np.linalg.norm(M - float(pair.lam) * np.eye(n)) < 1e-12

    def test_l_structure(self):
        for pair in PAIRS:
            n = pair.n
            L = l_matrix(pair)
            Lr = L.reshape(n, n, n, n)
            P = p_matrix(pair)
            for j in range(n):
                assert np.allclose(Lr[j, :, :, j], P)
            R = generator_operator(pair, 2, "r", 1)
            assert np.allclose(R, L.conj().T)

    def test_exact_generator_identities(self):
        for pair in PAIRS:
            for k in (2, 3):
                for i in range(1, k):
                    l = generator_operator(pair, k, "l", i)
                    r = generator_operator(pair, k, "r", i)
                    p = generator_operator(pair, k, "p", i)
                    p_next = generator_operator(pair, k, "p", i + 1)
                    assert np.linalg.norm(r @ l - p) < 1e-12
                    assert np.linalg.norm(l @ l.conj().T - p_next) < 1e-12

    def test_dimension_guard(self):
        pair = _pair4()
        with pytest.raises(LimitError):
            generator_operator(pair, 7, "p", 1)


class TestRelations:
    def test_residuals_small(self):
        for pair in PAIRS:
            for k in (2, 3):
                res = relation_residuals(pair, k)
                assert res, "no relations checked"
                worst = max(res.values())
                assert worst < 1e-10, (pair.n, k, worst)


class TestDiagramEvaluation:
    def test_generators_match(self):
        for pair in PAIRS:
            for k in (2, 3):
                for name in ("l", "r", "t", "p"):
                    hi = k if name == "p" else k - 1
                    for i in range(1, hi + 1):
                        d = diagram_generator(k, name, i, lam=pair.lam)
                        assert (
                            np.linalg.norm(
                                evaluate_element(pair, d)
                                - generator_operator(pair, k, name, i)
                            )
                            < 1e-12
                        )

    def test_word_products_match_linear_extension(self):
        words = [
            ["t1", "l1"],
            ["l1", "l2"],
            ["t1", "t2", "t1"],
            ["r1", "l1", "p2"],
            ["l2", "r1", "t2"],
            ["p1", "t2", "l1'"],
        ]
        for pair in PAIRS:
            k = 3
            for word in words:
                mat = evaluate_word(pair, k, word)
                elem = Element.from_diagram(
                    MotzkinDiagram(tuple(range(k, 2 * k)) + tuple(range(k))),
                    pair.lam,
                )
                for token in word:
                    name = token.rstrip("'0123456789")
                    idx = int(token.rstrip("'")[len(name):])
                    g = diagram_generator(k, name, idx, lam=pair.lam)
                    if token.endswith("'"):
                        g = adjoint(g)
                    elem = elem * g
                lin = evaluate_element(pair, elem)
                assert np.linalg.norm(mat - lin) < 1e-10, (pair.n, word)

    def test_triple_nesting_rejected(self):
        pair = _pair3()
        # width 6: top arcs (0,5),(1,4),(2,3) - the innermost arc sits under
        # two others, which the strand feature map does not cover.
        pairing = [5, 4, 3, 2, 1, 0] + [-1] * 6
        with pytest.raises(UnsupportedDiagramError):
            evaluate_diagram(pair, MotzkinDiagram(pairing))

    def test_single_nesting_supported(self):
        pair = _pair3()
        pairing = [5, 4, -1, -1, 1, 0] + [-1] * 6
        mat = evaluate_diagram(pair, MotzkinDiagram(pairing))
        assert mat.shape == (729, 729)
        assert np.isfinite(mat).all()

    def test_depth_one_supported(self):
        pair = _pair4()
        # width 4: nested arcs (0,3),(1,2) on both rows: depth one only.
        d = MotzkinDiagram([3, 2, 1, 0, 7, 6, 5, 4])
        mat = evaluate_diagram(pair, d)
        assert mat.shape == (256, 256)
        assert np.isfinite(mat).all()


class TestSpanDimension:
    def test_width_two(self):
        for pair in PAIRS:
            dim, rounds = span_dimension(pair, 2)
            assert dim == motzkin_number(4) == 9
            assert rounds <= 8


class TestRepConditionalExpectation:
    def test_unit_and_p(self):
        for pair in PAIRS:
            for k in (0, 1, 2):
                n = pair.n
                X = np.eye(n ** (k + 1), dtype=complex)
                assert (
                    np.linalg.norm(
                        rep_conditional_expectation(pair, X) - np.eye(n**k)
                    )
                    < 1e-10
                )
                Xp = generator_operator(pair, k + 1, "p", k + 1)
                assert (
                    np.linalg.norm(
                        rep_conditional_expectation(pair, Xp)
                        - float(pair.lam) * np.eye(n**k)
                    )
                    < 1e-10
                )

    def test_matches_diagram_expectation(self):
        for pair in PAIRS:
            for k in (1, 2):
                for d in enumerate_basis(k + 1)[::3]:
                    x = Element.from_diagram(d, pair.lam)
                    lhs = rep_conditional_expectation(
                        pair, evaluate_element(pair, x)
                    )
                    rhs = evaluate_element(pair, conditional_expectation(x))
                    assert np.linalg.norm(lhs - rhs) < 1e-9, (pair.n, d.pairing)

    def test_jones_wenzl_expectation(self):
        # E must contract the evaluated tower with the exact coefficient.
        for pair in PAIRS:
            for k in (1, 2):
                g_next = evaluate_element(pair, jones_wenzl(k + 1, pair.lam))
                g = evaluate_element(pair, jones_wenzl(k, pair.lam))
                from motzkin.qpoly import PhiFunction

                mu = 1 / PhiFunction(pair.lam)(k + 1)
                lhs = rep_conditional_expectation(pair, g_next)
                assert np.linalg.norm(lhs - float(mu) * g) < 1e-9
