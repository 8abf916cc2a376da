"""Tests for the exact diagram calculus."""

from fractions import Fraction

import pytest

from motzkin import (
    Element,
    MotzkinDiagram,
    ParameterError,
    adjoint,
    check_presentation,
    conditional_expectation,
    embed,
    enumerate_basis,
    generator,
    identity,
    juxtapose,
    motzkin_number,
    multiply,
    reflect,
)

LAM = Fraction(1, 3)


def _brute_force_pairings(k):
    """Independent enumeration: every partial matching of the 2k boundary
    points, filtered by the interleaving criterion in cyclic order."""
    order = list(range(k)) + list(range(2 * k - 1, k - 1, -1))
    slot = {p: s for s, p in enumerate(order)}

    def all_matchings(points):
        if not points:
            yield []
            return
        x = points[0]
        rest = points[1:]
        for m in all_matchings(rest):
            yield m
        for idx, y in enumerate(rest):
            for m in all_matchings(rest[:idx] + rest[idx + 1:]):
                yield m + [(x, y)]

    found = set()
    for m in all_matchings(list(range(2 * k))):
        spans = sorted((min(slot[a], slot[b]), max(slot[a], slot[b])) for a, b in m)
        crossing = any(
            a < c < b < d
            for i, (a, b) in enumerate(spans)
            for (c, d) in spans[i + 1:]
        )
        if crossing:
            continue
        arr = [-1] * (2 * k)
        for a, b in m:
            arr[a], arr[b] = b, a
        found.add(tuple(arr))
    return found


def test_motzkin_numbers():
    assert [motzkin_number(m) for m in range(11)] == [
        1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188,
    ]


def test_enumerate_counts():
    for k, expected in [(0, 1), (1, 2), (2, 9), (3, 51), (4, 323), (5, 2188)]:
        basis = enumerate_basis(k)
        assert len(basis) == expected
        assert len({d.pairing for d in basis}) == expected


def test_enumerate_matches_brute_force():
    for k in range(5):
        assert {d.pairing for d in enumerate_basis(k)} == _brute_force_pairings(k)


def test_enumerate_sorted_and_valid():
    for k in (2, 3):
        basis = enumerate_basis(k)
        pairings = [d.pairing for d in basis]
        assert pairings == sorted(pairings)
        for d in basis:
            MotzkinDiagram(d.pairing)  # re-validates involution + planarity


def test_crossing_rejected():
    # Top points 0,1 each strand to the "wrong" bottom point: crossing.
    with pytest.raises(ParameterError):
        MotzkinDiagram([3, 2, 1, 0])
    # Not an involution.
    with pytest.raises(ParameterError):
        MotzkinDiagram([1, 0, 3, 3])


def test_nested_cup_is_planar():
    # Top arcs (0,3),(1,2) with bottom arcs (0,3),(1,2): valid nesting.
    d = MotzkinDiagram([3, 2, 1, 0, 7, 6, 5, 4])
    assert d.width == 4


def _gen(k, name, i):
    return generator(k, name, i, lam=LAM)


class TestGeneratorDiagrams:
    def test_l_shape(self):
        l1 = _gen(2, "l", 1)
        (d, c), = l1.terms.items()
        assert c == 1
        assert d.pairing == (3, -1, -1, 0)

    def test_r_is_adjoint_of_l(self):
        for k in (2, 3, 4):
            for i in range(1, k):
                assert _gen(k, "r", i) == adjoint(_gen(k, "l", i))

    def test_t_carries_lam(self):
        t1 = _gen(2, "t", 1)
        (d, c), = t1.terms.items()
        assert c == LAM
        assert d.pairing == (1, 0, 3, 2)

    def test_p_shape(self):
        p2 = _gen(3, "p", 2)
        (d, c), = p2.terms.items()
        assert d.pairing == (3, -1, 5, 0, -1, 2)

    def test_index_ranges(self):
        with pytest.raises(ParameterError):
            _gen(2, "l", 2)
        with pytest.raises(ParameterError):
            _gen(2, "p", 3)
        with pytest.raises(ParameterError):
            _gen(2, "t", 0)


class TestProducts:
    def test_loop_factor(self):
        # The bare cup-cap u = t/lam squares to delta * u.
        u = _gen(2, "t", 1).scale(1 / LAM)
        delta = 1 / LAM
        assert u * u == u.scale(delta)

    def test_structure_identities(self):
        for k in (2, 3, 4):
            for i in range(1, k):
                l = _gen(k, "l", i)
                assert _gen(k, "r", i) * l == _gen(k, "p", i)
                assert l * adjoint(l) == _gen(k, "p", i + 1)

    def test_dead_strand_has_coefficient_one(self):
        # p1 * l1 kills both strands of l1 without any loop factor: the
        # through strand dies on p1's isolated bottom point and the vertical
        # of p1 dies on l1's isolated top point.
        k = 2
        prod = _gen(k, "p", 1) * _gen(k, "l", 1)
        (d, c), = prod.terms.items()
        assert c == 1
        assert d.pairing == (-1, -1, -1, -1)

    def test_identity_neutral(self):
        one = identity(3, lam=LAM)
        for d in enumerate_basis(3):
            x = Element.from_diagram(d, LAM)
            assert one * x == x
            assert x * one == x

    def test_associativity_sampled(self):
        basis = enumerate_basis(2)
        for a in basis:
            for b in basis[::2]:
                for c in basis[::3]:
                    xa = Element.from_diagram(a, LAM)
                    xb = Element.from_diagram(b, LAM)
                    xc = Element.from_diagram(c, LAM)
                    assert (xa * xb) * xc == xa * (xb * xc)

    def test_adjoint_antihomomorphism(self):
        basis = enumerate_basis(3)
        for a in basis[::5]:
            for b in basis[::7]:
                xa = Element.from_diagram(a, LAM)
                xb = Element.from_diagram(b, LAM)
                assert adjoint(xa * xb) == adjoint(xb) * adjoint(xa)
                assert adjoint(adjoint(xa)) == xa


class TestStructureMaps:
    def test_embed_is_homomorphism(self):
        basis = enumerate_basis(2)
        for a in basis[::2]:
            for b in basis[::3]:
                xa = Element.from_diagram(a, LAM)
                xb = Element.from_diagram(b, LAM)
                assert embed(xa * xb) == embed(xa) * embed(xb)

    def test_embed_identity(self):
        assert embed(identity(2, lam=LAM), 2) == identity(4, lam=LAM)

    def test_juxtapose_with_identity_is_embed(self):
        for d in enumerate_basis(2)[::4]:
            x = Element.from_diagram(d, LAM)
            assert juxtapose(x, identity(1, lam=LAM)) == embed(x)

    def test_juxtapose_shifts_generators(self):
        assert juxtapose(identity(1, lam=LAM), _gen(2, "t", 1)) == _gen(3, "t", 2)
        assert juxtapose(identity(2, lam=LAM), _gen(2, "l", 1)) == _gen(4, "l", 3)

    def test_reflect_involution_and_homomorphism(self):
        # The left-right mirror preserves the stacking order, so it is an
        # algebra automorphism (of order two).
        basis = enumerate_basis(2)
        for a in basis:
            x = Element.from_diagram(a, LAM)
            assert reflect(reflect(x)) == x
        for a in basis[::2]:
            for b in basis[::3]:
                xa = Element.from_diagram(a, LAM)
                xb = Element.from_diagram(b, LAM)
                assert reflect(xa * xb) == reflect(xa) * reflect(xb)

    def test_reflect_generators(self):
        assert reflect(_gen(3, "t", 1)) == _gen(3, "t", 2)
        assert reflect(_gen(3, "p", 1)) == _gen(3, "p", 3)


class TestConditionalExpectation:
    def test_identity_and_p(self):
        for k in (1, 2, 3, 4):
            assert conditional_expectation(identity(k, lam=LAM)) == identity(
                k - 1, lam=LAM
            )
            assert conditional_expectation(_gen(k, "p", k)) == identity(
                k - 1, lam=LAM
            ).scale(LAM)

    def test_g1(self):
        g1 = identity(1, lam=LAM) - _gen(1, "p", 1)
        assert conditional_expectation(g1) == identity(0, lam=LAM).scale(1 - LAM)

    def test_linear(self):
        basis = enumerate_basis(2)
        xa = Element.from_diagram(basis[3], LAM)
        xb = Element.from_diagram(basis[7], LAM)
        lhs = conditional_expectation(xa + xb.scale(Fraction(2, 5)))
        rhs = conditional_expectation(xa) + conditional_expectation(xb).scale(
            Fraction(2, 5)
        )
        assert lhs == rhs

    def test_module_property_sampled(self):
        # E(embed(a) * x * embed(b)) == a * E(x) * b
        lam = Fraction(1, 4)
        small = enumerate_basis(1)
        big = enumerate_basis(2)
        for da in small:
            for db in small:
                for dx in big[::4]:
                    a = Element.from_diagram(da, lam)
                    b = Element.from_diagram(db, lam)
                    x = Element.from_diagram(dx, lam)
                    lhs = conditional_expectation(embed(a) * x * embed(b))
                    rhs = a * conditional_expectation(x) * b
                    assert lhs == rhs

    def test_commutes_with_adjoint(self):
        for d in enumerate_basis(3)[::6]:
            x = Element.from_diagram(d, LAM)
            assert conditional_expectation(adjoint(x)) == adjoint(
                conditional_expectation(x)
            )


def test_presentation_exact():
    for k in (2, 3, 4):
        for lam in (Fraction(1, 3), Fraction(1, 4)):
            report = check_presentation(k, lam)
            assert report.ok, report.failures
            assert report.checked > 0


def test_presentation_counts_grow():
    c2 = check_presentation(2, LAM).checked
    c4 = check_presentation(4, LAM).checked
    assert c2 < c4


def test_multiply_function_alias():
    x = _gen(2, "t", 1)
    assert multiply(x, x) == x * x


def test_incompatible_elements_rejected():
    with pytest.raises(ParameterError):
        identity(2, lam=LAM) * identity(3, lam=LAM)
    with pytest.raises(ParameterError):
        identity(2, lam=LAM) + identity(2, lam=Fraction(1, 4))


def test_serialization_round_trip():
    x = _gen(3, "t", 1) * _gen(3, "l", 2) - identity(3, lam=LAM).scale(
        Fraction(2, 7)
    )
    data = x.to_json_dict()
    assert data["lambda"] == "1/3"
    y = Element.from_json_dict(data)
    assert y == x
