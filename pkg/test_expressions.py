import pytest

from errors import ParseError, UnknownGenerator
from expressions import parse_poly, parse_scalar, tokenize
from ncpoly import Alphabet, Poly
from scalars import Domain, Scalar, mk_root_of_unity

QQ = Domain.rational()
Q3 = Domain.cyclotomic(3)


def test_tokenize_reports_columns():
    tokens = tokenize("x*y - 2")
    assert [t.text for t in tokens[:-1]] == ["x", "*", "y", "-", "2"]
    assert tokens[2].col == 3
    assert tokens[-1].kind == "end"


def test_quantum_plane_relation():
    alphabet = Alphabet.from_names(["x", "y"])
    p = parse_poly("x*y - zeta(3)*y*x", alphabet, Q3)
    x, y = Poly.generator(0, Q3), Poly.generator(1, Q3)
    assert p == x * y - (y * x).scale(mk_root_of_unity(3))


def test_powers_parentheses_and_fractions():
    alphabet = Alphabet.from_names(["x", "y"])
    p = parse_poly("(x + 1)^2 - 1/2*y", alphabet, QQ)
    x, y = Poly.generator(0, QQ), Poly.generator(1, QQ)
    assert p == x * x + x.scale(2) + 1 - y.scale(Scalar.rational(1, 2))


def test_scalar_literals():
    z = mk_root_of_unity(3)
    assert parse_scalar("zeta(3)^2", Q3) == z * z
    assert parse_scalar("-3/2", QQ) == Scalar.rational(-3, 2)
    assert parse_scalar("1 + zeta(3)", Q3) == z + 1
    assert parse_scalar("zeta(3)", Domain.prime_field(7)) == 2


def test_string_form_parses_back():
    alphabet = Alphabet.from_names(["x", "y"])
    z = mk_root_of_unity(3)
    x, y = Poly.generator(0, Q3), Poly.generator(1, Q3)
    p = (y * x).scale(z * z) - x.scale(Scalar.rational(1, 3).lift(Q3)) + 2
    assert parse_poly(p.to_string(alphabet), alphabet, Q3) == p


def test_unknown_generator_has_location():
    alphabet = Alphabet.from_names(["x", "y"])
    with pytest.raises(UnknownGenerator) as info:
        parse_poly("x*y - z", alphabet, QQ, line=4)
    assert info.value.context["line"] == 4
    assert info.value.context["col"] == 7


def test_parse_errors_carry_line_and_column():
    alphabet = Alphabet.from_names(["x"])
    with pytest.raises(ParseError) as info:
        parse_poly("x * * x", alphabet, QQ, line=2)
    assert info.value.line == 2
    assert info.value.col == 5
    with pytest.raises(ParseError):
        parse_poly("x + 1/0", alphabet, QQ)
    with pytest.raises(ParseError):
        parse_poly("x $ 1", alphabet, QQ)


def test_zeta_outside_domain_is_a_parse_error():
    alphabet = Alphabet.from_names(["x"])
    with pytest.raises(ParseError):
        parse_poly("zeta(3)*x", alphabet, QQ)
