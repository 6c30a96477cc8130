import pytest

from errors import DomainMismatch, UnknownGenerator
from ncpoly import Alphabet, GeneratorInfo, Poly, free_mul, word_weight
from scalars import Domain, mk_root_of_unity

QQ = Domain.rational()


def xy_alphabet(precedence=None):
    return Alphabet.from_names(["x", "y"], precedence=precedence)


def test_word_key_orders_by_weight_then_length_then_precedence():
    alphabet = Alphabet([GeneratorInfo("x", 1, 0, 0), GeneratorInfo("y", 2, 0, 1)])
    assert alphabet.word_key((1,)) > alphabet.word_key((0,))
    assert alphabet.word_key((0, 0)) < alphabet.word_key((1,))
    assert alphabet.word_key((1, 0)) > alphabet.word_key((0, 1))
    assert word_weight((0, 1, 1), alphabet) == 5


def test_precedence_overrides_declaration_order():
    alphabet = xy_alphabet(precedence=["y", "x"])
    assert alphabet.precedence_names() == ["y", "x"]
    assert alphabet.word_key((0, 1)) > alphabet.word_key((1, 0))


def test_alphabet_rejects_duplicates_and_unknown_names():
    with pytest.raises(ValueError):
        Alphabet.from_names(["x", "x"])
    with pytest.raises(UnknownGenerator):
        xy_alphabet().index("z")


def test_format_and_parse_word():
    alphabet = xy_alphabet()
    assert alphabet.format_word((0, 0, 1)) == "x^2*y"
    assert alphabet.format_word(()) == "1"
    assert alphabet.parse_word("x^2*y") == (0, 0, 1)
    assert alphabet.parse_word("1") == ()


def test_free_multiplication_concatenates():
    x, y = Poly.generator(0, QQ), Poly.generator(1, QQ)
    product = (x + y) * (x - y)
    assert product == Poly(QQ, {(0, 0): 1, (0, 1): -1, (1, 0): 1, (1, 1): -1})
    assert (x * y - y * x) != 0
    assert (x + 1) ** 2 == x * x + x.scale(2) + 1


def test_zero_coefficients_are_dropped():
    x = Poly.generator(0, QQ)
    assert (x - x).is_zero()
    assert Poly(QQ, {(0,): 0}).is_zero()
    assert Poly.zero(QQ).max_weight(xy_alphabet()) == -1


def test_leading_word_and_top_component():
    alphabet = xy_alphabet()
    x, y = Poly.generator(0, QQ), Poly.generator(1, QQ)
    p = y * x - x * y - 1
    assert p.leading_word(alphabet) == (1, 0)
    assert p.top_component(alphabet) == y * x - x * y
    assert p.max_weight(alphabet) == 2


def test_domains_do_not_mix():
    z = mk_root_of_unity(3)
    x3 = Poly.generator(0, z.domain)
    with pytest.raises(DomainMismatch):
        x3 + Poly.generator(0, QQ)


def test_substitute_in_free_algebra():
    x, y = Poly.generator(0, QQ), Poly.generator(1, QQ)
    p = x * y
    assert p.substitute([y, x]) == y * x
    assert p.substitute([x + 1, y]) == x * y + y


def test_to_string_largest_monomial_first():
    alphabet = xy_alphabet()
    x, y = Poly.generator(0, QQ), Poly.generator(1, QQ)
    assert (y * x - x * y - 1).to_string(alphabet) == "y*x - x*y - 1"
    z = mk_root_of_unity(3)
    d = z.domain
    xz, yz = Poly.generator(0, d), Poly.generator(1, d)
    assert (xz * yz - (yz * xz).scale(z)).to_string(alphabet) == "-zeta(3)*y*x + x*y"


def test_parity_homogeneity():
    alphabet = Alphabet.from_names(["x", "y"], parities=[0, 1])
    x, y = Poly.generator(0, QQ), Poly.generator(1, QQ)
    assert (y * y - x).is_parity_homogeneous(alphabet)
    assert not (x + y).is_parity_homogeneous(alphabet)
    assert (x * y).parity(alphabet) == 1


MIXED = Alphabet([GeneratorInfo("x", 1, 0, 0), GeneratorInfo("y", 2, 0, 1), GeneratorInfo("g", 0, 0, 2)])


def random_word(rng, max_length=3):
    return tuple(rng.randrange(len(MIXED)) for _ in range(rng.randint(0, max_length)))


def random_poly(rng, terms=3):
    return Poly(QQ, {random_word(rng): rng.randint(-4, 4) for _ in range(terms)})


def test_free_mul_is_associative_and_distributive(rng):
    for _ in range(1000):
        p, q, r = random_poly(rng), random_poly(rng), random_poly(rng)
        assert free_mul(free_mul(p, q), r) == free_mul(p, free_mul(q, r))
        assert free_mul(p, q + r) == free_mul(p, q) + free_mul(p, r)
        assert free_mul(p + q, r) == free_mul(p, r) + free_mul(q, r)


def test_weight_is_additive_on_concatenation(rng):
    for _ in range(500):
        u, v = random_word(rng), random_word(rng)
        assert word_weight(u + v, MIXED) == word_weight(u, MIXED) + word_weight(v, MIXED)


def test_monomial_order_is_compatible_with_multiplication(rng):
    for _ in range(1000):
        u, v, w = random_word(rng), random_word(rng), random_word(rng)
        if u == v:
            assert MIXED.word_key(u) == MIXED.word_key(v)
            continue
        if MIXED.word_key(u) > MIXED.word_key(v):
            u, v = v, u
        assert MIXED.word_key(u) < MIXED.word_key(v)
        assert MIXED.word_key(w + u) < MIXED.word_key(w + v)
        assert MIXED.word_key(u + w) < MIXED.word_key(v + w)
