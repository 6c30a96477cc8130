import itertools

import pytest

import zoo
from errors import ConfluenceNotEstablished, DuplicateLhs, NotOrientable
from ncpoly import Alphabet, Poly
from rewrite import (ConfluenceStatus, RewriteRule, RewriteSystem, check_confluence, dim_upto, dims_by_weight,
                     normal_form, normal_words, orient)
from presentation import AlgebraHandle
from scalars import Domain

QQ = Domain.rational()


def xy():
    alphabet = Alphabet.from_names(["x", "y"])
    return alphabet, Poly.generator(0, QQ), Poly.generator(1, QQ)


def brute_force_normal_words(rs: RewriteSystem, n: int):
    """Enumerate every word of weight <= n and keep the irreducible ones."""
    alphabet = rs.alphabet
    found = []
    for length in range(n + 1):
        for word in itertools.product(range(len(alphabet)), repeat=length):
            if sum(alphabet.weights[i] for i in word) <= n and not rs.is_reducible(word):
                found.append(word)
    return sorted(found, key=alphabet.word_key)


def test_weyl_rule_and_normal_form():
    alphabet, x, y = xy()
    rs = orient([y * x - x * y - 1], alphabet)
    assert rs.rules[0].lhs == (1, 0)
    assert normal_form(y * x, rs) == x * y + 1
    assert normal_form(y * x * x, rs) == x * x * y + x.scale(2)


def test_weyl_is_confluent_with_no_skipped_overlaps():
    alphabet, x, y = xy()
    rs = orient([y * x - x * y - 1], alphabet)
    report = check_confluence(rs, 6)
    assert report.status is ConfluenceStatus.CONFLUENT
    assert report.complete
    assert [dim_upto(rs, n) for n in range(7)] == [(n + 1) * (n + 2) // 2 for n in range(7)]


def test_normal_words_match_brute_force():
    alphabet, x, y = xy()
    rs = orient([y * x - x * y - 1], alphabet)
    check_confluence(rs, 6)
    for n in range(6):
        assert normal_words(rs, n) == brute_force_normal_words(rs, n)
    assert dims_by_weight(rs, 3) == [1, 2, 3, 4]


def test_nonconfluent_overlap_witness():
    alphabet, x, y = xy()
    rs = orient([x * y - x, y * x - y], alphabet)
    report = check_confluence(rs, 6)
    assert report.status is ConfluenceStatus.NONCONFLUENT
    assert report.witness.kind == "suffix_prefix"
    assert report.witness.word == (0, 1, 0)
    assert report.witness.difference == x * x - x
    assert report.to_dict(alphabet)["witness"]["word"] == "x*y*x"


def test_bound_skips_heavy_overlaps():
    alphabet, x, y = xy()
    rs = orient([x * y - x, y * x - y], alphabet)
    report = check_confluence(rs, 2)
    assert report.confluent
    assert not report.complete
    assert rs.certified_for(2)
    assert not rs.certified_for(3)


def test_duplicate_lhs():
    alphabet, x, y = xy()
    with pytest.raises(DuplicateLhs):
        orient([y * x - x * y, y * x - x * y - 1], alphabet)


def test_constant_relation_is_not_orientable():
    alphabet, x, y = xy()
    with pytest.raises(NotOrientable):
        orient([Poly.one(QQ)], alphabet)


def test_rule_growing_in_order_is_rejected():
    alphabet, x, y = xy()
    with pytest.raises(NotOrientable):
        RewriteSystem(alphabet, QQ, [RewriteRule((0,), y)])


def test_unchecked_loop_is_reported_as_nonconfluent():
    alphabet, x, y = xy()
    rs = RewriteSystem.unchecked(alphabet, QQ, [RewriteRule((0,), y), RewriteRule((1,), x)])
    assert not rs.order_compatible
    report = check_confluence(rs, 4)
    assert report.status is ConfluenceStatus.NONCONFLUENT
    assert report.witness.kind == "nonterminating"


def test_dimensions_need_certification():
    alphabet, x, y = xy()
    rs = orient([y * x - x * y - 1], alphabet)
    with pytest.raises(ConfluenceNotEstablished):
        dim_upto(rs, 2)


def test_memoized_reduction_is_stable():
    alphabet, x, y = xy()
    rs = orient([y * x - x * y - 1], alphabet)
    first = rs.reduce_word((1, 1, 0, 0))
    assert rs.reduce_word((1, 1, 0, 0)) is first
    assert first == normal_form(y * y * x * x, rs)


CONFLUENT_FAMILIES = {
    "weyl": zoo.weyl_algebra,
    "jordan": lambda: zoo.gl2_family("jordan"),
    "quantum_plane": lambda: zoo.gl2_family("quantum_plane", q="zeta(3)"),
    "down_up": lambda: zoo.down_up(r="zeta(3)", s="zeta(3)^2", gamma=1),
    "pl11": zoo.pl11,
}


def random_poly(rng, handle, terms=3, max_length=3):
    letters = len(handle.alphabet)
    values = {}
    for _ in range(terms):
        word = tuple(rng.randrange(letters) for _ in range(rng.randint(0, max_length)))
        values[word] = handle.domain.coerce(rng.randint(-3, 3))
    return Poly(handle.domain, values)


@pytest.mark.parametrize("family", sorted(CONFLUENT_FAMILIES))
def test_normal_form_properties(rng, family):
    handle = AlgebraHandle(CONFLUENT_FAMILIES[family]())
    rs = handle.rewrite
    assert rs.certified_for(6)
    domain = handle.domain
    for _ in range(100):
        p, q = random_poly(rng, handle), random_poly(rng, handle)
        alpha, beta = domain.coerce(rng.randint(-3, 3)), domain.coerce(rng.randint(-3, 3))
        np_, nq = normal_form(p, rs), normal_form(q, rs)
        assert normal_form(np_, rs) == np_
        assert normal_form(p.scale(alpha) + q.scale(beta), rs) == np_.scale(alpha) + nq.scale(beta)
        assert normal_form(p * q, rs) == normal_form(np_ * nq, rs)
        assert all(not rs.is_reducible(word) for word in np_.words())


def test_negative_weight_bound_is_rejected():
    alphabet, x, y = xy()
    rs = orient([y * x - x * y - 1], alphabet)
    check_confluence(rs, 4)
    with pytest.raises(ValueError):
        dims_by_weight(rs, -1)
    with pytest.raises(ValueError):
        normal_words(rs, -1)
