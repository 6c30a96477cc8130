import functools

import pytest

import zoo
from action import (AutoMap, SkewPoly, generate_group, invariant_basis, invariant_series, is_small,
                    linear_determinant, mk_automorphism, parse_skew, reflections, reynolds, skew_mul, skew_one)
from errors import CapExceeded, FiltrationViolated, OrderNotInvertible, RelationNotPreserved, UnknownGenerator
from ncpoly import Poly
from presentation import AlgebraHandle
from scalars import Domain, mk_root_of_unity


def pl11_phi(handle, lam):
    return mk_automorphism(handle, {"x1": f"{lam}*x1", "x2": "-x2", "y1": "y2", "y2": f"{lam}*y1"}, name="phi")


@pytest.mark.parametrize("lam, domain, order", [("-1", None, 4), ("zeta(4)", Domain.cyclotomic(4), 8)])
def test_pl11_automorphism(lam, domain, order):
    handle = AlgebraHandle(zoo.pl11(domain))
    phi = pl11_phi(handle, lam)
    assert phi.verified
    assert phi.order == order
    group = generate_group([phi])
    assert group.order == order
    assert group.labels[:3] == ["e", "phi", "phi^2"]


def test_group_cap_is_enforced():
    handle = AlgebraHandle(zoo.pl11())
    with pytest.raises(CapExceeded):
        generate_group([pl11_phi(handle, "-1")], cap=3)


def test_broken_pl11_map_is_rejected():
    handle = AlgebraHandle(zoo.pl11())
    with pytest.raises(RelationNotPreserved) as info:
        mk_automorphism(handle, {"x1": "-x1", "x2": "x2", "y1": "y2", "y2": "-y1"})
    assert "normal_form" in info.value.context


def test_swap_does_not_preserve_the_quantum_plane():
    handle = AlgebraHandle(zoo.gl2_family("quantum_plane", q="zeta(3)"))
    with pytest.raises(RelationNotPreserved):
        mk_automorphism(handle, {"x": "y", "y": "x"})


def test_diagonal_map_preserves_the_quantum_plane():
    handle = AlgebraHandle(zoo.gl2_family("quantum_plane", q="zeta(3)"))
    phi = mk_automorphism(handle, {"x": "zeta(3)*x", "y": "zeta(3)^2*y"})
    assert phi.order == 3
    assert linear_determinant(phi) == 1


def test_image_weight_is_checked(polynomial):
    with pytest.raises(FiltrationViolated):
        mk_automorphism(polynomial, {"x": "x*x", "y": "y"})
    with pytest.raises(FiltrationViolated):
        mk_automorphism(polynomial, {"x": "x + 1", "y": "y"}, strict_grading=True)


def test_missing_images_are_reported(polynomial):
    with pytest.raises(UnknownGenerator) as info:
        mk_automorphism(polynomial, {"x": "y"})
    assert info.value.context["missing"] == ["y"]


def test_identity_and_composition(polynomial):
    identity = AutoMap.identity(polynomial)
    assert identity.order == 1
    assert identity.is_identity()
    neg = mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")
    assert neg.order == 2
    assert neg.compose(neg).is_identity()
    assert neg.apply(polynomial.parse("x*y + x")) == polynomial.parse("x*y - x")


def test_group_tables(polynomial):
    swap = mk_automorphism(polynomial, {"x": "y", "y": "x"}, name="swap")
    neg = mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")
    group = generate_group([swap, neg], name="K4")
    assert group.order == 4
    assert group.index_of("e") == 0
    assert group.index_of("id") == 0
    for i in range(group.order):
        assert group.mul(i, group.inverse[i]) == 0
        assert group.mul(i, i) == 0
    assert group.to_dict()["elements"] == group.labels
    with pytest.raises(UnknownGenerator):
        group.index_of("rot")


def test_empty_generator_list_gives_trivial_group(polynomial):
    group = generate_group([], handle=polynomial)
    assert group.order == 1
    assert group.labels == ["e"]


def test_skew_multiplication_rule(polynomial):
    neg = mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")
    group = generate_group([neg])
    g = group.index_of("neg")
    x = (0,)
    product = skew_mul(SkewPoly.monomial(group, x, g), SkewPoly.monomial(group, x, 0))
    assert product == SkewPoly.monomial(group, (0, 0), g, -1)
    assert skew_one(group) * product == product
    assert product.to_string() == "-x^2 # neg"
    assert SkewPoly.zero(group).to_string() == "0 # e"


def test_skew_multiplication_is_associative(quantum_weyl_q3, rng):
    phi = mk_automorphism(quantum_weyl_q3, {"x": "zeta(3)*x", "y": "zeta(3)^2*y"}, name="phi")
    group = generate_group([phi])
    words = quantum_weyl_q3.normal_words(2)
    z = mk_root_of_unity(3)

    def sample():
        terms = {}
        for _ in range(3):
            coeff = z ** rng.randrange(3) * rng.randint(-3, 3)
            terms[(rng.choice(words), rng.randrange(group.order))] = coeff
        return SkewPoly(group, terms)

    one = skew_one(group)
    for _ in range(300):
        a, b, c = sample(), sample(), sample()
        assert skew_mul(skew_mul(a, b), c) == skew_mul(a, skew_mul(b, c))
        assert skew_mul(one, a) == a
        assert skew_mul(a, one) == a


def test_parse_skew(polynomial):
    neg = mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")
    group = generate_group([neg])
    parsed = parse_skew("x*y # neg ; 2 # e", group)
    expected = SkewPoly.monomial(group, (0, 1), 1) + SkewPoly.monomial(group, (), 0, 2)
    assert parsed == expected
    assert parse_skew("y*x", group) == SkewPoly.monomial(group, (0, 1), 0)


def test_reynolds_and_invariants(polynomial):
    neg = mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")
    group = generate_group([neg])
    assert reynolds(group, polynomial.parse("x")).is_zero()
    assert reynolds(group, polynomial.parse("x*y + y")) == polynomial.parse("x*y")
    assert invariant_series(group, 4) == [1, 0, 3, 0, 5]
    assert len(invariant_basis(group, 2)) == 4


def test_reynolds_needs_invertible_order():
    handle = AlgebraHandle(zoo.polynomial_ring(["x", "y"], domain=Domain.prime_field(2)))
    swap = mk_automorphism(handle, {"x": "y", "y": "x"}, name="swap")
    group = generate_group([swap])
    assert not group.order_invertible
    with pytest.raises(OrderNotInvertible):
        reynolds(group, handle.parse("x"))


def test_reflections_and_smallness(polynomial):
    neg = generate_group([mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")])
    refl = generate_group([mk_automorphism(polynomial, {"x": "x", "y": "-y"}, name="refl")])
    assert reflections(neg) == []
    assert is_small(neg)
    assert reflections(refl) == ["refl"]
    assert not is_small(refl)


@functools.lru_cache(maxsize=None)
def fixture_groups():
    """Groups acting on the fixture algebras, keyed by a short name."""
    polynomial = AlgebraHandle(zoo.polynomial_ring(["x", "y"]))
    swap = mk_automorphism(polynomial, {"x": "y", "y": "x"}, name="swap")
    neg = mk_automorphism(polynomial, {"x": "-x", "y": "-y"}, name="neg")
    plane8 = AlgebraHandle(zoo.polynomial_ring(["x", "y"], domain=Domain.cyclotomic(8)))
    rot = mk_automorphism(plane8, {"x": "zeta(8)*x", "y": "zeta(8)^7*y"}, name="rot")
    flip = mk_automorphism(plane8, {"x": "y", "y": "x"}, name="flip")
    qweyl = AlgebraHandle(zoo.gl2_family("quantum_weyl", q="zeta(3)"))
    diag = mk_automorphism(qweyl, {"x": "zeta(3)*x", "y": "zeta(3)^2*y"}, name="phi")
    pl11 = AlgebraHandle(zoo.pl11(Domain.cyclotomic(4)))
    return {
        "klein": generate_group([swap, neg]),
        "dihedral_16": generate_group([rot, flip]),
        "quantum_weyl_c3": generate_group([diag]),
        "pl11_c8": generate_group([pl11_phi(pl11, "zeta(4)")]),
    }


GROUP_NAMES = ["dihedral_16", "klein", "pl11_c8", "quantum_weyl_c3"]


def random_poly(rng, handle, terms=3, max_length=3):
    letters = len(handle.alphabet)
    values = {}
    for _ in range(terms):
        word = tuple(rng.randrange(letters) for _ in range(rng.randint(0, max_length)))
        values[word] = handle.domain.coerce(rng.randint(-3, 3))
    return Poly(handle.domain, values)


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_group_axioms_hold_exhaustively(name):
    group = fixture_groups()[name]
    n = group.order
    assert n <= 16
    for a in range(n):
        assert group.mul(0, a) == a
        assert group.mul(a, 0) == a
        assert group.mul(a, group.inverse[a]) == 0
        assert group.mul(group.inverse[a], a) == 0
        for b in range(n):
            assert group.elements[group.mul(a, b)].key == group.elements[a].compose(group.elements[b]).key
            for c in range(n):
                assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))
    assert len({g.key for g in group.elements}) == n


def test_dihedral_group_has_order_sixteen():
    assert fixture_groups()["dihedral_16"].order == 16
    assert fixture_groups()["pl11_c8"].order == 8


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_automorphisms_are_multiplicative_and_commute_with_reduction(rng, name):
    group = fixture_groups()[name]
    handle = group.handle
    for phi in group.elements[1:3]:
        for _ in range(30):
            p, q = random_poly(rng, handle), random_poly(rng, handle)
            assert phi.apply(p * q) == handle.multiply(phi.apply(p), phi.apply(q))
            assert phi.apply(handle.normal_form(p)) == handle.normal_form(phi.apply(p))


@pytest.mark.parametrize("name", GROUP_NAMES)
def test_reynolds_is_an_invariant_projection(rng, name):
    group = fixture_groups()[name]
    handle = group.handle
    for _ in range(20):
        average = reynolds(group, random_poly(rng, handle, max_length=2))
        assert reynolds(group, average) == average
        for g in group.elements:
            assert g.apply(average) == average
