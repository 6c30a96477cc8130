import itertools

import pytest

import zoo
from errors import AxiomViolation, BetaZero, InvalidQMatrix, NotADerivation, RootsInconsistent, SuperTensorUnsupported
from presentation import AlgebraHandle
from scalars import Domain

QQ = Domain.rational()


def fixture_presentations():
    return {
        "weyl": zoo.weyl_algebra(),
        "quantum_plane": zoo.gl2_family("quantum_plane", q="zeta(3)"),
        "jordan": zoo.gl2_family("jordan"),
        "quantum_weyl": zoo.gl2_family("quantum_weyl", q="zeta(3)"),
        "deformed_jordan": zoo.gl2_family("deformed_jordan"),
        "solvable_lie": zoo.gl2_family("solvable_lie"),
        "pl11": zoo.pl11(),
        "quantized_weyl_2": zoo.quantized_weyl(2, q="zeta(3)", gamma="zeta(3)"),
        "down_up": zoo.down_up(r="zeta(3)", s="zeta(3)^2", gamma=1),
        "symplectic_2": zoo.symplectic_reflection_rank1(2, t=1, c=[1]),
        "heisenberg_quotient": zoo.heisenberg_weyl_quotient(),
    }


def brute_force_dim(handle: AlgebraHandle, n: int) -> int:
    """Count irreducible words of weight <= n; extensions of a reducible word are never visited."""
    alphabet = handle.alphabet
    rs = handle.rewrite
    # weight-0 letters of the fixtures square to scalars and move to the right
    max_length = n if all(alphabet.weights) else 2 * n + 2
    count = 0
    stack = [((), 0)]
    while stack:
        word, weight = stack.pop()
        if rs.is_reducible(word):
            continue
        count += 1
        if len(word) == max_length:
            continue
        for letter, letter_weight in enumerate(alphabet.weights):
            if weight + letter_weight <= n:
                stack.append((word + (letter,), weight + letter_weight))
    return count


@pytest.mark.parametrize("name", sorted(fixture_presentations()))
def test_fixture_is_confluent_at_bound_six(name):
    handle = AlgebraHandle(fixture_presentations()[name], bound=6)
    assert handle.confluent, handle.report.to_dict(handle.alphabet)


@pytest.mark.parametrize("name", sorted(fixture_presentations()))
def test_dimensions_match_brute_force(name):
    handle = AlgebraHandle(fixture_presentations()[name], bound=12)
    for n in range(7):
        assert handle.dim_upto(n) == brute_force_dim(handle, n)


def test_weyl_dimensions():
    handle = AlgebraHandle(zoo.weyl_algebra())
    assert handle.dims(6) == [(n + 1) * (n + 2) // 2 for n in range(7)]
    assert handle.normal_form(handle.parse("y*x")) == handle.parse("x*y + 1")


def test_heisenberg_quotient_matches_weyl():
    quotient = AlgebraHandle(zoo.heisenberg_weyl_quotient())
    weyl = AlgebraHandle(zoo.weyl_algebra())
    assert quotient.dims(4) == weyl.dims(4)


def test_pl11_relations():
    presentation = zoo.pl11()
    relations = set(presentation.relations)
    assert presentation.parse("y2*y1 + y1*y2 - x1") in relations
    assert presentation.parse("x2*x1 - x1*x2") in relations
    assert presentation.provenance.flags["skew_sign_convention_differs"]
    handle = AlgebraHandle(presentation)
    x1 = handle.gen("x1")
    for name in presentation.names:
        g = handle.gen(name)
        assert handle.multiply(x1, g) == handle.multiply(g, x1)


def test_super_jacobi_violation_is_rejected():
    with pytest.raises(AxiomViolation) as info:
        zoo.enveloping_super(["x1", "x2", "y1", "y2"], [0, 0, 1, 1],
                             {("y1", "y2"): "x1", ("x2", "y1"): "y1", ("x2", "y2"): "y2"})
    assert info.value.context["axiom"] == "jacobi"


def test_bracket_of_wrong_parity_is_rejected():
    with pytest.raises(AxiomViolation) as info:
        zoo.enveloping_super(["x", "y"], [0, 1], {("x", "y"): "x"})
    assert info.value.context["axiom"] == "parity"


def test_iterated_ore_rejects_non_derivation():
    with pytest.raises(NotADerivation):
        zoo.iterated_ore(["x", "y", "z"], {"y": {"x": "1"}, "z": {"x": "x"}})


def test_iterated_ore_accepts_inner_type_derivation():
    presentation = zoo.iterated_ore(["x", "y", "z"], {"y": {"x": "1"}, "z": {"x": "y"}})
    handle = AlgebraHandle(presentation)
    assert handle.confluent
    assert handle.dim_upto(1) == 4


def test_associated_graded_of_down_up_drops_gamma():
    for alpha, beta, gamma in [(1, 1, 1), (2, -1, 3), (0, 1, 5)]:
        handle = AlgebraHandle(zoo.down_up(alpha, beta, gamma))
        graded = zoo.associated_graded(handle)
        assert graded == zoo.down_up(alpha, beta, 0)
        assert handle.dims(6) == AlgebraHandle(graded).dims(6)


def test_associated_graded_of_quantized_weyl_is_quantum_affine_space():
    handle = AlgebraHandle(zoo.quantized_weyl(2, q="zeta(3)", gamma="zeta(3)"))
    graded = zoo.associated_graded(handle)
    assert all(not r.constant_term() for r in graded.relations)
    assert AlgebraHandle(graded).dims(4) == handle.dims(4)


def test_quantized_weyl_parameter_checks():
    with pytest.raises(InvalidQMatrix):
        zoo.quantized_weyl(2, q=[[1, 2], [2, 1]])
    with pytest.raises(InvalidQMatrix):
        zoo.quantized_weyl(2, gamma=[1, 1, 1])


def test_down_up_parameter_checks():
    with pytest.raises(BetaZero):
        zoo.down_up(1, 0)
    with pytest.raises(RootsInconsistent):
        zoo.down_up(alpha=1, beta=1, r=1, s=1)
    flags = zoo.down_up(r="zeta(3)", s="zeta(3)^2").provenance.flags
    assert flags["roots_of_unity_order_ge_2"]


def test_down_up_roots_give_alpha_and_beta():
    from_roots = zoo.down_up(r="zeta(3)", s="zeta(3)^2", gamma=1)
    direct = zoo.down_up(alpha=-1, beta=-1, gamma=1, domain=Domain.cyclotomic(3))
    assert from_roots == direct


def test_tensor_product_of_weyl_and_polynomial_ring():
    product = zoo.tensor_product(zoo.weyl_algebra(), zoo.polynomial_ring(["x", "y"]))
    assert product.names == ("x", "y", "x_2", "y_2")
    handle = AlgebraHandle(product)
    assert handle.confluent
    assert handle.dim_upto(1) == 5
    assert product.provenance.gk_dimension == 4


def test_super_tensor_products_are_refused():
    with pytest.raises(SuperTensorUnsupported):
        zoo.tensor_product(zoo.pl11(), zoo.weyl_algebra())


def test_symplectic_generator_weights():
    presentation = zoo.symplectic_reflection_rank1(3, t=1, c=[1, 1])
    assert presentation.alphabet.weights == (1, 1, 0)
    assert presentation.domain == Domain.cyclotomic(3)
    handle = AlgebraHandle(presentation)
    assert handle.confluent
    assert handle.dim_upto(1) == 9


PL11_NAMES = ["x1", "x2", "y1", "y2"]
PL11_PARITIES = [0, 0, 1, 1]
PL11_BRACKETS = {(2, 3): {0: 1}, (1, 2): {2: 1}, (1, 3): {3: -1}}


def super_bracket(u, v, table):
    """Bilinear extension of a basis bracket table to coefficient vectors."""
    result = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for k, c in table.get((a, b), {}).items():
                result[k] = result.get(k, 0) + ca * cb * c
    return {k: c for k, c in result.items() if c}


def satisfies_super_jacobi(table, parities):
    """Checks [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]] on every basis triple."""
    n = len(parities)
    for a, b, c in itertools.product(range(n), repeat=3):
        ea, eb, ec = {a: 1}, {b: 1}, {c: 1}
        left = super_bracket(ea, super_bracket(eb, ec, table), table)
        first = super_bracket(super_bracket(ea, eb, table), ec, table)
        second = super_bracket(eb, super_bracket(ea, ec, table), table)
        sign = -1 if parities[a] * parities[b] else 1
        difference = dict(left)
        for k, v in first.items():
            difference[k] = difference.get(k, 0) - v
        for k, v in second.items():
            difference[k] = difference.get(k, 0) - sign * v
        if any(difference.values()):
            return False
    return True


def complete_by_skew_symmetry(brackets, parities):
    table = {}
    for (a, b), vec in brackets.items():
        sign = -1 if parities[a] * parities[b] else 1
        table[(a, b)] = dict(vec)
        if a != b:
            table[(b, a)] = {k: -sign * c for k, c in vec.items()}
    return table


def random_pl11_perturbation(rng):
    brackets = {key: dict(vec) for key, vec in PL11_BRACKETS.items()}
    pairs = [(a, b) for a in range(4) for b in range(a, 4) if a != b or PL11_PARITIES[a]]
    for _ in range(rng.randint(1, 2)):
        a, b = rng.choice(pairs)
        parity = (PL11_PARITIES[a] + PL11_PARITIES[b]) % 2
        allowed = [k for k in range(4) if PL11_PARITIES[k] == parity]
        vec = {k: rng.randint(-2, 2) for k in allowed}
        brackets[(a, b)] = {k: c for k, c in vec.items() if c}
    return {key: vec for key, vec in brackets.items() if vec}


def bracket_text(vec):
    text = ""
    for k, c in sorted(vec.items()):
        term = f"{abs(c)}*{PL11_NAMES[k]}"
        if not text:
            text = term if c > 0 else f"-{term}"
        else:
            text += f" + {term}" if c > 0 else f" - {term}"
    return text


def test_pl11_brackets_satisfy_super_jacobi():
    assert satisfies_super_jacobi(complete_by_skew_symmetry(PL11_BRACKETS, PL11_PARITIES), PL11_PARITIES)


def test_super_jacobi_validation_agrees_with_brute_force(rng):
    rejected = 0
    for _ in range(150):
        brackets = random_pl11_perturbation(rng)
        expected = satisfies_super_jacobi(complete_by_skew_symmetry(brackets, PL11_PARITIES), PL11_PARITIES)
        named = {(PL11_NAMES[a], PL11_NAMES[b]): bracket_text(vec) for (a, b), vec in brackets.items()}
        if expected:
            zoo.enveloping_super(PL11_NAMES, PL11_PARITIES, named)
        else:
            rejected += 1
            with pytest.raises(AxiomViolation) as info:
                zoo.enveloping_super(PL11_NAMES, PL11_PARITIES, named)
            assert info.value.context["axiom"] == "jacobi"
    assert rejected > 0


@pytest.mark.parametrize("name", sorted(fixture_presentations()))
def test_associated_graded_is_idempotent(name):
    graded = zoo.associated_graded(AlgebraHandle(fixture_presentations()[name], bound=6))
    assert zoo.associated_graded(AlgebraHandle(graded, bound=6)) == graded


def test_symplectic_order_two_with_t_zero():
    presentation = zoo.symplectic_reflection_rank1(2, t=0, c=[1])
    handle = AlgebraHandle(presentation)
    assert handle.confluent
    assert presentation.parse("x*y - y*x - g") in set(presentation.relations)
    assert handle.dim_upto(1) == 6
    words = sorted(handle.alphabet.format_word(w) for w in handle.normal_words(1))
    assert words == ["1", "g", "x", "x*g", "y", "y*g"]


def test_tensor_of_quantum_plane_and_polynomial_ring():
    product = zoo.tensor_product(zoo.gl2_family("quantum_plane", q="zeta(3)"),
                                 zoo.polynomial_ring(["z"], domain=Domain.cyclotomic(3)))
    handle = AlgebraHandle(product)
    assert product.names == ("x", "y", "z")
    assert handle.confluent
    assert handle.hilbert_series(2) == [1, 3, 6]


def test_iterated_ore_weight_follows_the_derivation():
    presentation = zoo.iterated_ore(["x", "y"], {"y": {"x": "x^2"}})
    assert presentation.alphabet.weights == (1, 2)
    handle = AlgebraHandle(presentation)
    assert handle.confluent
    assert handle.hilbert_series(4) == [1, 1, 2, 2, 3]
