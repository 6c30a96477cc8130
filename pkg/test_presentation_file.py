import pytest

import zoo
from congenial import gk_estimate
from errors import ParseError, UnknownFamily, UnknownGenerator
from presentation import AlgebraHandle
from presentation_file import format_presentation, parse_presentation
from scalars import Domain

QUANTUM_PLANE = """\
# quantum plane
[algebra]
name = quantum_plane
field = QQ(zeta(3))
generators = x:1:0, y:1:0
precedence = x, y

[relations]
y*x - zeta(3)*x*y

[automorphism phi]
x = zeta(3)*x
y = y
"""


@pytest.mark.parametrize("name, expected", [
    ("weyl_q3.alg", lambda: zoo.gl2_family("quantum_weyl", q="zeta(3)")),
    ("qweyl1.alg", lambda: zoo.quantized_weyl(1, q="zeta(3)", gamma="zeta(3)")),
    ("down_up.alg", lambda: zoo.down_up(r="zeta(3)", s="zeta(3)^2", gamma=1)),
    ("pl11.alg", zoo.pl11),
    ("weyl.alg", zoo.weyl_algebra),
])
def test_family_files_match_constructors(load_fixture, name, expected):
    assert load_fixture(name).presentation == expected()


def test_explicit_relations():
    source = parse_presentation(QUANTUM_PLANE)
    presentation = source.presentation
    assert source.name == "quantum_plane"
    assert presentation.domain == Domain.cyclotomic(3)
    assert presentation.parse("y*x - zeta(3)*x*y") == presentation.relations[0]
    assert presentation.provenance.family == "explicit"
    assert source.automorphisms == {"phi": {"x": "zeta(3)*x", "y": "y"}}


def test_undeclared_generator_has_line_information():
    text = QUANTUM_PLANE.replace("y*x - zeta(3)*x*y", "y*x - zeta(3)*x*z")
    with pytest.raises(UnknownGenerator) as info:
        parse_presentation(text)
    assert info.value.context["line"] == 9
    assert info.value.context["col"] == 17


def test_parse_error_location():
    text = QUANTUM_PLANE.replace("y*x - zeta(3)*x*y", "y*x - * x*y")
    with pytest.raises(ParseError) as info:
        parse_presentation(text)
    assert info.value.line == 9
    assert info.value.col == 7
    assert "line 9" in str(info.value)


def test_relations_and_family_are_exclusive():
    both = QUANTUM_PLANE + "\n[family]\nname = weyl\n"
    with pytest.raises(ParseError):
        parse_presentation(both)
    neither = "[algebra]\nname = empty\n"
    with pytest.raises(ParseError):
        parse_presentation(neither)


def test_unknown_family():
    with pytest.raises(UnknownFamily) as info:
        parse_presentation("[algebra]\nname = a\n\n[family]\nname = lie_algebra\n")
    assert info.value.context["family"] == "lie_algebra"


def test_family_sections_take_no_generators():
    with pytest.raises(ParseError):
        parse_presentation("[algebra]\ngenerators = x, y\n\n[family]\nname = weyl\n")


def test_malformed_lines():
    with pytest.raises(ParseError) as info:
        parse_presentation("x = 1\n[algebra]\n")
    assert info.value.line == 1
    with pytest.raises(ParseError):
        parse_presentation(QUANTUM_PLANE.replace("name = quantum_plane", "colour = blue"))
    with pytest.raises(ParseError):
        parse_presentation(QUANTUM_PLANE.replace("generators = x:1:0, y:1:0", "generators = x:1:2, y:1:0"))
    with pytest.raises(ParseError):
        parse_presentation(QUANTUM_PLANE.replace("precedence = x, y", "precedence = x"))


def test_automorphism_keys_must_be_generators():
    text = QUANTUM_PLANE.replace("y = y", "w = y")
    with pytest.raises(UnknownGenerator) as info:
        parse_presentation(text)
    assert info.value.context["line"] == 13
    assert info.value.context["col"] == 1


def test_group_members_must_exist():
    with pytest.raises(UnknownGenerator):
        parse_presentation(QUANTUM_PLANE + "\n[group G]\ngenerators = psi\n")


def test_unknown_names_in_loaded_files(load_fixture):
    source = load_fixture("polynomial.alg")
    handle = source.handle()
    with pytest.raises(UnknownGenerator):
        source.group(handle, "H")
    with pytest.raises(UnknownGenerator):
        source.automorphism(handle, "rot")
    assert source.group(handle, "T").order == 1


FIXTURE_FILES = ["down_up.alg", "pl11.alg", "polynomial.alg", "qweyl1.alg", "tensor.alg", "weyl.alg", "weyl_q3.alg"]


@pytest.mark.parametrize("name", FIXTURE_FILES)
def test_written_files_parse_back(load_fixture, name):
    source = load_fixture(name)
    text = format_presentation(source.presentation, source.name, source.automorphisms, source.groups)
    again = parse_presentation(text)
    assert again.presentation == source.presentation
    assert again.presentation.alphabet.precedence_names() == source.presentation.alphabet.precedence_names()
    assert again.automorphisms == source.automorphisms
    assert again.groups == source.groups
    provenance, kept = source.presentation.provenance, again.presentation.provenance
    assert kept.family == provenance.family
    assert kept.gk_dimension == provenance.gk_dimension


def test_tensor_factors_are_loaded_relative_to_the_file(load_fixture):
    presentation = load_fixture("tensor.alg").presentation
    assert presentation.names == ("x", "y", "x_2", "y_2")
    assert presentation.provenance.family == "tensor_product"


def test_written_file_keeps_the_known_gk_dimension(load_fixture):
    source = load_fixture("down_up.alg")
    text = format_presentation(source.presentation, source.name)
    assert "family = down_up" in text
    assert "gk_dimension = 3" in text
    again = parse_presentation(text)
    assert gk_estimate(AlgebraHandle(again.presentation)) == 3


def test_family_files_cannot_override_gk_dimension():
    text = "[algebra]\nname = w\ngk_dimension = 5\n\n[family]\nname = weyl\n"
    with pytest.raises(ParseError) as info:
        parse_presentation(text)
    assert info.value.context["line"] == 3
