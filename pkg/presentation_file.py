"""
Reader and writer for ``.alg`` presentation files.

A file is a list of INI-like sections. Blank lines and lines starting with ``#``
are ignored; see README.md for the full grammar.

    [algebra]
    name = quantum_plane
    field = QQ(zeta(3))
    generators = x:1:0, y:1:0
    precedence = x, y

    [relations]
    y*x - zeta(3)*x*y

    [automorphism phi]
    x = zeta(3)*x
    y = zeta(3)^2*y

    [group G]
    generators = phi
"""
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from action import AutoMap, FiniteGroup, generate_group, mk_automorphism
from errors import ParseError, UnknownFamily, UnknownGenerator
from expressions import parse_poly
from ncpoly import Alphabet, GeneratorInfo
from presentation import AlgebraHandle, Presentation, Provenance
from scalars import Domain
import zoo

logger = logging.getLogger(__name__)

_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_]+)(?:\s+([A-Za-z_][A-Za-z0-9_]*))?\s*\]$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_BRACKET_RE = re.compile(r"^\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$")
_DELTA_RE = re.compile(r"^delta\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)$")


@dataclass
class Line:
    number: int
    col: int
    text: str


@dataclass
class Entry:
    key: str
    value: str
    line: int
    key_col: int
    value_col: int


@dataclass
class Section:
    kind: str
    name: Optional[str]
    line: int
    lines: List[Line] = field(default_factory=list)

    def entries(self) -> List[Entry]:
        out = []
        for ln in self.lines:
            key, sep, value = ln.text.partition("=")
            if not sep:
                raise ParseError(f"expected 'key = value' in [{self.kind}]", ln.number, ln.col, expected="'='")
            value_col = ln.col + len(key) + 1 + (len(value) - len(value.lstrip()))
            out.append(Entry(key.strip(), value.strip(), ln.number, ln.col, value_col))
        return out

    def mapping(self, allowed: Optional[List[str]] = None) -> Dict[str, Entry]:
        result = {}
        for entry in self.entries():
            if allowed is not None and entry.key not in allowed:
                raise ParseError(f"unknown key {entry.key!r} in [{self.kind}]", entry.line, entry.key_col,
                                 expected=" or ".join(allowed))
            if entry.key in result:
                raise ParseError(f"duplicate key {entry.key!r}", entry.line, entry.key_col, expected="a new key")
            result[entry.key] = entry
        return result


@dataclass
class PresentationFile:
    """A parsed file: the presentation plus the raw automorphism and group declarations."""

    name: str
    presentation: Presentation
    automorphisms: Dict[str, Dict[str, str]] = field(default_factory=dict)
    groups: Dict[str, List[str]] = field(default_factory=dict)

    def handle(self, bound: Optional[int] = None) -> AlgebraHandle:
        return AlgebraHandle(self.presentation, bound=bound)

    def automorphism(self, handle: AlgebraHandle, name: str) -> AutoMap:
        try:
            images = self.automorphisms[name]
        except KeyError:
            raise UnknownGenerator(f"no automorphism named {name!r}", name=name,
                                   known=sorted(self.automorphisms)) from None
        return mk_automorphism(handle, images, name=name)

    def group(self, handle: AlgebraHandle, name: str, cap: Optional[int] = None) -> FiniteGroup:
        try:
            members = self.groups[name]
        except KeyError:
            raise UnknownGenerator(f"no group named {name!r}", name=name, known=sorted(self.groups)) from None
        gens = [self.automorphism(handle, member) for member in members]
        return generate_group(gens, cap=cap, handle=handle, name=name)


def _split_sections(text: str) -> List[Section]:
    sections: List[Section] = []
    current: Optional[Section] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        match = _SECTION_RE.match(stripped)
        if match:
            current = Section(match.group(1), match.group(2), number)
            sections.append(current)
            continue
        if current is None:
            raise ParseError("content before the first section", number, col, expected="[algebra]")
        current.lines.append(Line(number, col, stripped))
    return sections


def _names(entry: Entry) -> List[str]:
    names = [n.strip() for n in entry.value.split(",") if n.strip()]
    for n in names:
        if not _NAME_RE.match(n):
            raise ParseError(f"invalid name {n!r}", entry.line, entry.value_col, expected="identifier")
    return names


def _generators(entry: Entry) -> Tuple[List[str], List[int], List[int]]:
    """``x:1:0, y:1:0`` with weight and parity optional."""
    names, weights, parities = [], [], []
    for item in entry.value.split(","):
        parts = [p.strip() for p in item.split(":")]
        if not parts[0] or not _NAME_RE.match(parts[0]) or len(parts) > 3:
            raise ParseError(f"invalid generator declaration {item.strip()!r}", entry.line, entry.value_col,
                             expected="NAME[:WEIGHT[:PARITY]]")
        try:
            weight = int(parts[1]) if len(parts) > 1 else 1
            parity = int(parts[2]) if len(parts) > 2 else 0
        except ValueError:
            raise ParseError(f"weight and parity of {parts[0]} must be integers", entry.line, entry.value_col,
                             expected="integer") from None
        if weight < 0 or parity not in (0, 1):
            raise ParseError(f"generator {parts[0]} needs weight >= 0 and parity 0 or 1", entry.line,
                             entry.value_col, expected="NAME:WEIGHT:PARITY")
        names.append(parts[0])
        weights.append(weight)
        parities.append(parity)
    return names, weights, parities


def _int(entry: Entry) -> int:
    try:
        return int(entry.value)
    except ValueError:
        raise ParseError(f"{entry.key} must be an integer", entry.line, entry.value_col, expected="integer") from None


def _matrix_or_scalar(entry: Entry):
    """``a, b; c, d`` is a matrix, ``a, b`` a list and anything else a scalar literal."""
    if ";" in entry.value:
        return [[v.strip() for v in row.split(",")] for row in entry.value.split(";")]
    if "," in entry.value:
        return [v.strip() for v in entry.value.split(",")]
    return entry.value


def _family_quantized_weyl(section: Section, domain, base_dir) -> Presentation:
    keys = section.mapping(["name", "n", "q", "gamma"])
    n = _int(keys["n"]) if "n" in keys else 1
    q = _matrix_or_scalar(keys["q"]) if "q" in keys else None
    gamma = _matrix_or_scalar(keys["gamma"]) if "gamma" in keys else None
    return zoo.quantized_weyl(n, q=q, gamma=gamma, domain=domain)


def _family_down_up(section: Section, domain, base_dir) -> Presentation:
    keys = section.mapping(["name", "alpha", "beta", "gamma", "r", "s"])
    values = {k: keys[k].value for k in ("alpha", "beta", "r", "s") if k in keys}
    return zoo.down_up(gamma=keys["gamma"].value if "gamma" in keys else 0, domain=domain, **values)


def _family_gl2(section: Section, domain, base_dir) -> Presentation:
    keys = section.mapping(["name", "kind", "q"])
    if "kind" not in keys:
        raise ParseError("gl2 needs a kind", section.line, 1, expected="kind = " + " | ".join(zoo.GL2_KINDS))
    return zoo.gl2_family(keys["kind"].value, q=keys["q"].value if "q" in keys else None, domain=domain)


def _family_enveloping_super(section: Section, domain, base_dir) -> Presentation:
    even, odd = [], []
    brackets = {}
    for entry in section.entries():
        if entry.key == "name":
            continue
        if entry.key == "even":
            even = _names(entry)
        elif entry.key == "odd":
            odd = _names(entry)
        else:
            match = _BRACKET_RE.match(entry.key)
            if not match:
                raise ParseError(f"unknown key {entry.key!r} in [family]", entry.line, entry.key_col,
                                 expected="even, odd or [a, b]")
            brackets[(match.group(1), match.group(2))] = entry.value
    return zoo.enveloping_super(even + odd, [0] * len(even) + [1] * len(odd), brackets, domain)


def _family_iterated_ore(section: Section, domain, base_dir) -> Presentation:
    names: List[str] = []
    derivations: Dict[str, Dict[str, str]] = {}
    for entry in section.entries():
        if entry.key == "name":
            continue
        if entry.key == "generators":
            names = _names(entry)
            continue
        match = _DELTA_RE.match(entry.key)
        if not match:
            raise ParseError(f"unknown key {entry.key!r} in [family]", entry.line, entry.key_col,
                             expected="generators or delta(xk, xj)")
        derivations.setdefault(match.group(1), {})[match.group(2)] = entry.value
    return zoo.iterated_ore(names, derivations, domain)


def _family_symplectic_rank1(section: Section, domain, base_dir) -> Presentation:
    keys = section.mapping(["name", "m", "t", "c"])
    c = _matrix_or_scalar(keys["c"]) if "c" in keys else None
    if isinstance(c, str):
        c = [c]
    return zoo.symplectic_reflection_rank1(_int(keys["m"]) if "m" in keys else 2,
                                           t=keys["t"].value if "t" in keys else 1, c=c, domain=domain)


def _family_polynomial_ring(section: Section, domain, base_dir) -> Presentation:
    keys = section.mapping(["name", "generators"])
    names = _names(keys["generators"]) if "generators" in keys else ["x", "y"]
    return zoo.polynomial_ring(names, domain)


def _family_weyl(section: Section, domain, base_dir) -> Presentation:
    section.mapping(["name"])
    return zoo.weyl_algebra(domain)


def _family_heisenberg_quotient(section: Section, domain, base_dir) -> Presentation:
    section.mapping(["name"])
    return zoo.heisenberg_weyl_quotient(domain)


def _family_tensor_product(section: Section, domain, base_dir) -> Presentation:
    keys = section.mapping(["name", "factors"])
    if "factors" not in keys:
        raise ParseError("tensor_product needs factors", section.line, 1, expected="factors = a.alg, b.alg")
    entry = keys["factors"]
    paths = [p.strip() for p in entry.value.split(",") if p.strip()]
    if len(paths) < 2:
        raise ParseError("tensor_product needs at least two factors", entry.line, entry.value_col,
                         expected="factors = a.alg, b.alg")
    factors = [load_presentation(os.path.join(base_dir or ".", p)).presentation for p in paths]
    result = factors[0]
    for factor in factors[1:]:
        result = zoo.tensor_product(result, factor)
    return result


FAMILIES: Dict[str, Callable[[Section, Optional[Domain], Optional[str]], Presentation]] = {
    "quantized_weyl": _family_quantized_weyl,
    "down_up": _family_down_up,
    "gl2": _family_gl2,
    "enveloping_super": _family_enveloping_super,
    "iterated_ore": _family_iterated_ore,
    "symplectic_rank1": _family_symplectic_rank1,
    "polynomial_ring": _family_polynomial_ring,
    "weyl": _family_weyl,
    "heisenberg_quotient": _family_heisenberg_quotient,
    "tensor_product": _family_tensor_product,
}


def _explicit(algebra: Dict[str, Entry], relations: Section, domain: Domain) -> Presentation:
    if "generators" not in algebra:
        raise ParseError("explicit relations need a generators line", relations.line, 1,
                         expected="generators = NAME:WEIGHT:PARITY, ...")
    names, weights, parities = _generators(algebra["generators"])
    precedence = None
    if "precedence" in algebra:
        entry = algebra["precedence"]
        precedence = _names(entry)
        if sorted(precedence) != sorted(names):
            raise ParseError("precedence must list every generator exactly once", entry.line, entry.value_col,
                             expected=", ".join(names))
    rank = {n: i for i, n in enumerate(precedence or names)}
    if len(set(names)) != len(names):
        entry = algebra["generators"]
        raise ParseError("duplicate generator name", entry.line, entry.value_col, expected="distinct names")
    alphabet = Alphabet([GeneratorInfo(n, w, p, rank[n]) for n, w, p in zip(names, weights, parities)])
    polys = [parse_poly(ln.text, alphabet, domain, line=ln.number, col_offset=ln.col - 1) for ln in relations.lines]
    return Presentation(alphabet, polys, domain, _recorded_provenance(algebra))


def _recorded_provenance(algebra: Dict[str, Entry]) -> Provenance:
    """Family and GK dimension written out by format_presentation for a constructor's relations."""
    family = algebra["family"].value if "family" in algebra else "explicit"
    gk_dimension = None
    if "gk_dimension" in algebra:
        gk_dimension = _int(algebra["gk_dimension"])
        if gk_dimension < 0:
            entry = algebra["gk_dimension"]
            raise ParseError("gk_dimension must be non-negative", entry.line, entry.value_col,
                             expected="integer >= 0")
    return Provenance(family or "explicit", gk_dimension=gk_dimension)


def parse_presentation(text: str, base_dir: Optional[str] = None) -> PresentationFile:
    """
    Parse the text of an ``.alg`` file.

    Args:
        text: The file contents.
        base_dir: Directory against which tensor_product factor paths are resolved.

    Raises:
        ParseError: malformed input, with line and column.
        UnknownGenerator: an expression or automorphism names an undeclared generator.
        UnknownFamily: the [family] section names no known constructor.
    """
    sections = _split_sections(text)
    by_kind: Dict[str, List[Section]] = {}
    for section in sections:
        if section.kind not in ("algebra", "relations", "family", "automorphism", "group"):
            raise ParseError(f"unknown section [{section.kind}]", section.line, 1,
                             expected="algebra, relations, family, automorphism or group")
        if section.kind in ("automorphism", "group") and not section.name:
            raise ParseError(f"[{section.kind}] needs a name", section.line, 1, expected=f"[{section.kind} NAME]")
        if section.kind in ("algebra", "relations", "family") and section.name:
            raise ParseError(f"[{section.kind}] takes no name", section.line, 1, expected=f"[{section.kind}]")
        by_kind.setdefault(section.kind, []).append(section)
    for kind in ("algebra", "relations", "family"):
        if len(by_kind.get(kind, [])) > 1:
            raise ParseError(f"more than one [{kind}] section", by_kind[kind][1].line, 1, expected="one section")
    if "algebra" not in by_kind:
        raise ParseError("missing [algebra] section", 1, 1, expected="[algebra]")
    has_relations = "relations" in by_kind
    has_family = "family" in by_kind
    if has_relations == has_family:
        line = by_kind["family"][0].line if has_family else by_kind["algebra"][0].line
        raise ParseError("exactly one of [relations] and [family] is required", line, 1,
                         expected="[relations] or [family]")

    algebra_section = by_kind["algebra"][0]
    algebra = algebra_section.mapping(["name", "field", "generators", "precedence", "family", "gk_dimension"])
    name = algebra["name"].value if "name" in algebra else "algebra"
    domain = None
    if "field" in algebra:
        entry = algebra["field"]
        try:
            domain = Domain.parse(entry.value)
        except ValueError as exc:
            raise ParseError(str(exc), entry.line, entry.value_col, expected="QQ, QQ(zeta(n)) or GF(p)") from None

    if has_relations:
        presentation = _explicit(algebra, by_kind["relations"][0], domain or Domain.rational())
    else:
        section = by_kind["family"][0]
        declared = [algebra[k] for k in ("generators", "precedence", "family", "gk_dimension") if k in algebra]
        if declared:
            entry = declared[0]
            raise ParseError(f"{entry.key} comes from the family constructor", entry.line, entry.key_col,
                             expected="name or field")
        family_name = next((e.value for e in section.entries() if e.key == "name"), None)
        if family_name is None:
            raise ParseError("[family] needs a name", section.line, 1, expected="name = " + " | ".join(FAMILIES))
        builder = FAMILIES.get(family_name)
        if builder is None:
            raise UnknownFamily(f"line {section.line}: unknown family {family_name!r}", family=family_name,
                                line=section.line, known=sorted(FAMILIES))
        presentation = builder(section, domain, base_dir)

    alphabet = presentation.alphabet
    automorphisms: Dict[str, Dict[str, str]] = {}
    for section in by_kind.get("automorphism", []):
        if section.name in automorphisms:
            raise ParseError(f"duplicate automorphism {section.name!r}", section.line, 1, expected="a new name")
        images = {}
        for entry in section.entries():
            if entry.key not in alphabet.names:
                raise UnknownGenerator(f"line {entry.line}, column {entry.key_col}: unknown generator {entry.key!r}",
                                       name=entry.key, line=entry.line, col=entry.key_col,
                                       known=list(alphabet.names))
            parse_poly(entry.value, alphabet, presentation.domain, line=entry.line, col_offset=entry.value_col - 1)
            images[entry.key] = entry.value
        automorphisms[section.name] = images

    groups: Dict[str, List[str]] = {}
    for section in by_kind.get("group", []):
        keys = section.mapping(["generators"])
        members = _names(keys["generators"]) if "generators" in keys else []
        for member in members:
            if member not in automorphisms:
                entry = keys["generators"]
                raise UnknownGenerator(f"line {entry.line}: group {section.name} uses unknown automorphism "
                                       f"{member!r}", name=member, line=entry.line, col=entry.value_col)
        groups[section.name] = members

    logger.info(f"Parsed {name}: {presentation!r}, {len(automorphisms)} automorphisms, {len(groups)} groups")
    return PresentationFile(name, presentation, automorphisms, groups)


def load_presentation(path: str) -> PresentationFile:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return parse_presentation(text, base_dir=os.path.dirname(os.path.abspath(path)))


def format_presentation(presentation: Presentation, name: str = "algebra",
                        automorphisms: Optional[Dict[str, Dict[str, str]]] = None,
                        groups: Optional[Dict[str, List[str]]] = None) -> str:
    """
    Write the explicit-relations form; parse_presentation of the result gives an equal presentation.

    A constructor's family name and GK dimension are kept in the [algebra] section.
    """
    alphabet = presentation.alphabet
    generators = ", ".join(f"{g.name}:{g.weight}:{g.parity}" for g in alphabet)
    lines = ["[algebra]", f"name = {name}", f"field = {presentation.domain}", f"generators = {generators}",
             f"precedence = {', '.join(alphabet.precedence_names())}"]
    provenance = presentation.provenance
    if provenance and provenance.family != "explicit":
        lines.append(f"family = {provenance.family}")
    if provenance and provenance.gk_dimension is not None:
        lines.append(f"gk_dimension = {provenance.gk_dimension}")
    lines += ["", "[relations]"]
    lines += presentation.relation_strings()
    for auto_name, images in (automorphisms or {}).items():
        lines += ["", f"[automorphism {auto_name}]"]
        lines += [f"{key} = {value}" for key, value in images.items()]
    for group_name, members in (groups or {}).items():
        lines += ["", f"[group {group_name}]", f"generators = {', '.join(members)}"]
    return "\n".join(lines) + "\n"
