"""
Presented algebras: a Presentation is generators plus relations over a scalar domain,
an AlgebraHandle is a Presentation with its oriented, confluence-checked rewrite system.
"""
import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import config
from errors import DomainMismatch, NotOrientable, ParityInhomogeneous, UnknownGenerator
from expressions import parse_poly
from ncpoly import Alphabet, Poly, Word, word_weight
from rewrite import ConfluenceReport, RewriteSystem, check_confluence, dims_by_weight, normal_words, orient
from scalars import Domain, DomainKind, Scalar

logger = logging.getLogger(__name__)


@dataclass
class Provenance:
    """Where a presentation came from; never part of presentation equality."""

    family: str
    parameters: Dict[str, str] = field(default_factory=dict)
    scalars: List[Scalar] = field(default_factory=list)
    gk_dimension: Optional[int] = None
    notes: List[str] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {"family": self.family, "parameters": dict(sorted(self.parameters.items()))}
        if self.gk_dimension is not None:
            doc["gk_dimension"] = self.gk_dimension
        if self.notes:
            doc["notes"] = list(self.notes)
        if self.flags:
            doc["flags"] = dict(sorted(self.flags.items()))
        return doc


class Presentation:
    def __init__(self, alphabet: Alphabet, relations: Sequence[Poly], domain: Domain,
                 provenance: Optional[Provenance] = None):
        self.alphabet = alphabet
        self.relations = tuple(relations)
        self.domain = domain
        self.provenance = provenance
        super_case = any(alphabet.parities)
        for index, relation in enumerate(self.relations):
            if relation.domain != domain:
                raise DomainMismatch(f"relation {index} is over {relation.domain}, presentation over {domain}",
                                     relation=index)
            if relation.is_zero():
                raise NotOrientable(f"relation {index} is zero", relation=index)
            bad = [i for i in relation.generators_used() if i >= len(alphabet)]
            if bad:
                raise UnknownGenerator(f"relation {index} uses generator index {bad[0]} outside the alphabet",
                                       relation=index)
            if super_case and not relation.is_parity_homogeneous(alphabet):
                raise ParityInhomogeneous(f"relation {index} mixes even and odd monomials: "
                                          f"{relation.to_string(alphabet)}", relation=index)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.domain == other.domain
                and self.relations == other.relations)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.domain, self.relations))

    def __repr__(self) -> str:
        family = self.provenance.family if self.provenance else "explicit"
        return f"Presentation({family}, {len(self.alphabet)} generators, {len(self.relations)} relations, {self.domain})"

    @property
    def names(self) -> tuple:
        return self.alphabet.names

    def gen(self, name: str) -> Poly:
        return Poly.generator(self.alphabet.index(name), self.domain)

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.alphabet, self.domain)

    def relation_strings(self) -> List[str]:
        return [r.to_string(self.alphabet) for r in self.relations]

    def coefficient_set(self) -> List[Scalar]:
        """Relation coefficients plus the scalar parameters recorded in provenance."""
        seen = {}
        for relation in self.relations:
            for c in relation.terms.values():
                seen.setdefault((c.domain, c.value), c)
        if self.provenance:
            for c in self.provenance.scalars:
                if c.domain.kind is not DomainKind.PRIME_FIELD:
                    seen.setdefault((c.domain, c.value), c)
        return list(seen.values())

    def with_relations(self, relations: Sequence[Poly], provenance: Optional[Provenance] = None,
                       domain: Optional[Domain] = None) -> "Presentation":
        return Presentation(self.alphabet, relations, domain or self.domain, provenance or self.provenance)

    def to_dict(self) -> dict:
        doc = {
            "domain": str(self.domain),
            "generators": [{"name": g.name, "weight": g.weight, "parity": g.parity} for g in self.alphabet],
            "precedence": self.alphabet.precedence_names(),
            "relations": self.relation_strings(),
        }
        if self.provenance:
            doc["provenance"] = self.provenance.to_dict()
        return doc


class AlgebraHandle:
    """
    A presentation together with its rewrite system and a dimension table.

    The dimension table only grows, and only for weights inside the certified range.
    """

    def __init__(self, presentation: Presentation, bound: Optional[int] = None,
                 memo_cap: Optional[int] = None, check: bool = True):
        self.presentation = presentation
        self.bound = bound if bound is not None else config.DEFAULT_BOUND
        self.rewrite: RewriteSystem = orient(presentation.relations, presentation.alphabet,
                                             presentation.domain, memo_cap)
        self._dims: Dict[int, int] = {}
        self._dims_lock = threading.Lock()
        self.report: Optional[ConfluenceReport] = None
        if check:
            self.report = check_confluence(self.rewrite, self.bound)

    @property
    def alphabet(self) -> Alphabet:
        return self.presentation.alphabet

    @property
    def domain(self) -> Domain:
        return self.presentation.domain

    @property
    def confluent(self) -> bool:
        return self.report is not None and self.report.confluent

    def certified_for(self, weight: int) -> bool:
        return self.rewrite.certified_for(weight)

    def max_basis_weight(self) -> int:
        """Largest n <= bound for which the normal words of weight <= n are certified to be a basis of F_n."""
        if not self.confluent:
            return -1
        return self.bound if self.report.complete else self.report.bound // 2

    def require_certified(self, weight: int, purpose: str = "a basis") -> None:
        self.rewrite.require_certified(weight, purpose)

    def gen(self, name: str) -> Poly:
        return self.presentation.gen(name)

    def generator(self, index: int) -> Poly:
        return Poly.generator(index, self.domain)

    def parse(self, text: str) -> Poly:
        return self.normal_form(self.presentation.parse(text))

    def normal_form(self, p: Poly) -> Poly:
        return self.rewrite.normal_form(p)

    def multiply(self, p: Poly, q: Poly) -> Poly:
        return self.rewrite.normal_form(p * q)

    def weight(self, p: Poly) -> int:
        return p.max_weight(self.alphabet)

    def word_weight(self, word: Word) -> int:
        return word_weight(word, self.alphabet)

    def normal_words(self, n: int) -> List[Word]:
        self.require_certified(2 * n, purpose=f"the basis of F_{n}")
        return normal_words(self.rewrite, n)

    def dim_upto(self, n: int) -> int:
        cached = self._dims.get(n)
        if cached is not None:
            return cached
        self.require_certified(2 * n, purpose=f"dim F_{n}")
        value = len(normal_words(self.rewrite, n))
        with self._dims_lock:
            self._dims.setdefault(n, value)
        return value

    def dims(self, n: int) -> List[int]:
        return [self.dim_upto(k) for k in range(n + 1)]

    def hilbert_series(self, n: int) -> List[int]:
        """Dimensions of the weight-k pieces of gr A, k = 0..n."""
        self.require_certified(2 * n, purpose=f"the Hilbert series to weight {n}")
        return dims_by_weight(self.rewrite, n)

    def __repr__(self) -> str:
        status = self.report.status.value if self.report else "Unchecked"
        return f"AlgebraHandle({self.presentation!r}, {status}, bound={self.bound})"
