"""
Words and polynomials in the free algebra on a weighted, parity-tagged alphabet.

A word is a tuple of generator indices; the empty tuple is the identity. A Poly is a
finite map from words to nonzero scalars of a single domain. Words are compared with
the monomial order (weight, then length, then left-lexicographic by precedence).
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from errors import DomainMismatch, UnknownGenerator
from scalars import Domain, Number, Scalar

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
EMPTY_WORD: Word = ()


@dataclass(frozen=True)
class GeneratorInfo:
    name: str
    weight: int = 1
    parity: int = 0
    precedence: int = 0


class Alphabet:
    """An ordered list of generators with name lookup and monomial-order keys."""

    def __init__(self, generators: Sequence[GeneratorInfo]):
        generators = tuple(generators)
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            duplicates = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"generator names must be unique, repeated: {duplicates}")
        for g in generators:
            if g.weight < 0:
                raise ValueError(f"generator {g.name} has negative weight {g.weight}")
            if g.parity not in (0, 1):
                raise ValueError(f"generator {g.name} has parity {g.parity}; expected 0 or 1")
        self.generators = generators
        self.names = tuple(names)
        self.weights = tuple(g.weight for g in generators)
        self.parities = tuple(g.parity for g in generators)
        order = sorted(range(len(generators)), key=lambda i: (generators[i].precedence, i))
        ranks = [0] * len(generators)
        for rank, i in enumerate(order):
            ranks[i] = rank
        self.ranks = tuple(ranks)
        self._index = {name: i for i, name in enumerate(names)}

    @staticmethod
    def from_names(names: Sequence[str], weights: Optional[Sequence[int]] = None,
                   parities: Optional[Sequence[int]] = None,
                   precedence: Optional[Sequence[str]] = None) -> "Alphabet":
        """Build an alphabet; precedence defaults to declaration order."""
        weights = list(weights) if weights is not None else [1] * len(names)
        parities = list(parities) if parities is not None else [0] * len(names)
        if precedence is None:
            rank = {name: i for i, name in enumerate(names)}
        else:
            if sorted(precedence) != sorted(names):
                raise ValueError(f"precedence {list(precedence)} is not a permutation of {list(names)}")
            rank = {name: i for i, name in enumerate(precedence)}
        return Alphabet([GeneratorInfo(n, w, p, rank[n]) for n, w, p in zip(names, weights, parities)])

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[GeneratorInfo]:
        return iter(self.generators)

    def __getitem__(self, i: int) -> GeneratorInfo:
        return self.generators[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __repr__(self) -> str:
        return f"Alphabet({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}", name=name, known=list(self.names)) from None

    def precedence_names(self) -> List[str]:
        return [self.names[i] for i in sorted(range(len(self)), key=lambda i: self.ranks[i])]

    def word_key(self, word: Word) -> tuple:
        weight = sum(self.weights[i] for i in word)
        return weight, len(word), tuple(self.ranks[i] for i in word)

    def word_parity(self, word: Word) -> int:
        return sum(self.parities[i] for i in word) % 2

    def format_word(self, word: Word) -> str:
        """Render a word as ``x^2*y``; the empty word is ``1``."""
        if not word:
            return "1"
        parts = []
        run_start = 0
        for pos in range(1, len(word) + 1):
            if pos == len(word) or word[pos] != word[run_start]:
                name = self.names[word[run_start]]
                count = pos - run_start
                parts.append(name if count == 1 else f"{name}^{count}")
                run_start = pos
        return "*".join(parts)

    def parse_word(self, text: str) -> Word:
        """Inverse of format_word for plain monomials like ``x^2*y``."""
        text = text.strip()
        if text in ("", "1"):
            return EMPTY_WORD
        word: List[int] = []
        for factor in text.split("*"):
            name, _, exp = factor.strip().partition("^")
            word.extend([self.index(name.strip())] * (int(exp) if exp else 1))
        return tuple(word)


def word_weight(w: Word, alphabet: Alphabet) -> int:
    return sum(alphabet.weights[i] for i in w)


def _coerce(domain: Domain, value: Number) -> Scalar:
    if isinstance(value, Scalar) and value.domain != domain:
        raise DomainMismatch(f"coefficient {value} is in {value.domain}, polynomial is over {domain}",
                             coefficient=str(value), domain=str(domain))
    return domain.coerce(value)


class Poly:
    """A noncommutative polynomial: an immutable map Word -> Scalar with no zero entries."""

    __slots__ = ("domain", "terms", "_hash")

    def __init__(self, domain: Domain, terms: Optional[Mapping[Word, Number]] = None):
        self.domain = domain
        clean: Dict[Word, Scalar] = {}
        if terms:
            for word, coeff in terms.items():
                c = _coerce(domain, coeff)
                if c:
                    clean[tuple(word)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, domain: Domain, terms: Dict[Word, Scalar]) -> "Poly":
        poly = cls.__new__(cls)
        poly.domain = domain
        poly.terms = terms
        poly._hash = None
        return poly

    # -- constructors -------------------------------------------------------------
    @staticmethod
    def zero(domain: Domain) -> "Poly":
        return Poly._raw(domain, {})

    @staticmethod
    def constant(value: Number, domain: Domain) -> "Poly":
        return Poly(domain, {EMPTY_WORD: value})

    @staticmethod
    def one(domain: Domain) -> "Poly":
        return Poly.constant(1, domain)

    @staticmethod
    def monomial(word: Word, domain: Domain, coeff: Number = 1) -> "Poly":
        return Poly(domain, {tuple(word): coeff})

    @staticmethod
    def generator(i: int, domain: Domain) -> "Poly":
        return Poly.monomial((i,), domain)

    # -- inspection -----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def words(self):
        return self.terms.keys()

    def coefficient(self, word: Word) -> Scalar:
        return self.terms.get(tuple(word), self.domain.zero())

    def constant_term(self) -> Scalar:
        return self.coefficient(EMPTY_WORD)

    def is_constant(self) -> bool:
        return all(not w for w in self.terms)

    def sorted_words(self, alphabet: Alphabet, descending: bool = True) -> List[Word]:
        return sorted(self.terms, key=alphabet.word_key, reverse=descending)

    def leading_word(self, alphabet: Alphabet) -> Word:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading word")
        return max(self.terms, key=alphabet.word_key)

    def leading_coefficient(self, alphabet: Alphabet) -> Scalar:
        return self.terms[self.leading_word(alphabet)]

    def max_weight(self, alphabet: Alphabet) -> int:
        """Filtration degree; -1 for the zero polynomial."""
        return max((word_weight(w, alphabet) for w in self.terms), default=-1)

    def homogeneous_component(self, weight: int, alphabet: Alphabet) -> "Poly":
        return Poly._raw(self.domain, {w: c for w, c in self.terms.items() if word_weight(w, alphabet) == weight})

    def top_component(self, alphabet: Alphabet) -> "Poly":
        return self.homogeneous_component(self.max_weight(alphabet), alphabet)

    def is_parity_homogeneous(self, alphabet: Alphabet) -> bool:
        return len({alphabet.word_parity(w) for w in self.terms}) <= 1

    def parity(self, alphabet: Alphabet) -> int:
        parities = {alphabet.word_parity(w) for w in self.terms}
        return parities.pop() if len(parities) == 1 else 0

    def generators_used(self) -> set:
        return {i for w in self.terms for i in w}

    # -- arithmetic -------------------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if other.domain != self.domain:
            raise DomainMismatch(f"cannot combine polynomials over {self.domain} and {other.domain}",
                                 left=str(self.domain), right=str(other.domain))

    def _as_poly(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return Poly.constant(other, self.domain)
        return None

    def __add__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w)
            s = c if s is None else s + c
            if s:
                terms[w] = s
            else:
                terms.pop(w, None)
        return Poly._raw(self.domain, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.domain, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Number) -> "Poly":
        c = _coerce(self.domain, c)
        if not c:
            return Poly.zero(self.domain)
        return Poly._raw(self.domain, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            return free_mul(self, other)
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        result = Poly.one(self.domain)
        for _ in range(n):
            result = free_mul(result, self)
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.domain == other.domain and self.terms == other.terms
        if isinstance(other, int):
            return self == Poly.constant(other, self.domain)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.domain, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.domain}, {len(self.terms)} terms)"

    # -- transformations ----------------------------------------------------------------
    def map_coefficients(self, fn: Callable[[Scalar], Scalar], domain: Domain) -> "Poly":
        return Poly(domain, {w: fn(c) for w, c in self.terms.items()})

    def lift(self, domain: Domain) -> "Poly":
        return self.map_coefficients(lambda c: c.lift(domain), domain)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace generator i by images[i] in the free algebra (no reduction)."""
        result = Poly.zero(self.domain)
        for word, c in self.terms.items():
            term = Poly.constant(c, self.domain)
            for i in word:
                term = free_mul(term, images[i])
            result = result + term
        return result

    def to_string(self, alphabet: Alphabet) -> str:
        """Render in the relation expression syntax, largest monomial first."""
        if not self.terms:
            return "0"
        parts = []
        for word in self.sorted_words(alphabet):
            c = self.terms[word]
            mono = alphabet.format_word(word) if word else ""
            text = str(c)
            if " " in text:
                text = f"({text})"
            if not mono:
                parts.append(text)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{text}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def free_mul(p: Poly, q: Poly) -> Poly:
    """Product in the free algebra: concatenate words and extend bilinearly."""
    p._check(q)
    terms: Dict[Word, Scalar] = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            w = u + v
            c = a * b
            s = terms.get(w)
            s = c if s is None else s + c
            if s:
                terms[w] = s
            else:
                terms.pop(w, None)
    return Poly._raw(p.domain, terms)


def linear_combination(pairs: Iterable[Tuple[Number, Poly]], domain: Domain) -> Poly:
    result = Poly.zero(domain)
    for c, poly in pairs:
        result = result + poly.scale(c)
    return result
