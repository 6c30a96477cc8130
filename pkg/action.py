"""
Filtered automorphisms, finite groups of them, and the skew group algebra A#G.

An automorphism is given by generator images and verified by pushing every relation
through normal form. Groups are generated by breadth-first closure; elements are
compared on their normal-form generator images.
"""
import logging
from collections import deque
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import config
from errors import (AxiomViolation, CapExceeded, DomainMismatch, FiltrationViolated, NotLinearizable,
                    OrderNotInvertible, ParseError, RelationNotPreserved, UnknownGenerator)
from linalg import EchelonBasis, determinant, rank
from ncpoly import Poly, Word
from presentation import AlgebraHandle
from scalars import Scalar

logger = logging.getLogger(__name__)


class AutoMap:
    """A filtration-preserving endomorphism given by its generator images."""

    def __init__(self, handle: AlgebraHandle, images: Sequence[Poly], name: Optional[str] = None,
                 strict_grading: bool = False, verify: bool = True, order_cap: Optional[int] = None):
        if len(images) != len(handle.alphabet):
            raise ValueError(f"need {len(handle.alphabet)} images, got {len(images)}")
        self.handle = handle
        self.name = name
        self.images: Tuple[Poly, ...] = tuple(handle.normal_form(img) for img in images)
        self.strict_grading = strict_grading
        self._word_cache: Dict[Word, Poly] = {(): Poly.one(handle.domain)}
        self.verified = False
        self.order: Optional[int] = None
        if verify:
            self._verify()
            self.verified = True
            self.order = self._compute_order(order_cap if order_cap is not None else config.ORDER_CAP)

    @classmethod
    def identity(cls, handle: AlgebraHandle) -> "AutoMap":
        images = [handle.generator(i) for i in range(len(handle.alphabet))]
        auto = cls(handle, images, name="e", verify=False)
        auto.verified = True
        auto.order = 1
        return auto

    def _verify(self) -> None:
        alphabet = self.handle.alphabet
        for i, image in enumerate(self.images):
            weight = image.max_weight(alphabet)
            if weight > alphabet.weights[i]:
                raise FiltrationViolated(f"image of {alphabet.names[i]} has weight {weight} > {alphabet.weights[i]}",
                                         generator=alphabet.names[i], image=image.to_string(alphabet))
            if self.strict_grading and image and any(
                    self.handle.word_weight(w) != alphabet.weights[i] for w in image.words()):
                raise FiltrationViolated(f"image of {alphabet.names[i]} is not homogeneous of weight "
                                         f"{alphabet.weights[i]}", generator=alphabet.names[i],
                                         image=image.to_string(alphabet))
        for index, relation in enumerate(self.handle.presentation.relations):
            residue = self.apply(relation)
            if residue:
                raise RelationNotPreserved(
                    f"relation {index} ({relation.to_string(alphabet)}) maps to {residue.to_string(alphabet)}",
                    relation=index, normal_form=residue.to_string(alphabet))

    def _compute_order(self, cap: int) -> Optional[int]:
        power = self
        for k in range(1, cap + 1):
            if power.is_identity():
                return k
            power = self.compose(power)
        logger.info(f"Order of {self.name or 'automorphism'} exceeds {cap}; recorded as unknown")
        return None

    @property
    def key(self) -> Tuple[Poly, ...]:
        return self.images

    def is_identity(self) -> bool:
        return all(img == self.handle.generator(i) for i, img in enumerate(self.images))

    def apply_word(self, word: Word) -> Poly:
        cached = self._word_cache.get(word)
        if cached is not None:
            return cached
        image = self.handle.multiply(self.apply_word(word[:-1]), self.images[word[-1]])
        self._word_cache[word] = image
        return image

    def apply(self, p: Poly) -> Poly:
        result = Poly.zero(self.handle.domain)
        for word, c in p.items():
            result = result + self.apply_word(word).scale(c)
        return result

    __call__ = apply

    def compose(self, other: "AutoMap") -> "AutoMap":
        """self o other: apply other first."""
        images = [self.apply(img) for img in other.images]
        product = AutoMap(self.handle, images, verify=False)
        product.verified = self.verified and other.verified
        return product

    def linear_part(self) -> Tuple[List[int], List[List[Scalar]]]:
        """Matrix of the action on the span of the weight-1 generators (columns are images)."""
        alphabet = self.handle.alphabet
        domain = self.handle.domain
        slots = [i for i, w in enumerate(alphabet.weights) if w == 1]
        if not slots:
            raise NotLinearizable("there are no weight-1 generators")
        position = {g: k for k, g in enumerate(slots)}
        matrix = [[domain.zero()] * len(slots) for _ in slots]
        for col, i in enumerate(slots):
            for word, c in self.images[i].items():
                if self.handle.word_weight(word) < 1:
                    continue
                if len(word) != 1 or word[0] not in position:
                    raise NotLinearizable(f"image of {alphabet.names[i]} is not linear in the weight-1 generators",
                                          generator=alphabet.names[i],
                                          image=self.images[i].to_string(alphabet))
                matrix[position[word[0]]][col] = c
        return slots, matrix

    def to_dict(self) -> dict:
        alphabet = self.handle.alphabet
        doc = {"images": {alphabet.names[i]: img.to_string(alphabet) for i, img in enumerate(self.images)},
               "verified": self.verified, "order": self.order}
        if self.name:
            doc["name"] = self.name
        return doc


def mk_automorphism(handle: AlgebraHandle, images: Union[Mapping[str, Union[str, Poly]], Sequence[Poly]],
                    name: Optional[str] = None, strict_grading: bool = False,
                    order_cap: Optional[int] = None) -> AutoMap:
    """
    Build and verify an automorphism from generator images.

    Raises:
        RelationNotPreserved: a relation does not map to zero.
        FiltrationViolated: an image has larger weight than its generator.
    """
    alphabet = handle.alphabet
    if isinstance(images, Mapping):
        for key in images:
            alphabet.index(key)
        missing = [n for n in alphabet.names if n not in images]
        if missing:
            raise UnknownGenerator(f"no image given for {', '.join(missing)}", missing=missing)
        polys = []
        for n in alphabet.names:
            value = images[n]
            polys.append(handle.presentation.parse(value) if isinstance(value, str) else value)
    else:
        polys = list(images)
    auto = AutoMap(handle, polys, name=name, strict_grading=strict_grading, order_cap=order_cap)
    logger.info(f"Verified automorphism {name or ''} of order {auto.order}")
    return auto


def linear_determinant(phi: AutoMap) -> Scalar:
    """Determinant of the induced map on the weight-1 generators."""
    _, matrix = phi.linear_part()
    return determinant(matrix, phi.handle.domain)


def _format_label(letters: Sequence[str]) -> str:
    if not letters:
        return "e"
    parts = []
    start = 0
    for pos in range(1, len(letters) + 1):
        if pos == len(letters) or letters[pos] != letters[start]:
            count = pos - start
            parts.append(letters[start] if count == 1 else f"{letters[start]}^{count}")
            start = pos
    return "*".join(parts)


class FiniteGroup:
    """Closed set of automorphisms with multiplication and inverse tables; index 0 is the identity."""

    def __init__(self, handle: AlgebraHandle, elements: Sequence[AutoMap], labels: Sequence[str],
                 generator_names: Sequence[str] = (), name: Optional[str] = None):
        self.handle = handle
        self.elements = list(elements)
        self.labels = list(labels)
        self.generator_names = list(generator_names)
        self.name = name
        self._index = {g.key: i for i, g in enumerate(self.elements)}
        self._label_index = {label: i for i, label in enumerate(self.labels)}
        self.table = [[self._lookup(a.compose(b)) for b in self.elements] for a in self.elements]
        self.inverse = [row.index(0) for row in self.table]
        self._spot_check()
        domain = handle.domain
        self.order_invertible = domain.characteristic == 0 or self.order % domain.characteristic != 0

    def _lookup(self, element: AutoMap) -> int:
        index = self._index.get(element.key)
        if index is None:
            raise AxiomViolation("the element set is not closed under composition", axiom="closure")
        return index

    def _spot_check(self) -> None:
        n = self.order
        step = max(1, n // 4)
        for a in range(0, n, step):
            for b in range(0, n, step):
                for c in range(0, n, step):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise AxiomViolation(f"multiplication is not associative at {a}, {b}, {c}",
                                             axiom="associativity", triple=[a, b, c])

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def index_of(self, label: str) -> int:
        label = label.strip()
        if label in ("e", "1", "id"):
            return 0
        try:
            return self._label_index[label]
        except KeyError:
            raise UnknownGenerator(f"unknown group element {label!r}", element=label, known=self.labels) from None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "generators": self.generator_names,
            "elements": self.labels,
            "multiplication": self.table,
            "inverse": self.inverse,
            "order_invertible": self.order_invertible,
        }


def generate_group(gens: Sequence[AutoMap], cap: Optional[int] = None, handle: Optional[AlgebraHandle] = None,
                   name: Optional[str] = None) -> FiniteGroup:
    """
    Breadth-first closure of the generators under composition.

    Raises:
        CapExceeded: more than ``cap`` elements were found.
    """
    cap = cap if cap is not None else config.GROUP_CAP
    if handle is None:
        if not gens:
            raise ValueError("an empty generator list needs the algebra handle")
        handle = gens[0].handle
    for g in gens:
        if g.handle is not handle:
            raise DomainMismatch("all generators must act on the same algebra")
        if not g.verified:
            raise RelationNotPreserved("group generators must be verified automorphisms")
    names = [g.name or f"g{i + 1}" for i, g in enumerate(gens)]
    identity = AutoMap.identity(handle)
    elements = [identity]
    words: List[List[str]] = [[]]
    seen = {identity.key: 0}
    queue = deque([0])
    while queue:
        current = queue.popleft()
        for gen_name, gen in zip(names, gens):
            product = elements[current].compose(gen)
            if product.key in seen:
                continue
            if len(elements) >= cap:
                raise CapExceeded(f"group generated by {', '.join(names)} has more than {cap} elements", cap=cap)
            seen[product.key] = len(elements)
            elements.append(product)
            words.append(words[current] + [gen_name])
            queue.append(len(elements) - 1)
    labels = [_format_label(w) for w in words]
    for element, label in zip(elements, labels):
        element.name = label
    logger.info(f"Generated group of order {len(elements)} from {', '.join(names) or 'no generators'}")
    return FiniteGroup(handle, elements, labels, names, name)


# -- skew group algebra -------------------------------------------------------------

class SkewPoly:
    """An element of A#G: a map (normal word, group index) -> nonzero scalar."""

    __slots__ = ("group", "terms")

    def __init__(self, group: FiniteGroup, terms: Optional[Mapping[Tuple[Word, int], Scalar]] = None):
        self.group = group
        self.terms: Dict[Tuple[Word, int], Scalar] = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def monomial(group: FiniteGroup, word: Word, g: int, coeff=1) -> "SkewPoly":
        return SkewPoly(group, {(tuple(word), g): group.handle.domain.coerce(coeff)})

    @staticmethod
    def from_poly(group: FiniteGroup, p: Poly, g: int = 0) -> "SkewPoly":
        p = group.handle.normal_form(p)
        return SkewPoly(group, {(w, g): c for w, c in p.items()})

    @staticmethod
    def zero(group: FiniteGroup) -> "SkewPoly":
        return SkewPoly(group)

    def items(self):
        return self.terms.items()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "SkewPoly") -> None:
        if other.group is not self.group:
            raise DomainMismatch("skew polynomials belong to different groups")

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        terms = dict(self.terms)
        zero = self.group.handle.domain.zero()
        for k, v in other.terms.items():
            terms[k] = terms.get(k, zero) + v
        return SkewPoly(self.group, terms)

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.group, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def scale(self, c) -> "SkewPoly":
        c = self.group.handle.domain.coerce(c)
        return SkewPoly(self.group, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SkewPoly):
            return skew_mul(self, other)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.group is other.group and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def weight(self) -> int:
        return max((self.group.handle.word_weight(w) for w, _ in self.terms), default=-1)

    def component(self, g: int) -> Poly:
        domain = self.group.handle.domain
        return Poly(domain, {w: c for (w, h), c in self.terms.items() if h == g})

    def to_string(self) -> str:
        """``EXPR # label ; EXPR # label`` with group elements in table order."""
        if not self.terms:
            return "0 # e"
        alphabet = self.group.handle.alphabet
        parts = []
        for g in sorted({h for _, h in self.terms}):
            parts.append(f"{self.component(g).to_string(alphabet)} # {self.group.labels[g]}")
        return " ; ".join(parts)

    def __repr__(self) -> str:
        return f"SkewPoly({self.to_string()})"


def parse_skew(text: str, group: FiniteGroup) -> SkewPoly:
    """Parse ``EXPR # label ; EXPR # label``; a piece without ``#`` sits over the identity."""
    result = SkewPoly.zero(group)
    offset = 0
    for piece in text.split(";"):
        expr, sep, label = piece.partition("#")
        if not expr.strip():
            raise ParseError("empty skew term", 1, offset + 1, expected="EXPR # element")
        g = group.index_of(label) if sep else 0
        result = result + SkewPoly.from_poly(group, group.handle.presentation.parse(expr), g)
        offset += len(piece) + 1
    return result


def skew_mul(u: SkewPoly, v: SkewPoly, group: Optional[FiniteGroup] = None) -> SkewPoly:
    """(a#g)(b#h) = a g(b) # gh, extended bilinearly."""
    u._check(v)
    G = group or u.group
    handle = G.handle
    domain = handle.domain
    terms: Dict[Tuple[Word, int], Scalar] = {}
    zero = domain.zero()
    for (a, g), c1 in u.terms.items():
        act = G.elements[g]
        left = Poly.monomial(a, domain)
        for (b, h), c2 in v.terms.items():
            gh = G.table[g][h]
            product = handle.multiply(left, act.apply_word(b))
            c = c1 * c2
            for word, d in product.items():
                key = (word, gh)
                terms[key] = terms.get(key, zero) + c * d
    return SkewPoly(G, terms)


def skew_one(group: FiniteGroup) -> SkewPoly:
    return SkewPoly.monomial(group, (), 0)


def reynolds(group: FiniteGroup, a: Poly) -> Poly:
    """
    |G|^-1 sum_g g(a), in normal form.

    Raises:
        OrderNotInvertible: the characteristic divides |G|.
    """
    if not group.order_invertible:
        raise OrderNotInvertible(f"|G| = {group.order} is not invertible in {group.handle.domain}",
                                 order=group.order, domain=str(group.handle.domain))
    a = group.handle.normal_form(a)
    total = Poly.zero(group.handle.domain)
    for g in group.elements:
        total = total + g.apply(a)
    return total.scale(group.handle.domain.coerce(group.order).inverse())


def invariant_basis(group: FiniteGroup, n: int) -> List[Poly]:
    """A basis of the invariants in F_n: the image of the Reynolds operator on the normal words."""
    handle = group.handle
    handle.require_certified(2 * n, purpose=f"invariants of weight <= {n}")
    alphabet = handle.alphabet
    basis = EchelonBasis(handle.domain, key=alphabet.word_key, track=False)
    for word in handle.normal_words(n):
        image = reynolds(group, Poly.monomial(word, handle.domain))
        basis.add(dict(image.items()))
    rows = sorted(basis.rows.items(), key=lambda item: alphabet.word_key(item[0]))
    return [Poly(handle.domain, vec) for _, (vec, _) in rows]


def invariant_series(group: FiniteGroup, n: int) -> List[int]:
    """Number of invariant basis elements whose leading word has weight k, k = 0..n."""
    counts = [0] * (n + 1)
    for inv in invariant_basis(group, n):
        counts[group.handle.word_weight(inv.leading_word(group.handle.alphabet))] += 1
    return counts


def reflections(group: FiniteGroup) -> List[str]:
    """Labels of the elements whose linear part L satisfies rank(L - I) = 1."""
    domain = group.handle.domain
    found = []
    for label, g in zip(group.labels[1:], group.elements[1:]):
        try:
            _, matrix = g.linear_part()
        except NotLinearizable:
            logger.debug(f"Element {label} has no linear part; not counted as a reflection")
            continue
        shifted = [[v - (1 if i == j else 0) for j, v in enumerate(row)] for i, row in enumerate(matrix)]
        if rank(shifted, domain) == 1:
            found.append(label)
    return found


def is_small(group: FiniteGroup) -> bool:
    return not reflections(group)
