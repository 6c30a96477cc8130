"""
Rewrite systems for presented algebras.

Relations are oriented into rules ``lhs -> rhs`` (lhs the leading word), words are
reduced leftmost-first with the lowest-index rule, and overlap ambiguities are
resolved both ways to certify that irreducible words form a basis up to a weight
bound. Irreducible words of weight <= n are counted by a suffix-pruned search.
"""
import heapq
import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import config
from errors import (ConfluenceNotEstablished, DuplicateLhs, InfiniteFiltrationPiece, NonTerminatingReduction,
                    NotOrientable)
from ncpoly import Alphabet, Poly, Word, word_weight
from scalars import Domain, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: Poly


class ConfluenceStatus(str, Enum):
    UNCHECKED = "Unchecked"
    CONFLUENT = "ConfluentUpTo"
    NONCONFLUENT = "Nonconfluent"


@dataclass
class OverlapWitness:
    """The first ambiguity whose two reductions disagree."""

    kind: str
    word: Word
    rules: Tuple[int, ...]
    position: int
    difference: Poly

    def to_dict(self, alphabet: Alphabet) -> dict:
        return {
            "kind": self.kind,
            "word": alphabet.format_word(self.word),
            "rules": list(self.rules),
            "position": self.position,
            "difference": self.difference.to_string(alphabet),
        }


@dataclass
class ConfluenceReport:
    status: ConfluenceStatus
    bound: int
    overlaps_checked: int = 0
    skipped: int = 0
    witness: Optional[OverlapWitness] = None

    @property
    def confluent(self) -> bool:
        return self.status is ConfluenceStatus.CONFLUENT

    @property
    def complete(self) -> bool:
        """No overlap was left out by the bound, so the result holds in every weight."""
        return self.skipped == 0

    def to_dict(self, alphabet: Alphabet) -> dict:
        doc = {
            "status": self.status.value,
            "bound": self.bound,
            "overlaps_checked": self.overlaps_checked,
            "complete": self.complete,
        }
        if self.witness is not None:
            doc["witness"] = self.witness.to_dict(alphabet)
        return doc


class RewriteSystem:
    """An immutable rule list plus a bounded, lock-protected normal-form memo."""

    def __init__(self, alphabet: Alphabet, domain: Domain, rules: Sequence[RewriteRule],
                 memo_cap: Optional[int] = None, *, check_order: bool = True):
        self.alphabet = alphabet
        self.domain = domain
        self.rules: Tuple[RewriteRule, ...] = tuple(rules)
        self.memo_cap = memo_cap if memo_cap is not None else config.MEMO_CAP
        seen: Dict[Word, int] = {}
        for index, rule in enumerate(self.rules):
            if not rule.lhs:
                raise NotOrientable(f"rule {index} has an empty left side", rule=index)
            if rule.lhs in seen:
                raise DuplicateLhs(f"rules {seen[rule.lhs]} and {index} share the left side "
                                   f"{alphabet.format_word(rule.lhs)}",
                                   lhs=alphabet.format_word(rule.lhs), rules=[seen[rule.lhs], index])
            seen[rule.lhs] = index
        self.unordered_rules = [i for i, rule in enumerate(self.rules) if not self._rule_is_ordered(rule)]
        if check_order and self.unordered_rules:
            bad = self.rules[self.unordered_rules[0]]
            raise NotOrientable(f"rule {self.unordered_rules[0]} has a right side monomial not smaller than "
                                f"{alphabet.format_word(bad.lhs)}", rule=self.unordered_rules[0])
        self._by_first: Dict[int, List[int]] = {}
        self._by_last: Dict[int, List[int]] = {}
        for index, rule in enumerate(self.rules):
            self._by_first.setdefault(rule.lhs[0], []).append(index)
            self._by_last.setdefault(rule.lhs[-1], []).append(index)
        self.status = ConfluenceStatus.UNCHECKED
        self.report: Optional[ConfluenceReport] = None
        self._memo: Dict[Word, Poly] = {}
        self._memo_lock = threading.Lock()

    @classmethod
    def unchecked(cls, alphabet: Alphabet, domain: Domain, rules: Sequence[RewriteRule]) -> "RewriteSystem":
        """Build without the order-compatibility check, for nontermination experiments."""
        return cls(alphabet, domain, rules, check_order=False)

    def _rule_is_ordered(self, rule: RewriteRule) -> bool:
        key = self.alphabet.word_key(rule.lhs)
        return all(self.alphabet.word_key(w) < key for w in rule.rhs.words())

    @property
    def order_compatible(self) -> bool:
        return not self.unordered_rules

    def __len__(self) -> int:
        return len(self.rules)

    # -- matching -----------------------------------------------------------------
    def find_match(self, word: Word) -> Optional[Tuple[int, int]]:
        """Leftmost position holding a rule lhs, lowest rule index first."""
        for pos in range(len(word)):
            for index in self._by_first.get(word[pos], ()):
                lhs = self.rules[index].lhs
                if word[pos:pos + len(lhs)] == lhs:
                    return pos, index
        return None

    def is_reducible(self, word: Word) -> bool:
        return self.find_match(word) is not None

    def _ends_with_lhs(self, word: Word) -> bool:
        for index in self._by_last.get(word[-1], ()):
            lhs = self.rules[index].lhs
            if len(lhs) <= len(word) and word[len(word) - len(lhs):] == lhs:
                return True
        return False

    # -- reduction ----------------------------------------------------------------
    def _heap_key(self, word: Word) -> tuple:
        weight, length, ranks = self.alphabet.word_key(word)
        return -weight, -length, tuple(-r for r in ranks)

    def _reduce(self, start: Dict[Word, Scalar], origin: Optional[Word] = None) -> Dict[Word, Scalar]:
        guard = not self.order_compatible
        pending: Dict[Word, Scalar] = dict(start)
        heap = [(self._heap_key(w), w) for w in pending]
        heapq.heapify(heap)
        result: Dict[Word, Scalar] = {}
        popped = set()

        def add(target: Dict[Word, Scalar], word: Word, coeff: Scalar) -> bool:
            current = target.get(word)
            if current is None:
                target[word] = coeff
                return True
            target[word] = current + coeff
            return False

        while heap:
            _, word = heapq.heappop(heap)
            coeff = pending.pop(word, None)
            if coeff is None or not coeff:
                continue
            if guard:
                popped.add(word)
            cached = self._memo.get(word)
            if cached is not None:
                for w, c in cached.items():
                    add(result, w, c * coeff)
                continue
            match = self.find_match(word)
            if match is None:
                add(result, word, coeff)
                continue
            pos, index = match
            rule = self.rules[index]
            prefix, suffix = word[:pos], word[pos + len(rule.lhs):]
            for u, c in rule.rhs.items():
                new_word = prefix + u + suffix
                if guard and (new_word in popped or len(new_word) > config.MAX_WORD_LENGTH):
                    add(pending, new_word, c * coeff)
                    state = Poly(self.domain, pending) + Poly(self.domain, result)
                    source = origin if origin is not None else word
                    difference = state - Poly.monomial(source, self.domain)
                    raise NonTerminatingReduction(
                        f"reduction of {self.alphabet.format_word(source)} revisits "
                        f"{self.alphabet.format_word(new_word)}",
                        word=source, difference=difference,
                        revisited=self.alphabet.format_word(new_word))
                if add(pending, new_word, c * coeff):
                    heapq.heappush(heap, (self._heap_key(new_word), new_word))
        return {w: c for w, c in result.items() if c}

    def reduce_word(self, word: Word) -> Poly:
        cached = self._memo.get(word)
        if cached is not None:
            return cached
        terms = self._reduce({word: self.domain.one()}, origin=word)
        nf = Poly._raw(self.domain, terms)
        if len(self._memo) < self.memo_cap:
            with self._memo_lock:
                self._memo[word] = nf
        return nf

    def normal_form(self, p: Poly) -> Poly:
        Poly.zero(self.domain)._check(p)
        if len(p) == 1:
            (word, coeff), = p.items()
            return self.reduce_word(word).scale(coeff)
        result = Poly.zero(self.domain)
        for word, coeff in p.items():
            result = result + self.reduce_word(word).scale(coeff)
        return result

    def multiply(self, p: Poly, q: Poly) -> Poly:
        """Product in the presented algebra."""
        return self.normal_form(p * q)

    def record(self, report: ConfluenceReport) -> None:
        self.report = report
        self.status = report.status

    def certified_for(self, weight: int) -> bool:
        report = self.report
        return (report is not None and report.confluent
                and (report.complete or report.bound >= weight))

    def require_certified(self, weight: int, purpose: str = "a basis") -> None:
        if not self.certified_for(weight):
            held = "unchecked" if self.report is None else f"{self.report.status.value} (bound {self.report.bound})"
            raise ConfluenceNotEstablished(
                f"{purpose} at weight {weight} needs confluence up to weight {weight}; system is {held}",
                needed=weight, status=held)


def orient(relations: Sequence[Poly], alphabet: Alphabet, domain: Optional[Domain] = None,
           memo_cap: Optional[int] = None) -> RewriteSystem:
    """
    Turn each relation into a rule whose lhs is its leading word, coefficient normalized to 1.

    Raises:
        NotOrientable: a relation is zero or constant.
        DuplicateLhs: two relations share a leading word.
    """
    if domain is None:
        if not relations:
            raise ValueError("orienting an empty relation list needs an explicit scalar domain")
        domain = relations[0].domain
    rules = []
    for index, relation in enumerate(relations):
        if relation.is_zero():
            raise NotOrientable(f"relation {index} is zero", relation=index)
        lead = relation.leading_word(alphabet)
        if not lead:
            raise NotOrientable(f"relation {index} is a nonzero constant ({relation.to_string(alphabet)})",
                                relation=index)
        lead_coeff = relation.terms[lead]
        rhs = (Poly.monomial(lead, relation.domain, lead_coeff) - relation).scale(lead_coeff.inverse())
        if lead in rhs.words():
            raise NotOrientable(f"relation {index} keeps its leading word after normalization", relation=index)
        rules.append(RewriteRule(lead, rhs))
    logger.debug(f"Oriented {len(rules)} relations over {alphabet}")
    return RewriteSystem(alphabet, domain, rules, memo_cap)


def normal_form(p: Poly, rs: RewriteSystem) -> Poly:
    return rs.normal_form(p)


def _overlaps(rs: RewriteSystem) -> Iterator[Tuple[str, int, int, int]]:
    """Ambiguities in (i, j, k) order: suffix-prefix overlaps by length, then inclusions."""
    rules = rs.rules
    for i, ri in enumerate(rules):
        li = ri.lhs
        for j, rj in enumerate(rules):
            lj = rj.lhs
            for k in range(1, min(len(li), len(lj))):
                if li[-k:] == lj[:k]:
                    yield "suffix_prefix", i, j, k
            if i != j and len(lj) <= len(li):
                for pos in range(len(li) - len(lj) + 1):
                    if li[pos:pos + len(lj)] == lj:
                        yield "inclusion", i, j, pos


def check_confluence(rs: RewriteSystem, bound: int) -> ConfluenceReport:
    """
    Resolve every overlap ambiguity of weight <= bound both ways.

    Rules that are not order-compatible are audited first by reducing their left
    sides; a reduction loop is reported as a nonconfluence witness.

    Args:
        rs: The rewrite system to check.
        bound: Largest overlap weight examined.

    Returns:
        ConfluenceReport, also recorded as the system's status.
    """
    alphabet, domain = rs.alphabet, rs.domain
    logger.info(f"Checking confluence of {len(rs)} rules up to weight {bound}")
    report = ConfluenceReport(ConfluenceStatus.CONFLUENT, bound)
    try:
        for index in rs.unordered_rules:
            lhs = rs.rules[index].lhs
            rs.reduce_word(lhs)
            report.overlaps_checked += 1

        for kind, i, j, k in _overlaps(rs):
            li, lj = rs.rules[i].lhs, rs.rules[j].lhs
            if kind == "suffix_prefix":
                word = li + lj[k:]
                left = rs.rules[i].rhs * Poly.monomial(lj[k:], domain)
                right = Poly.monomial(li[:-k], domain) * rs.rules[j].rhs
                position = len(li) - k
            else:
                word = li
                left = rs.rules[i].rhs
                right = Poly.monomial(li[:k], domain) * rs.rules[j].rhs * Poly.monomial(li[k + len(lj):], domain)
                position = k
            if word_weight(word, alphabet) > bound:
                report.skipped += 1
                continue
            report.overlaps_checked += 1
            difference = rs.normal_form(left) - rs.normal_form(right)
            if difference:
                report.status = ConfluenceStatus.NONCONFLUENT
                report.witness = OverlapWitness(kind, word, (i, j), position, difference)
                logger.info(f"Overlap {alphabet.format_word(word)} (rules {i}, {j}) does not resolve: "
                            f"{difference.to_string(alphabet)}")
                break
    except NonTerminatingReduction as exc:
        report.status = ConfluenceStatus.NONCONFLUENT
        report.witness = OverlapWitness("nonterminating", exc.word, (), 0, exc.difference)
        logger.info(f"Reduction loop at {alphabet.format_word(exc.word)}: "
                    f"difference {exc.difference.to_string(alphabet)}")
    rs.record(report)
    logger.info(f"Confluence check finished: {report.status.value} after {report.overlaps_checked} overlaps "
                f"({report.skipped} beyond the bound)")
    return report


def normal_words(rs: RewriteSystem, n: int) -> List[Word]:
    """All irreducible words of weight <= n, in increasing monomial order."""
    if n < 0:
        raise ValueError(f"weight bound must be non-negative, got {n}")
    alphabet = rs.alphabet
    weights = alphabet.weights
    found: List[Word] = [()]
    stack: List[Tuple[Word, int]] = [((), 0)]
    while stack:
        word, weight = stack.pop()
        for letter in range(len(alphabet)):
            new_weight = weight + weights[letter]
            if new_weight > n:
                continue
            new_word = word + (letter,)
            if rs._ends_with_lhs(new_word):
                continue
            if len(new_word) > config.MAX_WORD_LENGTH:
                raise InfiniteFiltrationPiece(
                    f"irreducible words of weight <= {n} exceed length {config.MAX_WORD_LENGTH}; "
                    f"the filtration piece looks infinite-dimensional", bound=n,
                    word=alphabet.format_word(new_word))
            found.append(new_word)
            stack.append((new_word, new_weight))
    found.sort(key=alphabet.word_key)
    return found


def dims_by_weight(rs: RewriteSystem, n: int) -> List[int]:
    """Number of irreducible words at each exact weight 0..n."""
    if n < 0:
        raise ValueError(f"weight bound must be non-negative, got {n}")
    counts = [0] * (n + 1)
    for word in normal_words(rs, n):
        counts[word_weight(word, rs.alphabet)] += 1
    return counts


def dim_upto(rs: RewriteSystem, n: int) -> int:
    """
    Dimension of the filtration piece F_n.

    Raises:
        ConfluenceNotEstablished: the system is not certified up to weight 2n.
    """
    rs.require_certified(2 * n, purpose=f"dim F_{n}")
    return len(normal_words(rs, n))
