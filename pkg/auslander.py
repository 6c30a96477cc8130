"""
The element f_G, truncated membership in the ideal (f_G) of A#G, pertinency
certificates, quotient growth and the Auslander map a#g -> (b -> a g(b)).

All searches are bounded: a negative answer only means nothing was found within
the weight bound.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from action import FiniteGroup, SkewPoly, is_small, skew_mul
from congenial import gk_estimate
from errors import NcfiltError, WitnessMismatch
from expressions import parse_scalar
from linalg import EchelonBasis
from ncpoly import Poly, Word
from reports import GeneratorCertificate, PertinencyCertificate
from scalars import Scalar

logger = logging.getLogger(__name__)

Sandwich = Tuple[Word, Word, int]


def f_G(group: FiniteGroup) -> SkewPoly:
    """sum over g in G of 1#g."""
    one = group.handle.domain.one()
    return SkewPoly(group, {((), g): one for g in range(group.order)})


def sandwich(group: FiniteGroup, a: Word, b: Word, h: int) -> SkewPoly:
    """(a#e) f_G (b#h) = sum_g a g(b) # gh."""
    handle = group.handle
    domain = handle.domain
    left = Poly.monomial(a, domain)
    terms: Dict[Tuple[Word, int], Scalar] = {}
    zero = domain.zero()
    for g, element in enumerate(group.elements):
        gh = group.table[g][h]
        for word, c in handle.multiply(left, element.apply_word(b)).items():
            terms[(word, gh)] = terms.get((word, gh), zero) + c
    return SkewPoly(group, terms)


@dataclass
class MembershipWitness:
    """target = sum coeff * (u#e) f_G (v#h) over the recorded sandwiches."""

    target: SkewPoly
    terms: List[Tuple[Sandwich, Scalar]]
    bound: int

    def expand(self) -> SkewPoly:
        group = self.target.group
        f = f_G(group)
        total = SkewPoly.zero(group)
        for (a, b, h), c in self.terms:
            u = SkewPoly.monomial(group, a, 0)
            v = SkewPoly.monomial(group, b, h)
            total = total + skew_mul(skew_mul(u, f), v).scale(c)
        return total

    def verify(self, bound: Optional[int] = None) -> bool:
        """Re-expand through skew_mul; True when the sum reproduces the target within the bound."""
        bound = self.bound if bound is None else bound
        handle = self.target.group.handle
        if any(handle.word_weight(a) + handle.word_weight(b) > bound for (a, b, _), _ in self.terms):
            return False
        return self.expand() == self.target

    def to_rows(self) -> List[Tuple[str, str, str, str, str]]:
        group = self.target.group
        alphabet = group.handle.alphabet
        return [(alphabet.format_word(a), "e", alphabet.format_word(b), group.labels[h], str(c))
                for (a, b, h), c in self.terms]


class IdealSpan:
    """
    Span of the sandwiches (a#e) f_G (b#h) with weight(a) + weight(b) <= bound.

    Columns are inserted in the order (weight(a) + weight(b), a, b, h), so the witnesses
    and the rank profile by weight are reproducible.
    """

    def __init__(self, group: FiniteGroup, bound: int):
        handle = group.handle
        handle.require_certified(2 * bound, purpose=f"the ideal (f_G) up to weight {bound}")
        self.group = group
        self.bound = bound
        alphabet = handle.alphabet
        self.basis = EchelonBasis(handle.domain, key=lambda c: (alphabet.word_key(c[0]), c[1]))
        words = handle.normal_words(bound)
        columns = []
        for a in words:
            wa = handle.word_weight(a)
            for b in words:
                s = wa + handle.word_weight(b)
                if s > bound:
                    continue
                for h in range(group.order):
                    columns.append((s, alphabet.word_key(a), alphabet.word_key(b), h, a, b))
        columns.sort(key=lambda col: col[:4])
        logger.info(f"Assembling {len(columns)} sandwiches of weight <= {bound} for a group of order {group.order}")
        self.rank_by_weight: List[int] = []
        current = 0
        for s, _, _, h, a, b in columns:
            while current < s:
                self.rank_by_weight.append(self.basis.rank)
                current += 1
            self.basis.add(dict(sandwich(group, a, b, h).items()), label=(a, b, h))
        while current <= bound:
            self.rank_by_weight.append(self.basis.rank)
            current += 1

    def express(self, target: SkewPoly) -> Optional[MembershipWitness]:
        combo = self.basis.express(dict(target.items()))
        if combo is None:
            return None
        alphabet = self.group.handle.alphabet
        terms = sorted(combo.items(), key=lambda item: (alphabet.word_key(item[0][0]),
                                                        alphabet.word_key(item[0][1]), item[0][2]))
        return MembershipWitness(target, terms, self.bound)


def ideal_membership(target: SkewPoly, group: FiniteGroup, bound: int,
                     span: Optional[IdealSpan] = None) -> Optional[MembershipWitness]:
    """
    Look for target in the span of sandwiches of weight <= bound; None means nothing was found.

    Raises:
        WitnessMismatch: the solver's combination does not re-expand to the target.
    """
    if target.weight() > bound:
        return None
    span = span if span is not None and span.bound == bound else IdealSpan(group, bound)
    witness = span.express(target)
    if witness is None:
        return None
    if not witness.verify():
        raise WitnessMismatch(f"membership witness for {target.to_string()} does not re-expand",
                              target=target.to_string())
    return witness


@dataclass
class Inconclusive:
    """Bounded search found no exponent for some generators; never a disproof."""

    failed: List[str]
    exponents: Dict[str, int]
    bound: int
    cap: int
    small: bool
    note: str = "bounded search only; p(A,G) < 2 is not claimed"

    def to_dict(self) -> dict:
        return {"status": "Inconclusive", "failed_generators": self.failed, "exponents": self.exponents,
                "bound": self.bound, "exponent_cap": self.cap, "small": self.small, "note": self.note}


def pertinency_certificate(group: FiniteGroup, cap: int, bound: int
                           ) -> Union[PertinencyCertificate, Inconclusive]:
    """
    For each generator x of positive weight find the least N <= cap with x^N#e in (f_G).

    Success for every generator means (A#G)/(f_G) is finite-dimensional, so its GK
    dimension is 0 and p(A,G) = GKdim A.
    """
    handle = group.handle
    alphabet = handle.alphabet
    span = IdealSpan(group, bound)
    certificates = []
    exponents: Dict[str, int] = {}
    failed = []
    for index, name in enumerate(alphabet.names):
        weight = alphabet.weights[index]
        if weight < 1:
            continue
        found = None
        for n in range(1, cap + 1):
            if n * weight > bound:
                break
            target = SkewPoly.from_poly(group, handle.generator(index) ** n, 0)
            witness = ideal_membership(target, group, bound, span)
            if witness is not None:
                found = (n, witness)
                break
        if found is None:
            failed.append(name)
            logger.info(f"No power {name}^N, N <= {cap}, found in (f_G) at bound {bound}")
            continue
        n, witness = found
        exponents[name] = n
        certificates.append(GeneratorCertificate(generator=name, exponent=n, witness=witness.to_rows(), bound=bound))
    small = is_small(group)
    if failed:
        return Inconclusive(failed, exponents, bound, cap, small)
    gk = gk_estimate(handle)
    conclusion = f"quotient finite-dimensional => GKdim (A#G)/(f_G) = 0 => p(A,G) = GKdim A = {gk}"
    auslander = None
    if gk >= 2:
        auslander = "p(A,G) >= 2 => the Auslander map is an isomorphism for this pair, per the pertinency criterion"
    return PertinencyCertificate(group=group.name or ",".join(group.generator_names) or "trivial",
                                 group_order=group.order, group_elements=group.labels, bound=bound,
                                 exponent_cap=cap, generators=certificates, gk_dimension=gk, small=small,
                                 conclusion=conclusion, auslander=auslander)


def verify_certificate(certificate: Union[PertinencyCertificate, dict], group: FiniteGroup) -> bool:
    """
    Re-expand every witness of a certificate without any solver state.

    Raises:
        WitnessMismatch: a witness does not reproduce generator^exponent # e.
    """
    if isinstance(certificate, dict):
        certificate = PertinencyCertificate.model_validate(certificate)
    handle = group.handle
    alphabet = handle.alphabet
    if certificate.group_order != group.order:
        raise WitnessMismatch(f"certificate is for a group of order {certificate.group_order}, not {group.order}",
                              expected=certificate.group_order, found=group.order)
    covered = [entry.generator for entry in certificate.generators]
    required = [name for index, name in enumerate(alphabet.names) if alphabet.weights[index] >= 1]
    if len(set(covered)) != len(covered) or sorted(covered) != sorted(required):
        raise WitnessMismatch(f"certificate covers {covered}, expected each of {required} exactly once",
                              expected=required, found=covered)
    for entry in certificate.generators:
        if not 1 <= entry.exponent <= certificate.exponent_cap:
            raise WitnessMismatch(f"exponent {entry.exponent} for {entry.generator} is outside "
                                  f"1..{certificate.exponent_cap}", generator=entry.generator, exponent=entry.exponent)
        index = alphabet.index(entry.generator)
        target = SkewPoly.from_poly(group, handle.generator(index) ** entry.exponent, 0)
        terms = []
        try:
            for u_word, u_group, v_word, v_group, coeff in entry.witness:
                # (a#g) f_G = (a#e) f_G, so only the label is validated
                group.index_of(u_group)
                terms.append(((alphabet.parse_word(u_word), alphabet.parse_word(v_word), group.index_of(v_group)),
                              parse_scalar(coeff, handle.domain)))
        except NcfiltError as exc:
            raise WitnessMismatch(f"certificate entry for {entry.generator} is malformed: {exc.message}",
                                  generator=entry.generator) from None
        witness = MembershipWitness(target, terms, entry.bound)
        if not witness.verify():
            raise WitnessMismatch(f"witness for {entry.generator}^{entry.exponent} does not re-expand to the target",
                                  generator=entry.generator, exponent=entry.exponent)
    logger.info(f"Certificate for {len(certificate.generators)} generators re-verified")
    return True


@dataclass
class GrowthSeries:
    dims: List[int]
    bound: int
    upper: List[int] = field(default_factory=list)

    @property
    def eventually_constant(self) -> bool:
        return len(self.dims) >= 2 and self.dims[-1] == self.dims[-2]

    def to_dict(self) -> dict:
        return {"dims": self.dims, "bound": self.bound, "upper_bounds": self.upper,
                "evidence": "GKdim-0 evidence" if self.eventually_constant else "growing"}


def quotient_growth(group: FiniteGroup, bound: int, span: Optional[IdealSpan] = None) -> GrowthSeries:
    """dim of (F_n#G) modulo the truncated ideal span, n = 0..bound."""
    if bound < 0:
        raise ValueError(f"bound must be non-negative, got {bound}")
    span = span if span is not None and span.bound == bound else IdealSpan(group, bound)
    handle = group.handle
    upper = [group.order * handle.dim_upto(n) for n in range(bound + 1)]
    dims = [upper[n] - span.rank_by_weight[n] for n in range(bound + 1)]
    return GrowthSeries(dims, bound, upper)


def auslander_apply(u: SkewPoly, b: Poly) -> Poly:
    """gamma(u)(b) = sum over terms a#g of a g(b), in normal form."""
    group = u.group
    handle = group.handle
    b = handle.normal_form(b)
    result = Poly.zero(handle.domain)
    for (a, g), c in u.items():
        image = group.elements[g].apply(b)
        result = result + handle.multiply(Poly.monomial(a, handle.domain, c), image)
    return result


@dataclass
class InjectivityReport:
    N: int
    M: int
    source_dim: int
    rank: int
    kernel_dim: int
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        doc = {"N": self.N, "M": self.M, "source_dim": self.source_dim, "rank": self.rank,
               "kernel_dim": self.kernel_dim, "injective": self.kernel_dim == 0}
        if self.witness:
            doc["kernel_witness"] = self.witness
        return doc


def truncated_injectivity(group: FiniteGroup, N: int, M: int) -> InjectivityReport:
    """
    Kernel of F_N#G -> Hom(F_M, F_{N+M}) given by the Auslander map.

    A zero kernel at every tested (N, M) is evidence of injectivity, not a proof.
    """
    if N < 0 or M < 0:
        raise ValueError(f"weights must be non-negative, got N={N}, M={M}")
    handle = group.handle
    handle.require_certified(2 * (N + M), purpose=f"the Auslander map on weights {N}, {M}")
    domain = handle.domain
    alphabet = handle.alphabet
    tests = handle.normal_words(M)
    sources = [(a, g) for a in handle.normal_words(N) for g in range(group.order)]
    basis = EchelonBasis(domain, key=lambda c: (c[0], alphabet.word_key(c[1])))
    kernel_dim = 0
    witness = None
    for a, g in sources:
        element = SkewPoly.monomial(group, a, g)
        vector = {}
        for t, b in enumerate(tests):
            for word, c in auslander_apply(element, Poly.monomial(b, domain)).items():
                vector[(t, word)] = c
        if not basis.add(vector, label=(a, g)):
            kernel_dim += 1
            if witness is None:
                combo = basis.reduce(vector, {(a, g): domain.one()})[1]
                witness = SkewPoly(group, combo).to_string()
    rank = len(sources) - kernel_dim
    logger.info(f"Auslander map on F_{N}#G against F_{M}: rank {rank}, kernel {kernel_dim}")
    return InjectivityReport(N, M, len(sources), rank, kernel_dim, witness)
