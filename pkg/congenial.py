"""
Orders, reduction modulo p, centrality witnesses and the congeniality report.

The report checks conditions (1), (2), (3) and (5) of congeniality on finite data;
condition (4), strong noetherianity, is only reported as a labeled growth proxy.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import (ConfluenceNotEstablished, DenominatorVanishes, DomainMismatch, NcfiltError, NoRootOfUnity)
from ncpoly import Poly
from presentation import AlgebraHandle, Presentation, Provenance
from reports import ConditionResult, CongenialityReport
from scalars import Domain, DomainKind, OrderSpec, Scalar, order_generators, reduce_mod_p
from linalg import nullspace
from zoo import associated_graded

logger = logging.getLogger(__name__)

PROXY_LABEL = "strongly noetherian not machine-checkable"


def presentation_order(presentation: Presentation) -> OrderSpec:
    return order_generators(presentation.coefficient_set())


def reduce_presentation(presentation: Presentation, p: int) -> Presentation:
    """
    Reduce every relation coefficient modulo p.

    Raises:
        DenominatorVanishes, NoRootOfUnity: with the relation index and coefficient.
    """
    if p == 2 and any(presentation.alphabet.parities):
        raise DenominatorVanishes("odd generators use y^2 = 1/2 [y,y], which has no meaning modulo 2",
                                  prime=p, reason="odd-square convention")
    target = Domain.prime_field(p)
    relations = []
    for index, relation in enumerate(presentation.relations):
        terms = {}
        for word, c in relation.items():
            try:
                terms[word] = reduce_mod_p(c, p)
            except (DenominatorVanishes, NoRootOfUnity) as exc:
                raise type(exc)(f"relation {index}: coefficient {c} cannot be reduced modulo {p}: {exc.message}",
                                relation=index, coefficient=str(c), prime=p) from None
        relations.append(Poly(target, terms))
    provenance = None
    if presentation.provenance:
        origin = presentation.provenance
        parameters = dict(origin.parameters)
        parameters["prime"] = str(p)
        provenance = Provenance(origin.family, parameters, [], origin.gk_dimension, list(origin.notes),
                                dict(origin.flags))
    return Presentation(presentation.alphabet, relations, target, provenance)


def order_and_reduce(handle: AlgebraHandle, p: int) -> Tuple[OrderSpec, AlgebraHandle]:
    """Extract D from the coefficients, reduce modulo p and re-check confluence at the same bound."""
    order_spec = presentation_order(handle.presentation)
    reduced = reduce_presentation(handle.presentation, p)
    reduced_handle = AlgebraHandle(reduced, bound=handle.bound)
    logger.info(f"Reduced {handle.presentation!r} modulo {p}: {reduced_handle.report.status.value}")
    return order_spec, reduced_handle


@dataclass
class CentralWitness:
    generator: str
    mode: str
    exponents: List[int]
    coefficients: List[Scalar]
    element: Poly

    def to_dict(self, handle: AlgebraHandle) -> dict:
        return {
            "generator": self.generator,
            "mode": self.mode,
            "exponents": self.exponents,
            "coefficients": [str(c) for c in self.coefficients],
            "element": self.element.to_string(handle.alphabet),
        }


def commutator(handle: AlgebraHandle, a: Poly, b: Poly) -> Poly:
    return handle.normal_form(a * b - b * a)


def is_central(handle: AlgebraHandle, z: Poly) -> bool:
    """z commutes with every generator (recomputed directly, no solver involved)."""
    return all(not commutator(handle, z, handle.generator(i)) for i in range(len(handle.alphabet)))


def central_witness(handle: AlgebraHandle, generator: Union[str, int], i_max: int = 1, mode: str = "p_power",
                    n_max: Optional[int] = None) -> Optional[CentralWitness]:
    """
    Search for a nonzero central element built from powers of one generator.

    ``p_power`` mode looks for sum alpha_i a^(p^i), i = 1..i_max; ``power`` mode for a
    combination of a^N, N = 1..n_max. Returns the first kernel vector under deterministic
    pivoting, or None when no combination is central.

    Raises:
        ConfluenceNotEstablished: the commutators exceed the certified weight.
    """
    if handle.domain.kind is not DomainKind.PRIME_FIELD:
        raise DomainMismatch(f"central witnesses are searched over prime fields, not {handle.domain}",
                             domain=str(handle.domain))
    p = handle.domain.characteristic
    index = generator if isinstance(generator, int) else handle.alphabet.index(generator)
    name = handle.alphabet.names[index]
    if mode == "p_power":
        exponents = [p ** i for i in range(1, i_max + 1)]
    elif mode == "power":
        exponents = list(range(1, (n_max or 2 * p) + 1))
    else:
        raise ValueError(f"unknown central witness mode {mode!r}")
    weight = max(handle.alphabet.weights[index], 1)
    top = max(exponents)
    needed = max(2 * top * weight, top * weight + max(handle.alphabet.weights))
    handle.require_certified(needed, purpose=f"central witnesses for {name}^{top}")

    domain = handle.domain
    a = handle.generator(index)
    columns = []
    powers = []
    power = Poly.one(domain)
    previous = 0
    for e in exponents:
        for _ in range(e - previous):
            power = handle.multiply(power, a)
        previous = e
        powers.append(power)
        column = {}
        for j in range(len(handle.alphabet)):
            for word, c in commutator(handle, power, handle.generator(j)).items():
                column[(j, word)] = c
        columns.append(column)
    coordinates = sorted({key for column in columns for key in column},
                         key=lambda key: (key[0], handle.alphabet.word_key(key[1])))
    matrix = [[column.get(key, domain.zero()) for column in columns] for key in coordinates]
    kernel = nullspace(matrix, len(exponents), domain)
    if not kernel:
        logger.info(f"No central combination of powers {exponents} of {name}")
        return None
    vector = kernel[0]
    element = Poly.zero(domain)
    for coeff, pw in zip(vector, powers):
        element = element + pw.scale(coeff)
    used = [(e, c) for e, c in zip(exponents, vector) if c]
    logger.info(f"Central witness for {name}: {element.to_string(handle.alphabet)}")
    return CentralWitness(name, mode, [e for e, _ in used], [c for _, c in used], element)


def growth_slope(dims: Sequence[int], start: int, end: int) -> float:
    """Least-squares slope of log dim F_n against log(n + 1) over start..end."""
    ns = np.arange(start, end + 1, dtype=float)
    values = np.array([dims[n] for n in range(start, end + 1)], dtype=float)
    slope, _ = np.polyfit(np.log(ns + 1.0), np.log(values), 1)
    return float(slope)


def slope_window(top: int) -> Tuple[int, int]:
    return max(1, math.ceil(top / 2)), top


def gk_estimate(handle: AlgebraHandle) -> int:
    """Known GK dimension from provenance, else the rounded growth slope of the dimension table."""
    provenance = handle.presentation.provenance
    if provenance and provenance.gk_dimension is not None:
        return provenance.gk_dimension
    top = min(handle.bound, handle.max_basis_weight())
    if top < 2:
        return 0
    start, end = slope_window(top)
    return int(round(growth_slope(handle.dims(end), start, end)))


def _rules_in_order(handle: AlgebraHandle, order_spec: OrderSpec) -> List[str]:
    """Rule coefficients that fall outside D."""
    outside = []
    for rule in handle.rewrite.rules:
        for c in rule.rhs.terms.values():
            if not order_spec.contains(c):
                outside.append(str(c))
    return sorted(set(outside))


def _pi_evidence(reduced: AlgebraHandle, p: int) -> dict:
    witnesses = {}
    missing = []
    for index, name in enumerate(reduced.alphabet.names):
        found = None
        try:
            found = central_witness(reduced, index, i_max=1, mode="p_power")
            if found is None:
                found = central_witness(reduced, index, mode="power", n_max=2 * p)
        except ConfluenceNotEstablished as exc:
            missing.append({"generator": name, "error": exc.message})
            continue
        if found is None:
            missing.append({"generator": name, "error": "no central power found"})
        else:
            witnesses[name] = found.to_dict(reduced)
    return {"witnesses": witnesses, "missing": missing}


def congeniality_report(handle: AlgebraHandle, primes: Sequence[int], bound: Optional[int] = None
                        ) -> CongenialityReport:
    """
    Evaluate the machine-checkable congeniality conditions; failures are recorded, never raised.

    Args:
        handle: The algebra, with its confluence already checked.
        primes: Primes for the reduction and PI evidence of condition (5).
        bound: Largest weight used for dimension tables; defaults to the handle's bound.
    """
    bound = handle.bound if bound is None else bound
    presentation = handle.presentation
    conditions = []
    logger.info(f"Congeniality report for {presentation!r} at bound {bound}, primes {list(primes)}")

    # (1) local finiteness
    top = min(bound, handle.max_basis_weight())
    try:
        dims = handle.dims(top) if top >= 0 else []
        conditions.append(ConditionResult(condition=1, name="locally finite", status="pass" if dims else "fail",
                                          details={"dims": dims, "weights": top}))
    except NcfiltError as exc:
        dims = []
        conditions.append(ConditionResult(condition=1, name="locally finite", status="fail", details=exc.to_dict()))

    # (2) order
    order_spec = None
    try:
        order_spec = presentation_order(presentation)
        outside = _rules_in_order(handle, order_spec)
        conditions.append(ConditionResult(
            condition=2, name="order", status="fail" if outside else "pass",
            details={"order": order_spec.describe(), "generators": order_spec.generator_names(),
                     "witnesses": dict(order_spec.witnesses), "basis": "normal words",
                     "coefficients_outside": outside}))
    except NcfiltError as exc:
        conditions.append(ConditionResult(condition=2, name="order", status="fail", details=exc.to_dict()))

    # (3) order of the associated graded algebra
    graded_handle = None
    try:
        graded = associated_graded(handle)
        graded_handle = AlgebraHandle(graded, bound=handle.bound)
        graded_spec = presentation_order(graded)
        extra = sorted(set(graded_spec.generator_names()) - set(order_spec.generator_names())) if order_spec else []
        outside = _rules_in_order(graded_handle, order_spec) if order_spec else []
        ok = order_spec is not None and not extra and not outside
        conditions.append(ConditionResult(
            condition=3, name="associated graded order", status="pass" if ok else "fail",
            details={"order": graded_spec.describe(), "relations": graded.relation_strings(),
                     "generators_outside": extra, "coefficients_outside": outside}))
    except NcfiltError as exc:
        conditions.append(ConditionResult(condition=3, name="associated graded order", status="fail",
                                          details=exc.to_dict()))

    # (4) proxy only
    details = {"label": PROXY_LABEL}
    source = graded_handle or handle
    proxy_top = min(bound, source.max_basis_weight()) if source.confluent else -1
    if proxy_top >= 2:
        start, end = slope_window(proxy_top)
        slope = growth_slope(source.dims(end), start, end)
        details.update(slope=round(slope, 6), weights=[start, end], alphabet_size=len(source.alphabet),
                       polynomial_growth_evidence=slope <= len(source.alphabet))
    conditions.append(ConditionResult(condition=4, name="strongly noetherian", status="proxy", details=details))

    # (5) reduction modulo p and PI evidence
    per_prime = {}
    ok5 = bool(primes)
    for p in primes:
        try:
            _, reduced = order_and_reduce(handle, p)
            if not reduced.confluent:
                per_prime[str(p)] = {"status": "fail", "confluence": reduced.report.to_dict(reduced.alphabet)}
                ok5 = False
                continue
            evidence = _pi_evidence(reduced, p)
            passed = not evidence["missing"]
            ok5 = ok5 and passed
            per_prime[str(p)] = {"status": "pass" if passed else "fail", **evidence}
        except NcfiltError as exc:
            ok5 = False
            per_prime[str(p)] = {"status": "fail", **exc.to_dict()}
    conditions.append(ConditionResult(condition=5, name="reduction modulo p", status="pass" if ok5 else "fail",
                                      details={"primes": per_prime}))

    passed = all(c.status in ("pass", "proxy") for c in conditions)
    return CongenialityReport(algebra=presentation.to_dict(), bound=bound, primes=list(primes),
                              conditions=conditions, passed=passed)
