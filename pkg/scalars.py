"""
Exact coefficient arithmetic over Q, cyclotomic fields Q(zeta_n) and prime fields F_p.

Cyclotomic elements are coefficient vectors in the power basis of zeta_n, reduced
modulo the n-th cyclotomic polynomial. Prime field elements are residues in [0, p).
Arithmetic between scalars of different domains raises DomainMismatch; moving a
value into a larger domain is always an explicit ``lift``.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Optional, Sequence, Tuple, Union

import sympy
from sympy.ntheory import n_order, primefactors

from errors import DenominatorVanishes, DomainMismatch, MixedCyclotomicOrders, NoRootOfUnity

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, "Scalar"]


class DomainKind(str, Enum):
    RATIONAL = "Rational"
    CYCLOTOMIC = "Cyclotomic"
    PRIME_FIELD = "PrimeField"


_DOMAIN_RE = re.compile(r"^\s*(?:(QQ?)\s*(?:\(\s*zeta\s*\(\s*(\d+)\s*\)\s*\))?|(?:GF|F)\s*\(\s*(\d+)\s*\))\s*$")


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    modulus: int = 1

    @staticmethod
    def rational() -> "Domain":
        return Domain(DomainKind.RATIONAL, 1)

    @staticmethod
    def cyclotomic(n: int) -> "Domain":
        if n < 1:
            raise ValueError(f"cyclotomic order must be positive, got {n}")
        # Q(zeta_1) = Q(zeta_2) = Q
        if n <= 2:
            return Domain.rational()
        return Domain(DomainKind.CYCLOTOMIC, n)

    @staticmethod
    def prime_field(p: int) -> "Domain":
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        return Domain(DomainKind.PRIME_FIELD, p)

    @staticmethod
    def parse(text: str) -> "Domain":
        """Parse ``QQ``, ``QQ(zeta(n))`` or ``GF(p)``."""
        match = _DOMAIN_RE.match(text)
        if not match:
            raise ValueError(f"unrecognised scalar domain {text!r}; expected QQ, QQ(zeta(n)) or GF(p)")
        if match.group(3):
            return Domain.prime_field(int(match.group(3)))
        if match.group(2):
            return Domain.cyclotomic(int(match.group(2)))
        return Domain.rational()

    @property
    def degree(self) -> int:
        if self.kind is DomainKind.CYCLOTOMIC:
            return len(cyclotomic_coefficients(self.modulus)) - 1
        return 1

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind is DomainKind.PRIME_FIELD else 0

    def __str__(self) -> str:
        if self.kind is DomainKind.CYCLOTOMIC:
            return f"QQ(zeta({self.modulus}))"
        if self.kind is DomainKind.PRIME_FIELD:
            return f"GF({self.modulus})"
        return "QQ"

    def embeds(self, other: "Domain") -> bool:
        """True when values of ``other`` can be lifted into this domain."""
        if other == self:
            return True
        if self.kind is DomainKind.PRIME_FIELD or other.kind is DomainKind.PRIME_FIELD:
            return False
        if other.kind is DomainKind.RATIONAL:
            return True
        return self.kind is DomainKind.CYCLOTOMIC and self.modulus % other.modulus == 0

    def zero(self) -> "Scalar":
        return self.from_int(0)

    def one(self) -> "Scalar":
        return self.from_int(1)

    def from_int(self, k: int) -> "Scalar":
        if self.kind is DomainKind.PRIME_FIELD:
            return Scalar(self, k % self.modulus)
        if self.kind is DomainKind.CYCLOTOMIC:
            return Scalar(self, (Fraction(k),) + (Fraction(0),) * (self.degree - 1))
        return Scalar(self, Fraction(k))

    def from_fraction(self, q: Fraction) -> "Scalar":
        q = Fraction(q)
        if self.kind is DomainKind.PRIME_FIELD:
            p = self.modulus
            if q.denominator % p == 0:
                raise DenominatorVanishes(f"{q} has no image in F_{p}", value=str(q), prime=p)
            return Scalar(self, q.numerator * pow(q.denominator, -1, p) % p)
        if self.kind is DomainKind.CYCLOTOMIC:
            return Scalar(self, (q,) + (Fraction(0),) * (self.degree - 1))
        return Scalar(self, q)

    def coerce(self, value: Number) -> "Scalar":
        if isinstance(value, Scalar):
            return value.lift(self)
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return self.from_fraction(value)
        raise TypeError(f"cannot interpret {value!r} as a scalar")


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> Tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce_mod_phi(coeffs: Sequence[Fraction], n: int) -> Tuple[Fraction, ...]:
    phi = cyclotomic_coefficients(n)
    d = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, d - 1, -1):
        top = c[k]
        if top:
            # x^d = -(phi_0 + ... + phi_{d-1} x^{d-1})
            for i in range(d):
                if phi[i]:
                    c[k - d + i] -= top * phi[i]
    c = c[:d]
    c.extend([Fraction(0)] * (d - len(c)))
    return tuple(c)


@lru_cache(maxsize=4096)
def _cyclotomic_inverse(n: int, coeffs: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    x = sympy.Symbol("x")
    f = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    g = sympy.Poly(list(reversed(cyclotomic_coefficients(n))), x, domain="QQ")
    inverse = f.invert(g)
    out = [Fraction(int(c.p), int(c.q)) for c in reversed(inverse.all_coeffs())]
    return _reduce_mod_phi(out, n)


def _fraction_literal(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Scalar:
    """An immutable exact scalar tagged with its domain."""

    __slots__ = ("domain", "value")

    def __init__(self, domain: Domain, value):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def rational(numerator: int, denominator: int = 1) -> "Scalar":
        return Scalar(Domain.rational(), Fraction(numerator, denominator))

    def lift(self, domain: Domain) -> "Scalar":
        if domain == self.domain:
            return self
        if not domain.embeds(self.domain):
            raise DomainMismatch(f"cannot lift {self} from {self.domain} to {domain}",
                                 source=str(self.domain), target=str(domain))
        if self.domain.kind is DomainKind.RATIONAL:
            return domain.from_fraction(self.value)
        step = domain.modulus // self.domain.modulus
        coeffs = [Fraction(0)] * ((self.domain.degree - 1) * step + 1)
        for k, c in enumerate(self.value):
            coeffs[k * step] = c
        return Scalar(domain, _reduce_mod_phi(coeffs, domain.modulus))

    # -- predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        if self.domain.kind is DomainKind.CYCLOTOMIC:
            return not any(self.value)
        return self.value == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        if self.domain.kind is DomainKind.CYCLOTOMIC:
            return not any(self.value[1:])
        return self.domain.kind is DomainKind.RATIONAL

    def as_fraction(self) -> Fraction:
        if self.domain.kind is DomainKind.CYCLOTOMIC and self.is_rational():
            return self.value[0]
        if self.domain.kind is DomainKind.RATIONAL:
            return self.value
        raise DomainMismatch(f"{self} is not a rational number")

    def rational_coefficients(self) -> Tuple[Fraction, ...]:
        """Power-basis coefficients (a single entry for rationals)."""
        if self.domain.kind is DomainKind.CYCLOTOMIC:
            return self.value
        if self.domain.kind is DomainKind.RATIONAL:
            return (self.value,)
        raise DomainMismatch(f"{self} lives in a prime field")

    # -- arithmetic -------------------------------------------------------------
    def _other(self, other) -> Optional["Scalar"]:
        if isinstance(other, Scalar):
            if other.domain != self.domain:
                raise DomainMismatch(f"cannot combine {self.domain} with {other.domain}",
                                     left=str(self.domain), right=str(other.domain))
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.domain.coerce(other)
        return None

    def __add__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        kind = self.domain.kind
        if kind is DomainKind.PRIME_FIELD:
            return Scalar(self.domain, (self.value + other.value) % self.domain.modulus)
        if kind is DomainKind.CYCLOTOMIC:
            return Scalar(self.domain, tuple(a + b for a, b in zip(self.value, other.value)))
        return Scalar(self.domain, self.value + other.value)

    __radd__ = __add__

    def __neg__(self):
        kind = self.domain.kind
        if kind is DomainKind.PRIME_FIELD:
            return Scalar(self.domain, (-self.value) % self.domain.modulus)
        if kind is DomainKind.CYCLOTOMIC:
            return Scalar(self.domain, tuple(-a for a in self.value))
        return Scalar(self.domain, -self.value)

    def __sub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        kind = self.domain.kind
        if kind is DomainKind.PRIME_FIELD:
            return Scalar(self.domain, (self.value * other.value) % self.domain.modulus)
        if kind is DomainKind.CYCLOTOMIC:
            a, b = self.value, other.value
            prod = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        if bj:
                            prod[i + j] += ai * bj
            return Scalar(self.domain, _reduce_mod_phi(prod, self.domain.modulus))
        return Scalar(self.domain, self.value * other.value)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError(f"zero has no inverse in {self.domain}")
        kind = self.domain.kind
        if kind is DomainKind.PRIME_FIELD:
            return Scalar(self.domain, pow(self.value, -1, self.domain.modulus))
        if kind is DomainKind.CYCLOTOMIC:
            if self.is_rational():
                return self.domain.from_fraction(1 / self.value[0])
            return Scalar(self.domain, _cyclotomic_inverse(self.domain.modulus, self.value))
        return Scalar(self.domain, 1 / self.value)

    def __truediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = self.domain.one()
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- comparison and display ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.domain == other.domain and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self == self.domain.coerce(other)
            except DenominatorVanishes:
                return False
        return NotImplemented

    def __hash__(self):
        if self.domain.kind is DomainKind.CYCLOTOMIC:
            return hash(self.value[0]) if self.is_rational() else hash((self.domain, self.value))
        return hash(self.value)

    def __str__(self) -> str:
        kind = self.domain.kind
        if kind is DomainKind.PRIME_FIELD:
            return str(self.value)
        if kind is DomainKind.RATIONAL:
            return _fraction_literal(self.value)
        n = self.domain.modulus
        parts = []
        for k, c in enumerate(self.value):
            if not c:
                continue
            mono = "" if k == 0 else (f"zeta({n})" if k == 1 else f"zeta({n})^{k}")
            if not mono:
                parts.append(_fraction_literal(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{_fraction_literal(c)}*{mono}")
        if not parts:
            return "0"
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Scalar({self}, {self.domain})"


def mk_root_of_unity(n: int) -> Scalar:
    """Return zeta_n; n = 1 and n = 2 give the rationals 1 and -1."""
    if n < 1:
        raise ValueError(f"root of unity order must be positive, got {n}")
    if n == 1:
        return Scalar.rational(1)
    if n == 2:
        return Scalar.rational(-1)
    domain = Domain.cyclotomic(n)
    vector = [Fraction(0)] * domain.degree
    vector[1] = Fraction(1)
    return Scalar(domain, tuple(vector))


def root_of_unity(m: int, domain: Domain) -> Scalar:
    """zeta_m inside ``domain``; in F_p this is the image used by reduce_mod_p."""
    if domain.kind is DomainKind.PRIME_FIELD:
        return Scalar(domain, root_image(m, domain.modulus))
    if m <= 2:
        return domain.coerce(1 if m == 1 else -1)
    if domain.kind is not DomainKind.CYCLOTOMIC or domain.modulus % m:
        raise DomainMismatch(f"{domain} does not contain zeta({m})", order=m, domain=str(domain))
    return mk_root_of_unity(domain.modulus) ** (domain.modulus // m)


def multiplicative_order(s: Scalar, cap: int) -> Optional[int]:
    """Least k <= cap with s^k = 1, or None."""
    if s.is_zero():
        return None
    power = s
    for k in range(1, cap + 1):
        if power == 1:
            return k
        power = power * s
    return None


@lru_cache(maxsize=None)
def root_image(n: int, p: int) -> int:
    """Smallest residue of multiplicative order exactly n in F_p."""
    if n == 1:
        return 1
    if (p - 1) % n:
        raise NoRootOfUnity(f"F_{p} has no element of order {n}", order=n, prime=p)
    for r in range(2, p):
        if n_order(r, p) == n:
            return r
    raise NoRootOfUnity(f"F_{p} has no element of order {n}", order=n, prime=p)


def reduce_mod_p(s: Scalar, p: int) -> Scalar:
    """
    Specialize a rational or cyclotomic scalar to F_p.

    zeta_n is sent to the smallest residue of order exactly n, so reductions
    reproduce bit-exactly between runs.

    Raises:
        DenominatorVanishes: p divides a denominator.
        NoRootOfUnity: F_p has no element of order n.
    """
    target = Domain.prime_field(p)
    kind = s.domain.kind
    if kind is DomainKind.PRIME_FIELD:
        if s.domain.modulus != p:
            raise DomainMismatch(f"cannot reduce an element of {s.domain} modulo {p}")
        return s
    if kind is DomainKind.RATIONAL:
        return target.from_fraction(s.value)
    root = root_image(s.domain.modulus, p)
    total = 0
    power = 1
    for c in s.value:
        if c:
            total += target.from_fraction(c).value * power
        power = power * root % p
    return Scalar(target, total % p)


def common_domain(values: Iterable[Number], default: Optional[Domain] = None) -> Domain:
    """Smallest domain holding every value; ints and Fractions fit anywhere."""
    domain = default or Domain.rational()
    for value in values:
        if not isinstance(value, Scalar):
            continue
        other = value.domain
        if domain.embeds(other):
            continue
        if other.embeds(domain):
            domain = other
            continue
        if DomainKind.PRIME_FIELD in (domain.kind, other.kind):
            raise DomainMismatch(f"no common domain for {domain} and {other}")
        domain = Domain.cyclotomic(lcm(domain.modulus, other.modulus))
    return domain


# -- orders ---------------------------------------------------------------------

@dataclass(frozen=True)
class OrderGenerator:
    name: str
    value: Scalar


@dataclass(frozen=True)
class OrderSpec:
    """The subring D = Z[generators] together with how each coefficient is expressed in it."""

    generators: Tuple[OrderGenerator, ...] = ()
    inverted_primes: Tuple[int, ...] = ()
    cyclotomic_order: Optional[int] = None
    witnesses: Tuple[Tuple[str, str], ...] = field(default=(), compare=False)
    base: str = "ZZ"

    def generator_names(self) -> list:
        return [g.name for g in self.generators]

    def contains(self, s: Scalar) -> bool:
        if s.domain.kind is DomainKind.PRIME_FIELD:
            return False
        if not s.is_rational():
            if self.cyclotomic_order is None or self.cyclotomic_order % s.domain.modulus:
                return False
            s = s.lift(Domain.cyclotomic(self.cyclotomic_order))
        allowed = set(self.inverted_primes)
        return all(set(primefactors(c.denominator)) <= allowed for c in s.rational_coefficients())

    def witness(self, s: Scalar) -> Optional[str]:
        return dict(self.witnesses).get(str(s))

    def describe(self) -> str:
        if not self.generators:
            return self.base
        return f"{self.base}[{', '.join(self.generator_names())}]"


def _order_expression(s: Scalar, zeta_name: Optional[str]) -> str:
    terms = []
    for k, c in enumerate(s.rational_coefficients()):
        if not c:
            continue
        factors = [str(c.numerator)]
        for prime, exp in sorted(sympy.factorint(c.denominator).items()):
            factors.append(f"(1/{prime})" + (f"^{exp}" if exp > 1 else ""))
        if k:
            factors.append(zeta_name + (f"^{k}" if k > 1 else ""))
        terms.append("*".join(factors))
    return " + ".join(terms) if terms else "0"


def order_generators(coeffs: Iterable[Scalar]) -> OrderSpec:
    """
    Extract the minimal list of generators D needs over Z so every coefficient lies in D.

    Integers contribute nothing, denominators contribute 1/p for each prime
    factor, and genuinely cyclotomic values contribute zeta_N.

    Raises:
        MixedCyclotomicOrders: two cyclotomic domains are not nested.
        DomainMismatch: a coefficient lives in a prime field.
    """
    coeffs = list(coeffs)
    orders = sorted({c.domain.modulus for c in coeffs
                     if c.domain.kind is DomainKind.CYCLOTOMIC and not c.is_rational()})
    for c in coeffs:
        if c.domain.kind is DomainKind.PRIME_FIELD:
            raise DomainMismatch(f"{c!r} already lives in a prime field; orders are extracted over Q")
    top = orders[-1] if orders else None
    for n in orders:
        if top % n:
            raise MixedCyclotomicOrders(f"coefficients live in incompatible fields Q(zeta({n})) and Q(zeta({top}))",
                                        orders=orders)
    lifted = [c.lift(Domain.cyclotomic(top)) if top and not c.is_rational() else c for c in coeffs]
    needs_zeta = any(not c.is_rational() for c in lifted)
    primes = set()
    for c in lifted:
        for q in c.rational_coefficients():
            primes.update(primefactors(q.denominator))

    generators = []
    zeta_name = None
    if needs_zeta:
        zeta_name = f"zeta({top})"
        generators.append(OrderGenerator(zeta_name, mk_root_of_unity(top)))
    for prime in sorted(primes):
        generators.append(OrderGenerator(f"1/{prime}", Scalar.rational(1, prime)))

    witnesses = {}
    for original, c in zip(coeffs, lifted):
        witnesses[str(original)] = _order_expression(c, zeta_name)
    order_spec = OrderSpec(
        generators=tuple(generators),
        inverted_primes=tuple(sorted(primes)),
        cyclotomic_order=top if needs_zeta else None,
        witnesses=tuple(sorted(witnesses.items())),
    )
    logger.debug(f"Extracted order {order_spec.describe()} from {len(coeffs)} coefficients")
    return order_spec
