"""
Recursive-descent parser for relation expressions and scalar literals.

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | "zeta" "(" INT ")" | IDENT | "(" expr ")"

Whitespace is insignificant. Identifiers resolve against the alphabet.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from errors import DomainMismatch, NoRootOfUnity, ParseError, UnknownGenerator
from ncpoly import Alphabet, Poly
from scalars import Domain, Scalar, root_of_unity

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass
class Token:
    kind: str
    text: str
    col: int


def tokenize(text: str, line: int = 1, col_offset: int = 0) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if not match:
            bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise ParseError(f"unexpected character {text[bad]!r}", line, col_offset + bad + 1,
                             expected="identifier, integer or operator")
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), col_offset + match.start(kind) + 1))
        pos = match.end()
    tokens.append(Token("end", "", col_offset + len(text) + 1))
    return tokens


class ExpressionParser:
    def __init__(self, text: str, alphabet: Alphabet, domain: Domain, line: int = 1, col_offset: int = 0):
        self.alphabet = alphabet
        self.domain = domain
        self.line = line
        self.tokens = tokenize(text, line, col_offset)
        self.pos = 0

    def _peek(self) -> Token:
        return self.tokens[self.pos]

    def _next(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _expect(self, kind: str, text: Optional[str] = None) -> Token:
        token = self._next()
        if token.kind != kind or (text is not None and token.text != text):
            wanted = text or kind
            found = token.text or "end of input"
            raise ParseError(f"expected {wanted}, found {found!r}", self.line, token.col, expected=wanted)
        return token

    def parse(self) -> Poly:
        value = self._expr()
        token = self._peek()
        if token.kind != "end":
            raise ParseError(f"unexpected {token.text!r}", self.line, token.col, expected="operator or end of input")
        return value

    def _expr(self) -> Poly:
        value = self._term()
        while self._peek().text in ("+", "-") and self._peek().kind == "op":
            op = self._next().text
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> Poly:
        value = self._unary()
        while self._peek().kind == "op" and self._peek().text == "*":
            self._next()
            value = value * self._unary()
        return value

    def _unary(self) -> Poly:
        if self._peek().kind == "op" and self._peek().text == "-":
            self._next()
            return -self._unary()
        return self._power()

    def _power(self) -> Poly:
        value = self._atom()
        if self._peek().kind == "op" and self._peek().text == "^":
            self._next()
            exponent = int(self._expect("int").text)
            value = value ** exponent
        return value

    def _atom(self) -> Poly:
        token = self._next()
        if token.kind == "int":
            numerator = int(token.text)
            if self._peek().kind == "op" and self._peek().text == "/":
                self._next()
                den_token = self._expect("int")
                denominator = int(den_token.text)
                if denominator == 0:
                    raise ParseError("zero denominator", self.line, den_token.col, expected="nonzero integer")
                return Poly.constant(self.domain.from_fraction(Fraction(numerator, denominator)), self.domain)
            return Poly.constant(numerator, self.domain)
        if token.kind == "ident" and token.text == "zeta":
            self._expect("op", "(")
            order_token = self._expect("int")
            self._expect("op", ")")
            try:
                zeta = root_of_unity(int(order_token.text), self.domain)
            except (DomainMismatch, NoRootOfUnity) as exc:
                raise ParseError(f"zeta({order_token.text}) is not available in {self.domain}: {exc.message}",
                                 self.line, token.col, expected=f"a scalar of {self.domain}") from None
            return Poly.constant(zeta, self.domain)
        if token.kind == "ident":
            try:
                index = self.alphabet.index(token.text)
            except UnknownGenerator:
                raise UnknownGenerator(f"line {self.line}, column {token.col}: unknown generator {token.text!r}",
                                       name=token.text, line=self.line, col=token.col,
                                       known=list(self.alphabet.names)) from None
            return Poly.generator(index, self.domain)
        if token.kind == "op" and token.text == "(":
            value = self._expr()
            self._expect("op", ")")
            return value
        found = token.text or "end of input"
        raise ParseError(f"unexpected {found!r}", self.line, token.col, expected="integer, zeta(n), generator or '('")


def parse_poly(text: str, alphabet: Alphabet, domain: Domain, line: int = 1, col_offset: int = 0) -> Poly:
    """Parse a relation expression into a Poly over ``domain``."""
    return ExpressionParser(text, alphabet, domain, line, col_offset).parse()


def parse_scalar(text: str, domain: Domain, line: int = 1, col_offset: int = 0) -> Scalar:
    """Parse a scalar literal such as ``-3/2``, ``zeta(12)^5`` or ``1 + zeta(3)``."""
    poly = parse_poly(text, Alphabet([]), domain, line, col_offset)
    return poly.constant_term()
