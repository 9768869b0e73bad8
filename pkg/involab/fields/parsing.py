"""Parser for field literals and layer descriptors.

Literals use the grammar::

    expr   := term (("+" | "-") term)*
    term   := power (("*" | "/") power)*
    power  := atom ("^" INT)*
    atom   := INT | NAME | "(" expr ")"

Subtraction is addition in characteristic 2. Names resolve against the
symbols of the target tower (``g`` for the base field generator).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Generic, List, Optional, Sequence, Tuple, TypeVar

from involab.fields.base_field import (
    ArtinSchreier,
    FieldElement,
    FieldTower,
    InseparableQuadratic,
    Layer,
    OddSeparable,
    Rational,
)
from involab.fields.finite_field import FiniteField

V = TypeVar("V")

_TOKEN = re.compile(
    r"(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)
_BASE = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*$")


class ParseError(ValueError):
    """A literal or descriptor failed to parse.

    ``column`` is 1-based and points at ``token``.
    """

    def __init__(self, message: str, column: int, token: str = "") -> None:
        near = f" near {token!r}" if token else ""
        super().__init__(f"{message} at column {column}{near}")
        self.message = message
        self.column = column
        self.token = token

    def __reduce__(self) -> Tuple[Any, ...]:
        return (ParseError, (self.message, self.column, self.token))

    def shifted(self, offset: int) -> ParseError:
        return ParseError(self.message, self.column + offset, self.token)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ParseError("unexpected character", pos + 1, text[pos])
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), pos + 1))
        pos = match.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class _Parser(Generic[V]):
    """Recursive descent evaluator; values combine with Python operators."""

    def __init__(
        self,
        text: str,
        resolve: Callable[[str], V],
        number: Callable[[int], V],
    ) -> None:
        self.tokens = tokenize(text)
        self.pos = 0
        self.resolve = resolve
        self.number = number

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _error(self, message: str, token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        if token.kind == "end":
            return ParseError("unexpected end of input", token.column)
        return ParseError(message, token.column, token.text)

    def parse(self) -> V:
        value = self._expr()
        if self.current.kind != "end":
            raise self._error("unexpected token")
        return value

    def _expr(self) -> V:
        value = self._term()
        while self.current.text in ("+", "-"):
            self._advance()
            value = value + self._term()  # type: ignore[operator]
        return value

    def _term(self) -> V:
        value = self._power()
        while self.current.text in ("*", "/"):
            op = self._advance()
            rhs = self._power()
            if op.text == "*":
                value = value * rhs  # type: ignore[operator]
                continue
            try:
                value = value / rhs  # type: ignore[operator]
            except ZeroDivisionError:
                raise self._error("division by zero", op) from None
            except TypeError:
                raise self._error("division is not defined here", op) from None
        return value

    def _power(self) -> V:
        value = self._atom()
        while self.current.text == "^":
            self._advance()
            exponent = self.current
            if exponent.kind != "int":
                raise self._error("expected an integer exponent")
            self._advance()
            value = value ** int(exponent.text)  # type: ignore[operator]
        return value

    def _atom(self) -> V:
        token = self.current
        if token.kind == "int":
            self._advance()
            return self.number(int(token.text))
        if token.kind == "name":
            self._advance()
            try:
                return self.resolve(token.text)
            except KeyError:
                raise self._error("unknown symbol", token) from None
        if token.text == "(":
            self._advance()
            value = self._expr()
            if self.current.text != ")":
                raise self._error("expected ')'")
            self._advance()
            return value
        raise self._error("unexpected token")


def evaluate_expression(
    text: str, resolve: Callable[[str], V], number: Callable[[int], V]
) -> V:
    """Evaluate a literal with custom name resolution.

    ``resolve`` raises ``KeyError`` for unknown names.
    """
    return _Parser(text, resolve, number).parse()


def parse_element(text: str, field: FieldTower) -> FieldElement:
    """Parse a literal such as ``"(t^2+s)/(t+1)"`` into ``field``."""
    symbols = field.symbols
    return evaluate_expression(
        text, lambda name: field.element(symbols[name]), field.from_int
    )


def parse_polynomial(
    text: str, field: FieldTower, variable: str = "x"
) -> Tuple[FieldElement, ...]:
    """Parse a polynomial in ``variable``; coefficients lowest degree first."""
    from involab.fields.function_field import RationalFunctionField

    ring = RationalFunctionField(field, variable)
    symbols = field.symbols

    def resolve(name: str) -> FieldElement:
        if name == variable:
            return ring.gen(variable)
        return ring.embed(field.element(symbols[name]))

    value = evaluate_expression(text, resolve, ring.from_int)
    numerator, denominator = value.raw
    if denominator != (field.one_raw,):
        raise ParseError(f"not a polynomial in {variable}", 1, text)
    return tuple(field.element(c) for c in numerator)


def parse_base(text: str) -> FiniteField:
    """Parse a base field descriptor.

    Args:
        text: A descriptor such as ``GF(2)`` or ``GF(16)``.

    Returns:
        The finite field ``GF(2^k)``.

    Raises:
        ParseError: If ``text`` is not ``GF(2^k)`` for a supported ``k``.
    """
    match = _BASE.match(text)
    if match is None:
        raise ParseError("expected a base field GF(2^k)", 1, text)
    try:
        return FiniteField(int(match.group(1)))
    except ValueError as exc:
        raise ParseError(str(exc), match.start(1) + 1, match.group(1)) from None


def parse_layer(text: str, field: FieldTower) -> Layer:
    """Parse ``kind:body[@name]`` over ``field``."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ParseError("expected '<kind>:' layer prefix", 1, text)
    kind = kind.strip()
    body, name = rest, None
    if "@" in rest:
        body, _, name = rest.rpartition("@")
        name = name.strip()
        if not name:
            raise ParseError("empty generator name", len(text) + 1)
    if kind == "rat":
        if name is not None:
            raise ParseError("rational layers are named by their body", 1, text)
        return Rational(body.strip())
    offset = len(kind) + 1
    try:
        if kind == "as":
            return ArtinSchreier(parse_element(body, field), name)
        if kind == "odd":
            return OddSeparable(parse_polynomial(body, field), name)
        if kind == "insep":
            return InseparableQuadratic(parse_element(body, field), name)
    except ParseError as exc:
        raise exc.shifted(offset) from None
    raise ParseError("unknown layer kind", 1, kind)


def extend_tower(field: FieldTower, layers: Sequence[str]) -> FieldTower:
    """Adjoin the layers described by ``layers`` one after the other."""
    for layer in layers:
        field = field.extend(parse_layer(layer, field))
    return field


def parse_field(base: str, layers: Sequence[str] = ()) -> FieldTower:
    """Build a tower from a base descriptor and layer descriptors.

    Args:
        base: Base field descriptor, see :func:`parse_base`.
        layers: Layer descriptors ``kind:body[@name]``, innermost first.

    Returns:
        The :class:`FieldTower` with every layer adjoined.

    Raises:
        ParseError: If a descriptor does not parse.
        ValueError: If a layer is not admissible over the field below it.
    """
    return extend_tower(parse_base(base), layers)
