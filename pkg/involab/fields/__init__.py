"""Exact characteristic-2 field towers."""

from involab.fields.base_field import (
    MAX_ALGEBRAIC_DEGREE,
    MAX_RATIONAL_VARIABLES,
    ArtinSchreier,
    FieldElement,
    FieldTower,
    InseparableQuadratic,
    Layer,
    OddSeparable,
    Rational,
    TwoBasis,
    ZeroDivisorError,
)
from involab.fields.extensions import (
    ArtinSchreierExtension,
    InseparableQuadraticExtension,
    OddSeparableExtension,
)
from involab.fields.finite_field import FiniteField
from involab.fields.function_field import RationalFunctionField
from involab.fields.parsing import (
    ParseError,
    extend_tower,
    parse_base,
    parse_element,
    parse_field,
    parse_layer,
    parse_polynomial,
)

__all__ = [
    "MAX_ALGEBRAIC_DEGREE",
    "MAX_RATIONAL_VARIABLES",
    "ArtinSchreier",
    "ArtinSchreierExtension",
    "FieldElement",
    "FieldTower",
    "FiniteField",
    "InseparableQuadratic",
    "InseparableQuadraticExtension",
    "Layer",
    "OddSeparable",
    "OddSeparableExtension",
    "ParseError",
    "Rational",
    "RationalFunctionField",
    "TwoBasis",
    "ZeroDivisorError",
    "extend_tower",
    "parse_base",
    "parse_element",
    "parse_field",
    "parse_layer",
    "parse_polynomial",
]
