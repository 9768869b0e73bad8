"""Base field tower for exact characteristic-2 arithmetic."""

from __future__ import annotations

import logging
import random
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from functools import cached_property
from typing import (
    Any,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

logger = logging.getLogger(__name__)

MAX_ALGEBRAIC_DEGREE = 16
MAX_RATIONAL_VARIABLES = 3
RESERVED_NAMES = frozenset({"g", "x"})

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")

Raw = Any
Scalar = Union["FieldElement", int, str]


class ZeroDivisorError(ZeroDivisionError):
    """An inversion met a zero divisor: the layer modulus is reducible."""


@dataclass(frozen=True)
class Rational:
    """Adjoin a transcendental variable."""

    name: str


@dataclass(frozen=True)
class ArtinSchreier:
    """Adjoin a root of ``X^2 + X = delta``."""

    delta: Scalar
    name: Optional[str] = None


@dataclass(frozen=True)
class OddSeparable:
    """Adjoin a root of a monic odd-degree separable polynomial.

    ``min_poly`` lists the coefficients lowest degree first.
    """

    min_poly: Tuple[Scalar, ...]
    name: Optional[str] = None


@dataclass(frozen=True)
class InseparableQuadratic:
    """Adjoin the square root of a 2-basis generator ``g``."""

    g: Scalar
    name: Optional[str] = None


Layer = Union[Rational, ArtinSchreier, OddSeparable, InseparableQuadratic]


def _mask_order(mask: int, width: int) -> Tuple[int, Tuple[int, ...]]:
    """Degree-lexicographic sort key of a square-free monomial."""
    bits = tuple(-((mask >> i) & 1) for i in range(width))
    return bin(mask).count("1"), bits


def _wrap(text: str, operators: str = "+/") -> str:
    if any(op in text for op in operators):
        return f"({text})"
    return text


def format_power(coefficient: str, name: str, exponent: int) -> str:
    """Render ``coefficient * name^exponent`` in the literal grammar."""
    if exponent == 0:
        return coefficient
    monomial = name if exponent == 1 else f"{name}^{exponent}"
    if coefficient == "1":
        return monomial
    return f"{_wrap(coefficient)}*{monomial}"


class FieldTower(ABC):
    """One level of a characteristic-2 field tower.

    A level knows its parent (``None`` for the finite base field) and
    implements exact arithmetic on a canonical hashable *raw*
    representation. Equal elements have identical raw values, so element
    equality is representation equality. Levels are immutable and compare
    equal when they were built from the same descriptors.
    """

    layer_degree: Optional[int] = 1
    separable: bool = True

    def __init__(
        self, parent: Optional[FieldTower], zero_raw: Raw, one_raw: Raw
    ) -> None:
        self.parent = parent
        self.zero_raw = zero_raw
        self.one_raw = one_raw

    # -- structure ---------------------------------------------------------

    @property
    @abstractmethod
    def descriptor(self) -> str:
        """Layer descriptor in the scenario-file syntax."""

    @property
    @abstractmethod
    def generators(self) -> Tuple[str, ...]:
        """Names of the 2-basis generators, indexed by mask bit."""

    @property
    @abstractmethod
    def basis_masks(self) -> Tuple[int, ...]:
        """Square-free monomials of the 2-basis, as generator bit masks."""

    @abstractmethod
    def _own_symbols(self) -> Dict[str, Raw]:
        """Names introduced by this level, with their raw values."""

    @cached_property
    def chain(self) -> Tuple[FieldTower, ...]:
        if self.parent is None:
            return (self,)
        return self.parent.chain + (self,)

    @property
    def base(self) -> FieldTower:
        return self.chain[0]

    @cached_property
    def key(self) -> Tuple[str, ...]:
        return tuple(level.descriptor for level in self.chain)

    @cached_property
    def description(self) -> Dict[str, Any]:
        return {"base": self.key[0], "layers": list(self.key[1:])}

    @cached_property
    def symbols(self) -> Dict[str, Raw]:
        names: Dict[str, Raw] = {}
        if self.parent is not None:
            names = {k: self._embed_parent(v) for k, v in self.parent.symbols.items()}
        names.update(self._own_symbols())
        return names

    @property
    def algebraic_degree(self) -> int:
        degree = 1
        for level in self.chain[1:]:
            if level.layer_degree is not None:
                degree *= level.layer_degree
        return degree

    @property
    def rational_variable_count(self) -> int:
        return sum(1 for level in self.chain if level.layer_degree is None)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldTower):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        layers = ", ".join(self.key[1:])
        return f"FieldTower({self.key[0]}{'; ' + layers if layers else ''})"

    def is_extension_of(self, other: FieldTower) -> bool:
        """True if ``other`` is a level of this tower (including itself)."""
        return any(level == other for level in self.chain)

    def layers_above(self, other: FieldTower) -> Tuple[FieldTower, ...]:
        if not self.is_extension_of(other):
            raise ValueError(f"{self!r} is not an extension of {other!r}")
        return self.chain[len(other.chain) :]

    def is_separable_over(self, other: FieldTower) -> bool:
        """True if no inseparable layer lies between ``other`` and this level."""
        return all(level.separable for level in self.layers_above(other))

    def degree_over(self, other: FieldTower) -> Optional[int]:
        """``[self : other]``, or ``None`` if a rational layer lies between."""
        degree = 1
        for level in self.layers_above(other):
            if level.layer_degree is None:
                return None
            degree *= level.layer_degree
        return degree

    # -- raw arithmetic ----------------------------------------------------

    @abstractmethod
    def _add(self, a: Raw, b: Raw) -> Raw: ...

    @abstractmethod
    def _mul(self, a: Raw, b: Raw) -> Raw: ...

    @abstractmethod
    def _inv(self, a: Raw) -> Raw: ...

    @abstractmethod
    def _embed_parent(self, b: Raw) -> Raw:
        """Embed a raw element of the parent level."""

    @abstractmethod
    def _decompose(self, a: Raw) -> Dict[int, Raw]:
        """Coefficients ``c_m`` with ``a = sum c_m^2 * b_m`` (zeros omitted)."""

    @abstractmethod
    def _format(self, a: Raw) -> str: ...

    @abstractmethod
    def _random(self, rng: random.Random, degree: int) -> Raw: ...

    def _is_artin_schreier_image(self, a: Raw) -> Optional[bool]:
        """Decide ``a in {e^2 + e}``; ``None`` when undecided."""
        return None

    def _square(self, a: Raw) -> Raw:
        return self._mul(a, a)

    def _sqrt(self, a: Raw) -> Optional[Raw]:
        parts = self._decompose(a)
        if any(mask for mask in parts):
            return None
        return parts.get(0, self.zero_raw)

    def _lift(self, raw: Raw, source: FieldTower) -> Raw:
        for level in self.layers_above(source):
            raw = level._embed_parent(raw)
        return raw

    @cached_property
    def _generator_raws(self) -> Tuple[Raw, ...]:
        inherited: Tuple[Raw, ...] = ()
        if self.parent is not None:
            inherited = tuple(
                self._embed_parent(r) for r in self.parent._generator_raws
            )
        own = self._own_symbols()
        fresh = tuple(own[name] for name in self.generators[len(inherited) :])
        return inherited + fresh

    def _monomial(self, mask: int) -> Raw:
        value = self.one_raw
        for i, gen in enumerate(self._generator_raws):
            if (mask >> i) & 1:
                value = self._mul(value, gen)
        return value

    def _sorted_masks(self, masks: Sequence[int]) -> Tuple[int, ...]:
        width = len(self.generators)
        return tuple(sorted(masks, key=lambda m: _mask_order(m, width)))

    # -- element level API -------------------------------------------------

    def element(self, raw: Raw) -> FieldElement:
        return FieldElement(self, raw)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, self.zero_raw)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, self.one_raw)

    def from_int(self, n: int) -> FieldElement:
        return self.one if n % 2 else self.zero

    def gen(self, name: str) -> FieldElement:
        try:
            return FieldElement(self, self.symbols[name])
        except KeyError:
            raise ValueError(f"{name!r} is not a generator of {self!r}") from None

    def __call__(self, value: Scalar) -> FieldElement:
        """Coerce an integer, a literal string or a subfield element."""
        if isinstance(value, FieldElement):
            return self.embed(value)
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise ValueError(f"cannot coerce {value!r} into {self!r}")
        if isinstance(value, int):
            return self.from_int(value)
        from involab.fields.parsing import parse_element

        return parse_element(value, self)

    def embed(self, x: FieldElement) -> FieldElement:
        """Injective ring map from a level of this tower into this level."""
        if x.field == self:
            return x
        if not self.is_extension_of(x.field):
            raise ValueError(f"{x.field!r} is not a subfield of {self!r}")
        return FieldElement(self, self._lift(x.raw, x.field))

    def random_element(self, rng: random.Random, degree: int = 1) -> FieldElement:
        return FieldElement(self, self._random(rng, degree))

    def small_element(self, rng: random.Random) -> FieldElement:
        """A 2-basis monomial, or the sum of two distinct ones.

        Args:
            rng: Seeded generator the choice is drawn from.

        Returns:
            A nonzero element of low height, cheap to multiply.
        """
        basis = list(self.two_basis())
        picks = rng.sample(basis, min(len(basis), rng.choice((1, 1, 2))))
        total = self.zero
        for b in picks:
            total = total + b
        return total

    def two_basis(self) -> TwoBasis:
        return TwoBasis(self, self.basis_masks)

    def frobenius_decompose(self, x: Scalar) -> List[FieldElement]:
        """Coefficients ``c_j`` with ``x = sum c_j^2 * b_j`` over the 2-basis."""
        raw = self(x).raw
        parts = self._decompose(raw)
        return [FieldElement(self, parts.get(m, self.zero_raw)) for m in self.basis_masks]

    def sqrt_exact(self, x: Scalar) -> Optional[FieldElement]:
        """The square root of ``x`` if ``x`` is a square, else ``None``."""
        root = self._sqrt(self(x).raw)
        return None if root is None else FieldElement(self, root)

    # -- extension ---------------------------------------------------------

    def _fresh_name(self, stem: str) -> str:
        taken = set(self.symbols)
        if stem not in taken:
            return stem
        i = 2
        while f"{stem}{i}" in taken:
            i += 1
        return f"{stem}{i}"

    def _check_name(self, name: str) -> None:
        if not _IDENTIFIER.match(name):
            raise ValueError(f"invalid generator name {name!r}")
        if name in RESERVED_NAMES or name in self.symbols:
            raise ValueError(f"generator name {name!r} is reserved or already used")

    def _check_degree(self, layer_degree: int) -> None:
        total = self.algebraic_degree * layer_degree
        if total > MAX_ALGEBRAIC_DEGREE:
            raise ValueError(
                f"total algebraic degree {total} exceeds {MAX_ALGEBRAIC_DEGREE}"
            )

    def extend(self, layer: Layer) -> FieldTower:
        """Return the tower obtained by adjoining ``layer`` on top of this level."""
        from involab.fields.extensions import (
            ArtinSchreierExtension,
            InseparableQuadraticExtension,
            OddSeparableExtension,
        )
        from involab.fields.function_field import RationalFunctionField

        new: FieldTower
        if isinstance(layer, Rational):
            self._check_name(layer.name)
            if self.rational_variable_count >= MAX_RATIONAL_VARIABLES:
                raise ValueError(
                    f"at most {MAX_RATIONAL_VARIABLES} rational variables are supported"
                )
            new = RationalFunctionField(self, layer.name)
        elif isinstance(layer, ArtinSchreier):
            name = layer.name or self._fresh_name("eta")
            self._check_name(name)
            self._check_degree(2)
            delta = self(layer.delta)
            image = self._is_artin_schreier_image(delta.raw)
            if image is None:
                raise ValueError(
                    f"cannot certify that X^2+X+({delta}) is irreducible over {self!r}"
                )
            if image:
                raise ValueError(f"{delta} is of the form e^2+e; X^2+X+delta splits")
            new = ArtinSchreierExtension(self, delta.raw, name)
        elif isinstance(layer, OddSeparable):
            name = layer.name or self._fresh_name("theta")
            self._check_name(name)
            coefficients = tuple(self(c).raw for c in layer.min_poly)
            self._check_degree(max(len(coefficients) - 1, 1))
            new = OddSeparableExtension(self, coefficients, name)
        elif isinstance(layer, InseparableQuadratic):
            g = self(layer.g)
            index = self._generator_index(g.raw)
            name = layer.name or self._fresh_name(f"sqrt_{self.generators[index]}")
            self._check_name(name)
            self._check_degree(2)
            new = InseparableQuadraticExtension(self, index, name)
        else:
            raise ValueError(f"unknown layer descriptor {layer!r}")
        logger.debug("extended %r by %s", self, new.descriptor)
        return new

    def _generator_index(self, raw: Raw) -> int:
        for i, gen in enumerate(self._generator_raws):
            if gen == raw and (1 << i) in self.basis_masks:
                return i
        raise ValueError(
            f"{self._format(raw)} is not a 2-basis generator of {self!r}"
        )


@dataclass(frozen=True)
class TwoBasis:
    """Monomials ``b_j`` with ``F = sum F^2 * b_j``; ``b_0 = 1``."""

    field: FieldTower
    masks: Tuple[int, ...]
    elements: Tuple[FieldElement, ...] = dataclass_field(init=False)

    def __post_init__(self) -> None:
        values = tuple(FieldElement(self.field, self.field._monomial(m)) for m in self.masks)
        object.__setattr__(self, "elements", values)

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.elements)

    def __getitem__(self, index: int) -> FieldElement:
        return self.elements[index]

    @property
    def names(self) -> List[str]:
        names = []
        for mask in self.masks:
            parts = [
                gen for i, gen in enumerate(self.field.generators) if (mask >> i) & 1
            ]
            names.append("*".join(parts) if parts else "1")
        return names


class FieldElement:
    """Immutable element of a :class:`FieldTower` level."""

    __slots__ = ("field", "raw")

    field: FieldTower
    raw: Raw

    def __init__(self, field: FieldTower, raw: Raw) -> None:
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("FieldElement is immutable")

    def __reduce__(self) -> Tuple[Any, ...]:
        return (FieldElement, (self.field, self.raw))

    def _common(self, other: Any) -> Tuple[FieldTower, Raw, Raw]:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field, self.raw, self.field.from_int(other).raw
        if not isinstance(other, FieldElement):
            raise TypeError(f"unsupported operand {other!r}")
        if other.field == self.field:
            return self.field, self.raw, other.raw
        if self.field.is_extension_of(other.field):
            return self.field, self.raw, self.field._lift(other.raw, other.field)
        if other.field.is_extension_of(self.field):
            return other.field, other.field._lift(self.raw, self.field), other.raw
        raise ValueError(f"elements of unrelated fields {self.field!r}, {other.field!r}")

    def __add__(self, other: Any) -> FieldElement:
        try:
            F, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return FieldElement(F, F._add(a, b))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> FieldElement:
        return self

    def __mul__(self, other: Any) -> FieldElement:
        try:
            F, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return FieldElement(F, F._mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> FieldElement:
        try:
            F, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        if b == F.zero_raw:
            raise ZeroDivisionError("division by zero in a field tower")
        return FieldElement(F, F._mul(a, F._inv(b)))

    def __rtruediv__(self, other: Any) -> FieldElement:
        try:
            F, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        if a == F.zero_raw:
            raise ZeroDivisionError("division by zero in a field tower")
        return FieldElement(F, F._mul(b, F._inv(a)))

    def __pow__(self, n: int) -> FieldElement:
        if n < 0:
            return self.inverse() ** (-n)
        F = self.field
        result, base = F.one_raw, self.raw
        while n:
            if n & 1:
                result = F._mul(result, base)
            base = F._square(base)
            n >>= 1
        return FieldElement(F, result)

    def inverse(self) -> FieldElement:
        if self.raw == self.field.zero_raw:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.field, self.field._inv(self.raw))

    def square(self) -> FieldElement:
        return FieldElement(self.field, self.field._square(self.raw))

    def is_zero(self) -> bool:
        return self.raw == self.field.zero_raw

    def is_one(self) -> bool:
        return self.raw == self.field.one_raw

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.raw == self.field.from_int(other).raw
        if not isinstance(other, FieldElement):
            return NotImplemented
        if self.field != other.field:
            raise TypeError(
                f"cannot compare elements of {self.field!r} and {other.field!r}; "
                "embed into a common level first"
            )
        return self.raw == other.raw

    def __hash__(self) -> int:
        if self.raw == self.field.zero_raw:
            return hash(0)
        if self.raw == self.field.one_raw:
            return hash(1)
        return hash((self.field.key, self.raw))

    def __str__(self) -> str:
        return self.field._format(self.raw)

    def __repr__(self) -> str:
        return f"FieldElement({self.field._format(self.raw)!r})"
