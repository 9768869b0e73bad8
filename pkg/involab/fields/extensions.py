"""Algebraic layers: Artin-Schreier, odd separable and inseparable quadratic.

Each layer is a simple extension ``K = F(theta)`` of its parent. Elements
are ``d``-tuples of parent raws, the coordinates in the power basis
``1, theta, ..., theta^(d-1)``.
"""

from __future__ import annotations

import logging
import math
import random
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from involab.fields import polynomials as P
from involab.fields.base_field import FieldTower, Raw, ZeroDivisorError, format_power

logger = logging.getLogger(__name__)

Coordinates = Tuple[Raw, ...]


class _SimpleExtension(FieldTower):
    """Shared plumbing for layers with a power basis over the parent."""

    def __init__(self, parent: FieldTower, degree: int, name: str) -> None:
        zero, one = parent.zero_raw, parent.one_raw
        super().__init__(parent, (zero,) * degree, (one,) + (zero,) * (degree - 1))
        self.base_field = parent
        self.degree = degree
        self.name = name

    def _own_symbols(self) -> Dict[str, Raw]:
        K = self.base_field
        generator = [K.zero_raw] * self.degree
        generator[1] = K.one_raw
        return {self.name: tuple(generator)}

    def _embed_parent(self, b: Raw) -> Coordinates:
        return (b,) + self.zero_raw[1:]

    def _add(self, a: Coordinates, b: Coordinates) -> Coordinates:
        K = self.base_field
        return tuple(K._add(x, y) for x, y in zip(a, b))

    def _is_constant(self, a: Coordinates) -> bool:
        zero = self.base_field.zero_raw
        return all(c == zero for c in a[1:])

    def _format(self, a: Coordinates) -> str:
        K = self.base_field
        terms = [
            format_power(K._format(c), self.name, i)
            for i, c in reversed(list(enumerate(a)))
            if c != K.zero_raw
        ]
        return "+".join(terms) if terms else "0"

    def _random(self, rng: random.Random, degree: int) -> Coordinates:
        return tuple(self.base_field._random(rng, degree) for _ in range(self.degree))


class ArtinSchreierExtension(_SimpleExtension):
    """``F(eta)`` with ``eta^2 + eta = delta``; separable of degree 2."""

    layer_degree = 2
    separable = True

    def __init__(self, parent: FieldTower, delta: Raw, name: str) -> None:
        super().__init__(parent, 2, name)
        self.delta = delta

    @property
    def descriptor(self) -> str:
        return f"as:{self.base_field._format(self.delta)}@{self.name}"

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.base_field.generators

    @property
    def basis_masks(self) -> Tuple[int, ...]:
        return self.base_field.basis_masks

    def _mul(self, a: Coordinates, b: Coordinates) -> Coordinates:
        K = self.base_field
        (p, q), (r, s) = a, b
        qs = K._mul(q, s)
        return (
            K._add(K._mul(p, r), K._mul(qs, self.delta)),
            K._add(K._add(K._mul(p, s), K._mul(q, r)), qs),
        )

    def _inv(self, a: Coordinates) -> Coordinates:
        K = self.base_field
        p, q = a
        # (p + q*eta)(p + q + q*eta) = p^2 + pq + q^2*delta
        norm = K._add(
            K._add(K._square(p), K._mul(p, q)), K._mul(K._square(q), self.delta)
        )
        if norm == K.zero_raw:
            raise ZeroDivisionError("zero has no inverse")
        n_inv = K._inv(norm)
        return K._mul(K._add(p, q), n_inv), K._mul(q, n_inv)

    def _decompose(self, a: Coordinates) -> Dict[int, Raw]:
        K = self.base_field
        p, q = a
        # (u + v*eta)^2 = (u^2 + v^2*delta) + v^2*eta
        v = K._decompose(q)
        u = K._decompose(K._add(p, K._mul(self.delta, q)))
        result: Dict[int, Raw] = {}
        for mask in set(u) | set(v):
            result[mask] = (u.get(mask, K.zero_raw), v.get(mask, K.zero_raw))
        return result

    def _is_artin_schreier_image(self, a: Coordinates) -> Optional[bool]:
        if not self._is_constant(a):
            return None
        K = self.base_field
        # (x + y*eta)^2 + (x + y*eta) is constant only for y in {0, 1}
        first = K._is_artin_schreier_image(a[0])
        second = K._is_artin_schreier_image(K._add(a[0], self.delta))
        if first or second:
            return True
        if first is False and second is False:
            return False
        return None


class OddSeparableExtension(_SimpleExtension):
    """``F[x]/(f)`` for a monic separable ``f`` of odd degree."""

    separable = True

    def __init__(
        self, parent: FieldTower, coefficients: Tuple[Raw, ...], name: str
    ) -> None:
        d = len(coefficients) - 1
        super().__init__(parent, max(d, 1), name)
        self.layer_degree = d
        self.modulus: P.Poly = P.strip(parent, coefficients)
        self._validate()

    def _validate(self) -> None:
        K = self.base_field
        f, d = self.modulus, self.layer_degree
        if len(f) != d + 1 or d < 3 or d % 2 == 0:
            raise ValueError(
                f"minimal polynomial {self._format_modulus()} must have odd degree >= 3"
            )
        if f[-1] != K.one_raw:
            raise ValueError(f"minimal polynomial {self._format_modulus()} is not monic")
        df = P.derivative(K, f)
        if not df:
            raise ValueError(
                f"minimal polynomial {self._format_modulus()} has zero derivative"
            )
        if P.gcd(K, f, df) != (K.one_raw,):
            raise ValueError(
                f"minimal polynomial {self._format_modulus()} is not square-free"
            )
        if self.over_prime_field:
            bits = [1 if c == K.one_raw else 0 for c in reversed(f)]
            if not gf_irreducible_p(ZZ.map(bits), 2, ZZ):
                raise ValueError(
                    f"minimal polynomial {self._format_modulus()} is reducible over GF(2)"
                )
            below = self.constant_field_degree
            if math.gcd(d, below) != 1:
                raise ValueError(
                    f"degree {d} is not coprime to the constant field degree {below}; "
                    f"{self._format_modulus()} splits"
                )
        else:
            logger.debug(
                "irreducibility of %s is not certified; zero divisors raise",
                self._format_modulus(),
            )

    @property
    def over_prime_field(self) -> bool:
        K = self.base_field
        return all(c in (K.zero_raw, K.one_raw) for c in self.modulus)

    @property
    def constant_field_degree(self) -> int:
        """Degree over GF(2) of the constant field below this layer."""
        degree = getattr(self.base, "k", 1)
        for level in self.base_field.chain[1:]:
            if isinstance(level, OddSeparableExtension) and level.over_prime_field:
                degree *= level.layer_degree
        return degree

    def _format_modulus(self) -> str:
        K = self.base_field
        terms = [
            format_power(K._format(c), "x", i)
            for i, c in reversed(list(enumerate(self.modulus)))
            if c != K.zero_raw
        ]
        return "+".join(terms) if terms else "0"

    @property
    def descriptor(self) -> str:
        return f"odd:{self._format_modulus()}@{self.name}"

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.base_field.generators

    @property
    def basis_masks(self) -> Tuple[int, ...]:
        return self.base_field.basis_masks

    def _pad(self, f: P.Poly) -> Coordinates:
        return tuple(f) + (self.base_field.zero_raw,) * (self.degree - len(f))

    def _mul(self, a: Coordinates, b: Coordinates) -> Coordinates:
        K = self.base_field
        product = P.mul(K, P.strip(K, a), P.strip(K, b))
        return self._pad(P.rem(K, product, self.modulus))

    def _inv(self, a: Coordinates) -> Coordinates:
        K = self.base_field
        f = P.strip(K, a)
        if not f:
            raise ZeroDivisionError("zero has no inverse")
        s, _, h = P.gcdex(K, f, self.modulus)
        if h != (K.one_raw,):
            raise ZeroDivisorError(
                f"{self._format(a)} is a zero divisor: {self._format_modulus()} is reducible"
            )
        return self._pad(s)

    @cached_property
    def _even_power_inverse(self) -> List[List[Raw]]:
        """Inverse of the matrix whose columns are the coordinates of theta^(2l)."""
        K = self.base_field
        d = self.degree
        columns = []
        theta_sq = self._square(self._own_symbols()[self.name])
        power = self.one_raw
        for _ in range(d):
            columns.append(power)
            power = self._mul(power, theta_sq)
        # Gauss-Jordan on [M | I]
        rows = [
            [columns[j][i] for j in range(d)]
            + [K.one_raw if i == j else K.zero_raw for j in range(d)]
            for i in range(d)
        ]
        for col in range(d):
            pivot = next(
                (r for r in range(col, d) if rows[r][col] != K.zero_raw), None
            )
            if pivot is None:
                raise ZeroDivisorError(
                    f"even powers of {self.name} are dependent: "
                    f"{self._format_modulus()} is reducible"
                )
            rows[col], rows[pivot] = rows[pivot], rows[col]
            inv = K._inv(rows[col][col])
            rows[col] = [K._mul(inv, x) for x in rows[col]]
            for r in range(d):
                factor = rows[r][col]
                if r != col and factor != K.zero_raw:
                    rows[r] = [K._add(x, K._mul(factor, y)) for x, y in zip(rows[r], rows[col])]
        return [row[d:] for row in rows]

    def _decompose(self, a: Coordinates) -> Dict[int, Raw]:
        K = self.base_field
        inverse = self._even_power_inverse
        # a = sum_l y_l * theta^(2l) with y_l in the parent
        y = []
        for row in inverse:
            acc = K.zero_raw
            for m, x in zip(row, a):
                if m != K.zero_raw and x != K.zero_raw:
                    acc = K._add(acc, K._mul(m, x))
            y.append(acc)
        parts = [K._decompose(value) for value in y]
        result: Dict[int, Raw] = {}
        for mask in set().union(*parts):
            result[mask] = tuple(part.get(mask, K.zero_raw) for part in parts)
        return result

    def _is_artin_schreier_image(self, a: Coordinates) -> Optional[bool]:
        if not self._is_constant(a):
            return None
        # odd degree: a constant is in the image here iff it is below
        return self.base_field._is_artin_schreier_image(a[0])


class InseparableQuadraticExtension(_SimpleExtension):
    """``F(rho)`` with ``rho^2 = g`` for a 2-basis generator ``g``."""

    layer_degree = 2
    separable = False

    def __init__(self, parent: FieldTower, index: int, name: str) -> None:
        super().__init__(parent, 2, name)
        self.index = index
        self.g = parent._generator_raws[index]
        self._old_bit = 1 << index
        self._new_bit = 1 << len(parent.generators)

    @property
    def descriptor(self) -> str:
        return f"insep:{self.base_field.generators[self.index]}@{self.name}"

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.base_field.generators + (self.name,)

    def _substitute(self, mask: int) -> int:
        if mask & self._old_bit:
            return (mask ^ self._old_bit) | self._new_bit
        return mask

    @property
    def basis_masks(self) -> Tuple[int, ...]:
        return self._sorted_masks(
            tuple(self._substitute(m) for m in self.base_field.basis_masks)
        )

    def _mul(self, a: Coordinates, b: Coordinates) -> Coordinates:
        K = self.base_field
        (p, q), (r, s) = a, b
        return (
            K._add(K._mul(p, r), K._mul(K._mul(q, s), self.g)),
            K._add(K._mul(p, s), K._mul(q, r)),
        )

    def _inv(self, a: Coordinates) -> Coordinates:
        K = self.base_field
        p, q = a
        norm = K._add(K._square(p), K._mul(K._square(q), self.g))
        if norm == K.zero_raw:
            raise ZeroDivisionError("zero has no inverse")
        n_inv = K._inv(norm)
        return K._mul(p, n_inv), K._mul(q, n_inv)

    def _decompose(self, a: Coordinates) -> Dict[int, Raw]:
        K = self.base_field
        p, q = a
        # g*c^2 = (rho*c)^2, so the g-part of p moves into the rho coordinate
        result: Dict[int, Raw] = {}
        for part, extra in ((K._decompose(p), 0), (K._decompose(q), self._new_bit)):
            for mask, value in part.items():
                low = mask & ~self._old_bit
                key = low | extra
                current = list(result.get(key, (K.zero_raw, K.zero_raw)))
                current[1 if mask & self._old_bit else 0] = value
                result[key] = tuple(current)
        return result

    def _is_artin_schreier_image(self, a: Coordinates) -> Optional[bool]:
        if not self._is_constant(a):
            return None
        return self.base_field._is_artin_schreier_image(a[0])

