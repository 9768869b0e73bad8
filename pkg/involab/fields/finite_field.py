"""Finite base fields GF(2^k) with fixed defining polynomials."""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from involab.fields.base_field import FieldTower, Raw, format_power

# Defining polynomials, highest degree first: x^2+x+1, x^3+x+1, x^4+x+1.
BASE_MODULI: Dict[int, List[int]] = {
    2: [1, 1, 1],
    3: [1, 0, 1, 1],
    4: [1, 0, 0, 1, 1],
}
SUPPORTED_ORDERS = (2, 4, 8, 16)


def _bits(n: int) -> List[int]:
    return [int(b) for b in bin(n)[2:]] if n else []


def _from_bits(bits: List[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


class FiniteField(FieldTower):
    """GF(2^k) for k <= 4; elements are bit masks of polynomials in ``g``."""

    layer_degree = 1

    def __init__(self, order: int = 2) -> None:
        if order not in SUPPORTED_ORDERS:
            raise ValueError(
                f"base field order must be one of {SUPPORTED_ORDERS}, got {order}"
            )
        super().__init__(None, 0, 1)
        self.order = order
        self.k = order.bit_length() - 1
        self._mul_table, self._inv_table = self._build_tables()

    def _build_tables(self) -> Tuple[List[List[int]], List[int]]:
        if self.k == 1:
            return [[0, 0], [0, 1]], [0, 1]
        modulus = ZZ.map(BASE_MODULI[self.k])
        if not gf_irreducible_p(modulus, 2, ZZ):
            raise ValueError(f"defining polynomial of GF({self.order}) is reducible")
        table = [[0] * self.order for _ in range(self.order)]
        for a in range(1, self.order):
            for b in range(a, self.order):
                product = gf_rem(gf_mul(_bits(a), _bits(b), 2, ZZ), modulus, 2, ZZ)
                table[a][b] = table[b][a] = _from_bits(product)
        inverse = [0] * self.order
        for a in range(1, self.order):
            inverse[a] = table[a].index(1)
        return table, inverse

    @property
    def descriptor(self) -> str:
        return f"GF({self.order})"

    @property
    def generators(self) -> Tuple[str, ...]:
        return ()

    @property
    def basis_masks(self) -> Tuple[int, ...]:
        return (0,)

    def _own_symbols(self) -> Dict[str, Raw]:
        return {"g": 2} if self.k > 1 else {}

    def _add(self, a: int, b: int) -> int:
        return a ^ b

    def _mul(self, a: int, b: int) -> int:
        return self._mul_table[a][b]

    def _inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv_table[a]

    def _embed_parent(self, b: Raw) -> Raw:
        raise ValueError("the base field has no parent")

    def _frobenius_inverse(self, a: int) -> int:
        # a^(2^(k-1)) is the unique square root in GF(2^k)
        for _ in range(self.k - 1):
            a = self._mul_table[a][a]
        return a

    def _decompose(self, a: int) -> Dict[int, Raw]:
        return {0: self._frobenius_inverse(a)} if a else {}

    def _sqrt(self, a: int) -> Optional[Raw]:
        return self._frobenius_inverse(a)

    def trace(self, a: int) -> int:
        """Absolute trace to GF(2)."""
        total, power = 0, a
        for _ in range(self.k):
            total ^= power
            power = self._mul_table[power][power]
        return total

    def _is_artin_schreier_image(self, a: int) -> Optional[bool]:
        return self.trace(a) == 0

    def _format(self, a: int) -> str:
        if a == 0:
            return "0"
        terms = [format_power("1", "g", i) for i in reversed(range(self.k)) if (a >> i) & 1]
        return "+".join(terms)

    def _random(self, rng: random.Random, degree: int) -> int:
        return rng.randrange(self.order)
