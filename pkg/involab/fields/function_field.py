"""Rational function layers ``F(t)`` over a tower level."""

from __future__ import annotations

import random
from typing import Dict, Optional, Tuple

from involab.fields import polynomials as P
from involab.fields.base_field import FieldTower, Raw, _wrap, format_power

Fraction = Tuple[P.Poly, P.Poly]


class RationalFunctionField(FieldTower):
    """Adjoin a transcendental variable to ``parent``.

    Elements are reduced fractions ``(numerator, denominator)`` of dense
    polynomials over the parent, with a monic denominator. Zero is
    ``((), (1,))``.
    """

    layer_degree = None

    def __init__(self, parent: FieldTower, name: str) -> None:
        one = parent.one_raw
        super().__init__(parent, ((), (one,)), ((one,), (one,)))
        self.base_field = parent
        self.name = name
        self._bit = 1 << len(parent.generators)

    # -- structure ---------------------------------------------------------

    @property
    def descriptor(self) -> str:
        return f"rat:{self.name}"

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.base_field.generators + (self.name,)

    @property
    def basis_masks(self) -> Tuple[int, ...]:
        below = self.base_field.basis_masks
        return self._sorted_masks(below + tuple(m | self._bit for m in below))

    def _own_symbols(self) -> Dict[str, Raw]:
        K = self.base_field
        return {self.name: ((K.zero_raw, K.one_raw), (K.one_raw,))}

    def _embed_parent(self, b: Raw) -> Raw:
        K = self.base_field
        return (P.constant(K, b), (K.one_raw,))

    # -- fractions ---------------------------------------------------------

    def _make(self, num: P.Poly, den: P.Poly) -> Fraction:
        """Reduce ``num/den`` to canonical form."""
        K = self.base_field
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            return self.zero_raw
        g = P.gcd(K, num, den)
        if P.degree(g) > 0:
            num, den = P.quo(K, num, g), P.quo(K, den, g)
        lc, den = P.monic(K, den)
        if lc != K.one_raw:
            num = P.scale(K, num, K._inv(lc))
        return num, den

    def _is_unit_poly(self, f: P.Poly) -> bool:
        return len(f) == 1 and f[0] == self.base_field.one_raw

    def _add(self, a: Fraction, b: Fraction) -> Fraction:
        K = self.base_field
        (na, da), (nb, db) = a, b
        if not na:
            return b
        if not nb:
            return a
        if da == db:
            return self._make(P.add(K, na, nb), da)
        g = P.gcd(K, da, db)
        if self._is_unit_poly(g):
            num = P.add(K, P.mul(K, na, db), P.mul(K, nb, da))
            return (num, P.mul(K, da, db)) if num else self.zero_raw
        s = P.quo(K, da, g)
        t = P.add(K, P.mul(K, na, P.quo(K, db, g)), P.mul(K, nb, s))
        if not t:
            return self.zero_raw
        g2 = P.gcd(K, t, g)
        if self._is_unit_poly(g2):
            return t, P.mul(K, s, db)
        return P.quo(K, t, g2), P.mul(K, s, P.quo(K, db, g2))

    def _mul(self, a: Fraction, b: Fraction) -> Fraction:
        K = self.base_field
        (na, da), (nb, db) = a, b
        if not na or not nb:
            return self.zero_raw
        g1 = P.gcd(K, na, db)
        if not self._is_unit_poly(g1):
            na, db = P.quo(K, na, g1), P.quo(K, db, g1)
        g2 = P.gcd(K, nb, da)
        if not self._is_unit_poly(g2):
            nb, da = P.quo(K, nb, g2), P.quo(K, da, g2)
        return P.mul(K, na, nb), P.mul(K, da, db)

    def _inv(self, a: Fraction) -> Fraction:
        K = self.base_field
        num, den = a
        if not num:
            raise ZeroDivisionError("zero has no inverse")
        lc, monic_num = P.monic(K, num)
        return P.scale(K, den, K._inv(lc)), monic_num

    def _square(self, a: Fraction) -> Fraction:
        num, den = a
        return self._poly_square(num), self._poly_square(den)

    def _poly_square(self, f: P.Poly) -> P.Poly:
        K = self.base_field
        out = []
        for c in f:
            out.extend((K._square(c), K.zero_raw))
        return P.strip(K, out)

    def _poly_sqrt(self, f: P.Poly) -> Optional[P.Poly]:
        """Square root of a polynomial, or ``None`` when it is not a square."""
        K = self.base_field
        if any(c != K.zero_raw for c in f[1::2]):
            return None
        root = []
        for c in f[0::2]:
            r = K._sqrt(c)
            if r is None:
                return None
            root.append(r)
        return P.strip(K, root)

    # -- Frobenius decomposition --------------------------------------------

    def _decompose(self, a: Fraction) -> Dict[int, Raw]:
        K = self.base_field
        num, den = a
        if not num:
            return {}
        # num/den = (num*den) / den^2; split num*den by exponent parity
        product = P.mul(K, num, den)
        even_parts: Dict[int, list] = {}
        odd_parts: Dict[int, list] = {}
        for i, c in enumerate(product):
            if c == K.zero_raw:
                continue
            target = odd_parts if i % 2 else even_parts
            for mask, root in K._decompose(c).items():
                coefficients = target.setdefault(mask, [])
                coefficients.extend([K.zero_raw] * (i // 2 + 1 - len(coefficients)))
                coefficients[i // 2] = root
        result: Dict[int, Raw] = {}
        for mask, coefficients in even_parts.items():
            value = self._make(P.strip(K, coefficients), den)
            if value != self.zero_raw:
                result[mask] = value
        for mask, coefficients in odd_parts.items():
            value = self._make(P.strip(K, coefficients), den)
            if value != self.zero_raw:
                result[mask | self._bit] = value
        return result

    def _sqrt(self, a: Fraction) -> Optional[Raw]:
        num, den = a
        root_num = self._poly_sqrt(num)
        if root_num is None:
            return None
        root_den = self._poly_sqrt(den)
        if root_den is None:
            return None
        return root_num, root_den

    def _is_artin_schreier_image(self, a: Fraction) -> Optional[bool]:
        K = self.base_field
        num, den = a
        if P.degree(den) > 0:
            # a pole of odd order cannot be a pole of e^2+e
            return False if self._poly_sqrt(den) is None else None
        f = list(num)
        while len(f) > 1:
            D = len(f) - 1
            if D % 2:
                return False
            root = K._sqrt(f[D])
            if root is None:
                return False
            # subtract (a t^(D/2))^2 + a t^(D/2)
            f[D] = K.zero_raw
            f[D // 2] = K._add(f[D // 2], root)
            f = list(P.strip(K, f))
        return K._is_artin_schreier_image(f[0] if f else K.zero_raw)

    # -- presentation --------------------------------------------------------

    def _format_poly(self, f: P.Poly) -> str:
        K = self.base_field
        terms = [
            format_power(K._format(c), self.name, i)
            for i, c in reversed(list(enumerate(f)))
            if c != K.zero_raw
        ]
        return "+".join(terms) if terms else "0"

    def _format(self, a: Fraction) -> str:
        num, den = a
        if self._is_unit_poly(den):
            return self._format_poly(num)
        return f"{_wrap(self._format_poly(num))}/{_wrap(self._format_poly(den), '+*/^')}"

    def _random(self, rng: random.Random, degree: int) -> Fraction:
        K = self.base_field
        num = P.strip(K, [K._random(rng, degree) for _ in range(rng.randint(0, degree) + 1)])
        if rng.random() < 0.5:
            return self._make(num, (K.one_raw,))
        den_degree = rng.randint(1, max(degree, 1))
        den = [K._random(rng, degree) for _ in range(den_degree)] + [K.one_raw]
        return self._make(num, P.strip(K, den))
