"""Dense univariate polynomials over one level of a field tower.

Polynomials are tuples of raw coefficients of ``field``, lowest degree
first, with no trailing zeros. The zero polynomial is ``()``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Sequence, Tuple

if TYPE_CHECKING:
    from involab.fields.base_field import FieldTower

Poly = Tuple[Any, ...]


def strip(field: FieldTower, f: Sequence[Any]) -> Poly:
    """Drop trailing zero coefficients."""
    zero = field.zero_raw
    end = len(f)
    while end and f[end - 1] == zero:
        end -= 1
    return tuple(f[:end])


def degree(f: Poly) -> int:
    """Degree of ``f``; the zero polynomial has degree -1."""
    return len(f) - 1


def constant(field: FieldTower, c: Any) -> Poly:
    return () if c == field.zero_raw else (c,)


def add(field: FieldTower, f: Poly, g: Poly) -> Poly:
    """Sum of two polynomials.

    Args:
        field: Coefficient field.
        f: First summand.
        g: Second summand.

    Returns:
        ``f + g``, normalized by :func:`strip`.
    """
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = field._add(out[i], c)
    return strip(field, out)


def scale(field: FieldTower, f: Poly, c: Any) -> Poly:
    """Multiply every coefficient of ``f`` by the raw scalar ``c``.

    Args:
        field: Coefficient field.
        f: The polynomial.
        c: Raw element of ``field``.

    Returns:
        ``c * f``; ``f`` itself when ``c`` is one.
    """
    if c == field.zero_raw:
        return ()
    if c == field.one_raw:
        return f
    return strip(field, [field._mul(a, c) for a in f])


def shift(field: FieldTower, f: Poly, n: int) -> Poly:
    """Multiply ``f`` by ``x**n``."""
    if not f:
        return ()
    return (field.zero_raw,) * n + f


def mul(field: FieldTower, f: Poly, g: Poly) -> Poly:
    """Schoolbook product, skipping zero coefficients.

    Args:
        field: Coefficient field.
        f: First factor.
        g: Second factor.

    Returns:
        ``f * g``, normalized by :func:`strip`.
    """
    if not f or not g:
        return ()
    zero = field.zero_raw
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == zero:
            continue
        for j, b in enumerate(g):
            if b == zero:
                continue
            out[i + j] = field._add(out[i + j], field._mul(a, b))
    return strip(field, out)


def divmod_poly(field: FieldTower, f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    """Euclidean division ``f = q*g + r`` with ``deg r < deg g``."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = degree(g)
    if degree(f) < dg:
        return (), f
    zero = field.zero_raw
    lc_inv = field._inv(g[-1])
    rem = list(f)
    quo = [zero] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = rem[k]
        if c == zero:
            continue
        c = field._mul(c, lc_inv)
        quo[k - dg] = c
        for j, b in enumerate(g):
            if b != zero:
                rem[k - dg + j] = field._add(rem[k - dg + j], field._mul(c, b))
    return strip(field, quo), strip(field, rem[:dg])


def rem(field: FieldTower, f: Poly, g: Poly) -> Poly:
    return divmod_poly(field, f, g)[1]


def quo(field: FieldTower, f: Poly, g: Poly) -> Poly:
    return divmod_poly(field, f, g)[0]


def monic(field: FieldTower, f: Poly) -> Tuple[Any, Poly]:
    """Return the leading coefficient and the monic associate of ``f``."""
    if not f:
        return field.zero_raw, ()
    lc = f[-1]
    if lc == field.one_raw:
        return lc, f
    return lc, scale(field, f, field._inv(lc))


def gcd(field: FieldTower, f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor; ``gcd(0, 0) = 0``."""
    while g:
        f, g = g, rem(field, f, g)
    return monic(field, f)[1]


def gcdex(field: FieldTower, f: Poly, g: Poly) -> Tuple[Poly, Poly, Poly]:
    """Extended Euclid: ``s*f + t*g = h`` with ``h`` the monic gcd."""
    one = (field.one_raw,)
    s0, s1 = one, ()
    t0, t1 = (), one
    r0, r1 = f, g
    while r1:
        q, r = divmod_poly(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, add(field, s0, mul(field, q, s1))
        t0, t1 = t1, add(field, t0, mul(field, q, t1))
    if not r0:
        return s0, t0, r0
    lc = r0[-1]
    inv = field._inv(lc)
    return scale(field, s0, inv), scale(field, t0, inv), scale(field, r0, inv)


def derivative(field: FieldTower, f: Poly) -> Poly:
    """Formal derivative; in characteristic 2 only odd exponents survive."""
    zero = field.zero_raw
    return strip(field, [f[i] if i % 2 else zero for i in range(1, len(f))])
