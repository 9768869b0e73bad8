"""Central simple algebras with involution given by structure constants."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from involab.fields import FieldElement, FieldTower
from involab.fields.base_field import Raw, Scalar
from involab.fields.parsing import evaluate_expression
from involab.forms import BilinearForm, isotropic_vector
from involab.linalg import Matrix, Subspace, column_space, inverse, kernel, linear_solve

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1000
DEFAULT_SEED = 0

# Sparse coordinate vector: (basis index, raw coefficient) pairs.
Terms = Tuple[Tuple[int, Raw], ...]


class InvolutionType(str, Enum):
    """Type of an involution of the first kind."""

    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"


class IsotropyStatus(str, Enum):
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"
    UNKNOWN = "unknown"


class AlgebraElement:
    """Element of an :class:`AlgebraWithInvolution` in basis coordinates."""

    __slots__ = ("algebra", "coords")

    algebra: AlgebraWithInvolution
    coords: Tuple[Raw, ...]

    def __init__(self, algebra: AlgebraWithInvolution, coords: Sequence[Raw]) -> None:
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("AlgebraElement is immutable")

    @property
    def field(self) -> FieldTower:
        return self.algebra.field

    def vector(self) -> Tuple[FieldElement, ...]:
        return tuple(self.field.element(x) for x in self.coords)

    def _scale(self, c: Union[FieldElement, int]) -> AlgebraElement:
        F = self.field
        raw = F(c).raw
        return AlgebraElement(self.algebra, [F._mul(raw, x) for x in self.coords])

    def __add__(self, other: Any) -> AlgebraElement:
        if isinstance(other, (int, FieldElement)) and not isinstance(other, bool):
            other = self.algebra.one._scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        F = self.field
        return AlgebraElement(
            self.algebra, [F._add(x, y) for x, y in zip(self.coords, other.coords)]
        )

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.algebra, self.algebra._mul_raw(self.coords, other.coords))
        if isinstance(other, (int, FieldElement)) and not isinstance(other, bool):
            return self._scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> AlgebraElement:
        if isinstance(other, (int, FieldElement)) and not isinstance(other, bool):
            return self._scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> AlgebraElement:
        if n < 0:
            raise ValueError("negative powers of algebra elements are not supported")
        result = self.algebra.one
        for _ in range(n):
            result = result * self
        return result

    def sigma(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.algebra._sigma_raw(self.coords))

    def is_zero(self) -> bool:
        zero = self.field.zero_raw
        return all(x == zero for x in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __str__(self) -> str:
        F = self.field
        terms = []
        for label, x in zip(self.algebra.labels, self.coords):
            if x == F.zero_raw:
                continue
            c = F._format(x)
            if label == "1":
                terms.append(c)
            elif c == "1":
                terms.append(label)
            else:
                terms.append(f"({c})*{label}" if "+" in c or "/" in c else f"{c}*{label}")
        return "+".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"AlgebraElement({str(self)!r})"


class AlgebraWithInvolution:
    """Finite-dimensional algebra with an involution of the first kind.

    ``table[i][j]`` holds the sparse coordinates of ``e_i * e_j`` and
    ``involution[i]`` those of ``sigma(e_i)``. Split adjoint instances also
    keep the bilinear ``form`` they were built from.
    """

    def __init__(
        self,
        field: FieldTower,
        labels: Sequence[str],
        table: Sequence[Sequence[Terms]],
        unit: Sequence[Raw],
        involution: Sequence[Terms],
        degree: int,
        *,
        form: Optional[BilinearForm] = None,
        description: Optional[Dict[str, Any]] = None,
    ) -> None:
        n = len(labels)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError(f"multiplication table is not {n} x {n}")
        if len(unit) != n or len(involution) != n:
            raise ValueError("unit and involution must have one entry per basis vector")
        if degree * degree != n:
            raise ValueError(f"dimension {n} is not the square of the degree {degree}")
        self.field = field
        self.labels = tuple(labels)
        self.table = tuple(tuple(tuple(t) for t in row) for row in table)
        self.unit = tuple(unit)
        self.involution = tuple(tuple(t) for t in involution)
        self.degree = degree
        self.form = form
        self.description = description or {}

    # -- elements ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def is_split_adjoint(self) -> bool:
        return self.form is not None

    def element(self, coords: Sequence[Scalar]) -> AlgebraElement:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        return AlgebraElement(self, [self.field(x).raw for x in coords])

    def basis_element(self, i: int) -> AlgebraElement:
        F = self.field
        return AlgebraElement(self, [F.one_raw if j == i else F.zero_raw for j in range(self.dim)])

    @property
    def basis(self) -> Tuple[AlgebraElement, ...]:
        return tuple(self.basis_element(i) for i in range(self.dim))

    @property
    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [self.field.zero_raw] * self.dim)

    def parse(self, text: str) -> AlgebraElement:
        """Parse a literal over basis labels and field symbols; labels win."""
        labels = {label: i for i, label in enumerate(self.labels)}
        symbols = self.field.symbols

        def resolve(name: str) -> AlgebraElement:
            if name in labels:
                return self.basis_element(labels[name])
            return self.one * self.field.element(symbols[name])

        return evaluate_expression(text, resolve, lambda n: self.one * n)

    def random_element(self, rng: random.Random, degree: int = 1) -> AlgebraElement:
        F = self.field
        coords = []
        for _ in range(self.dim):
            roll = rng.random()
            if roll < 0.3:
                coords.append(F.zero_raw)
            elif roll < 0.5:
                coords.append(F.one_raw)
            else:
                coords.append(F._random(rng, degree))
        return AlgebraElement(self, coords)

    def sparse_element(self, rng: random.Random, terms: int = 3) -> AlgebraElement:
        """A combination of a few basis vectors with small coefficients.

        Args:
            rng: Seeded generator the element is drawn from.
            terms: Largest number of basis vectors in the combination.

        Returns:
            An element whose coefficients are constants times 2-basis
            monomials, see :meth:`FieldTower.small_element`.
        """
        F = self.field
        x = self.zero
        for i in rng.sample(range(self.dim), rng.randint(1, min(terms, self.dim))):
            constant = F.embed(F.base.random_element(rng))
            if constant.is_zero():
                constant = F.one
            x = x + self.basis_element(i) * (constant * F.small_element(rng))
        return x

    # -- raw arithmetic ------------------------------------------------------

    def _mul_raw(self, x: Sequence[Raw], y: Sequence[Raw]) -> Tuple[Raw, ...]:
        F = self.field
        zero = F.zero_raw
        out = [zero] * self.dim
        y_support = [(j, b) for j, b in enumerate(y) if b != zero]
        for i, a in enumerate(x):
            if a == zero:
                continue
            row = self.table[i]
            for j, b in y_support:
                ab = F._mul(a, b)
                for k, c in row[j]:
                    out[k] = F._add(out[k], F._mul(ab, c))
        return tuple(out)

    def _sigma_raw(self, x: Sequence[Raw]) -> Tuple[Raw, ...]:
        F = self.field
        zero = F.zero_raw
        out = [zero] * self.dim
        for i, a in enumerate(x):
            if a == zero:
                continue
            for k, c in self.involution[i]:
                out[k] = F._add(out[k], F._mul(a, c))
        return tuple(out)

    # -- axioms --------------------------------------------------------------

    def involution_failures(self) -> List[str]:
        """Violated involution axioms on basis elements and pairs."""
        failures = []
        basis = self.basis
        one = self.one
        if one.sigma() != one:
            failures.append("sigma(1) != 1")
        for i, e in enumerate(basis):
            if e.sigma().sigma() != e:
                failures.append(f"sigma(sigma({self.labels[i]})) != {self.labels[i]}")
            if one * e != e or e * one != e:
                failures.append(f"unit does not act as identity on {self.labels[i]}")
        sigmas = [e.sigma() for e in basis]
        for i, e in enumerate(basis):
            for j, f in enumerate(basis):
                if (e * f).sigma() != sigmas[j] * sigmas[i]:
                    failures.append(
                        f"sigma({self.labels[i]}*{self.labels[j]}) != "
                        f"sigma({self.labels[j]})*sigma({self.labels[i]})"
                    )
        return failures

    def verify_involution(self) -> None:
        failures = self.involution_failures()
        if failures:
            raise ValueError(f"not an involution: {failures[0]}")

    def is_associative(self) -> bool:
        basis = self.basis
        return all((a * b) * c == a * (b * c) for a in basis for b in basis for c in basis)

    def __repr__(self) -> str:
        kind = self.description.get("type", "algebra")
        return f"AlgebraWithInvolution({kind}, degree={self.degree}, field={self.field!r})"


def _terms(field: FieldTower, coords: Sequence[Raw]) -> Terms:
    zero = field.zero_raw
    return tuple((k, c) for k, c in enumerate(coords) if c != zero)


def matrix_label(i: int, j: int, m: int) -> str:
    return f"E{i + 1}{j + 1}" if m < 10 else f"E{i + 1}_{j + 1}"


def matrix_algebra_adjoint(b: BilinearForm) -> AlgebraWithInvolution:
    """``M_m(F)`` on the row-major ``E_ij`` basis with ``sigma(x) = b^-1 x^T b``."""
    F = b.field
    m = b.dim
    if not b.is_nondegenerate():
        raise ValueError(f"Gram matrix {b.gram.format()} is degenerate")
    one = F.one_raw
    G = b.gram.raw_rows()
    B_inv = inverse(b.gram).raw_rows()
    labels = [matrix_label(i, j, m) for i in range(m) for j in range(m)]
    table = [
        [((i * m + l, one),) if j == k else () for k in range(m) for l in range(m)]
        for i in range(m)
        for j in range(m)
    ]
    unit = [one if i == j else F.zero_raw for i in range(m) for j in range(m)]
    # sigma(E_ij) = b^-1 E_ji b has entry (p, q) = binv[p][j] * b[i][q]
    involution = []
    for i in range(m):
        for j in range(m):
            coords = [F._mul(B_inv[p][j], G[i][q]) for p in range(m) for q in range(m)]
            involution.append(_terms(F, coords))
    return AlgebraWithInvolution(
        F,
        labels,
        table,
        unit,
        involution,
        m,
        form=b,
        description={"type": "adjoint", "gram": b.gram.format()},
    )


def quaternion(a: Scalar, c: Scalar, field: Optional[FieldTower] = None) -> AlgebraWithInvolution:
    """``[a, c)`` on ``{1, u, v, uv}`` with ``u^2 + u = a``, ``v^2 = c``, ``vu = uv + v``.

    The involution is the canonical (symplectic) one: ``u -> u + 1``.
    """
    if field is None:
        if isinstance(a, FieldElement):
            field = a.field
        elif isinstance(c, FieldElement):
            field = c.field
        else:
            raise ValueError("quaternion() needs a field when a and c are literals")
    F = field
    a_raw, c_raw = F(a).raw, F(c).raw
    if c_raw == F.zero_raw:
        raise ValueError("quaternion algebra needs c != 0")
    one, ac = F.one_raw, F._mul(a_raw, c_raw)
    # basis order 1, u, v, w = uv
    products: Dict[Tuple[int, int], Terms] = {
        (1, 1): ((0, a_raw), (1, one)),
        (1, 2): ((3, one),),
        (1, 3): ((2, a_raw), (3, one)),
        (2, 1): ((2, one), (3, one)),
        (2, 2): ((0, c_raw),),
        (2, 3): ((0, c_raw), (1, c_raw)),
        (3, 1): ((2, a_raw),),
        (3, 2): ((1, c_raw),),
        (3, 3): ((0, ac),),
    }
    table = []
    for i in range(4):
        row = []
        for j in range(4):
            if i == 0:
                row.append(((j, one),))
            elif j == 0:
                row.append(((i, one),))
            else:
                row.append(tuple((k, x) for k, x in products[(i, j)] if x != F.zero_raw))
        table.append(row)
    involution = [((0, one),), ((0, one), (1, one)), ((2, one),), ((3, one),)]
    return AlgebraWithInvolution(
        F,
        ["1", "u", "v", "uv"],
        table,
        [one, F.zero_raw, F.zero_raw, F.zero_raw],
        involution,
        2,
        description={"type": "quaternion", "a": F._format(a_raw), "c": F._format(c_raw)},
    )


def _inverse_element(s: AlgebraElement) -> Optional[AlgebraElement]:
    A = s.algebra
    # solve s * y = 1 through the left multiplication matrix
    columns = [(s * e).vector() for e in A.basis]
    y = linear_solve(Matrix.from_columns(A.field, columns), A.one.vector())
    if y is None:
        return None
    inv = A.element(y)
    return inv if inv * s == A.one else None


def twist_involution(
    A: AlgebraWithInvolution, s: Union[AlgebraElement, str]
) -> AlgebraWithInvolution:
    """Same algebra with ``x -> s sigma(x) s^-1`` for symmetric invertible ``s``."""
    if isinstance(s, str):
        s = A.parse(s)
    if s.algebra is not A:
        raise ValueError("twisting element belongs to another algebra")
    if s.sigma() != s:
        raise ValueError(f"twisting element {s} is not symmetric")
    s_inv = _inverse_element(s)
    if s_inv is None:
        raise ValueError(f"twisting element {s} is not invertible")
    F = A.field
    involution = [_terms(F, (s * e.sigma() * s_inv).coords) for e in A.basis]
    description = dict(A.description)
    description["twists"] = list(description.get("twists", [])) + [str(s)]
    twisted = AlgebraWithInvolution(
        F,
        A.labels,
        A.table,
        A.unit,
        involution,
        A.degree,
        description=description,
    )
    twisted.verify_involution()
    return twisted


def tensor(A1: AlgebraWithInvolution, A2: AlgebraWithInvolution) -> AlgebraWithInvolution:
    """``A1 (x) A2`` with involution ``sigma1 (x) sigma2``; basis lexicographic."""
    if A1.field != A2.field:
        raise ValueError(f"tensor factors over different fields {A1.field!r}, {A2.field!r}")
    F = A1.field
    n1, n2 = A1.dim, A2.dim

    def kron(x: Terms, y: Terms) -> Terms:
        return tuple((i * n2 + j, F._mul(a, b)) for i, a in x for j, b in y)

    taken = {part for label in A1.labels if label != "1" for part in label.split("*")}
    suffix, count = "", 1
    while any(part + suffix in taken for b in A2.labels for part in b.split("*") if b != "1"):
        count += 1
        suffix = f"_{count}"
    right = ["1" if b == "1" else "*".join(p + suffix for p in b.split("*")) for b in A2.labels]

    def label(a: str, b: str) -> str:
        if a == "1":
            return b
        if b == "1":
            return a
        return f"{a}*{b}"

    labels = [label(a, b) for a in A1.labels for b in right]
    table = [
        [kron(A1.table[i][k], A2.table[j][l]) for k in range(n1) for l in range(n2)]
        for i in range(n1)
        for j in range(n2)
    ]
    unit = [F._mul(a, b) for a in A1.unit for b in A2.unit]
    involution = [kron(A1.involution[i], A2.involution[j]) for i in range(n1) for j in range(n2)]
    return AlgebraWithInvolution(
        F,
        labels,
        table,
        unit,
        involution,
        A1.degree * A2.degree,
        description={"type": "tensor", "factors": [A1.description, A2.description]},
    )


def _id_plus_sigma(A: AlgebraWithInvolution) -> Matrix:
    F = A.field
    columns = [(e + e.sigma()).coords for e in A.basis]
    return Matrix.from_raw(F, [[col[k] for col in columns] for k in range(A.dim)])


def sym_alt(A: AlgebraWithInvolution) -> Tuple[Subspace, Subspace]:
    """``Sym = ker(id + sigma)`` and ``Alt = im(id + sigma)``."""
    T = _id_plus_sigma(A)
    return kernel(T), column_space(T)


def classify_type(A: AlgebraWithInvolution) -> InvolutionType:
    """Tell orthogonal from symplectic involutions.

    Args:
        A: The algebra with involution.

    Returns:
        ``SYMPLECTIC`` when ``1`` lies in ``Alt(A, sigma)``, else ``ORTHOGONAL``.
    """
    _, alt = sym_alt(A)
    if alt.contains(A.one.vector()):
        return InvolutionType.SYMPLECTIC
    return InvolutionType.ORTHOGONAL


def scalar_extend(A: AlgebraWithInvolution, K: FieldTower) -> AlgebraWithInvolution:
    """``A (x) K``: same structure constants and involution over ``K``."""
    F = A.field
    if not K.is_extension_of(F):
        raise ValueError(f"{K!r} is not an extension of {F!r}")
    if K == F:
        return A

    def lift(terms: Terms) -> Terms:
        return tuple((k, K._lift(c, F)) for k, c in terms)

    description = dict(A.description)
    description["extended_to"] = K.description
    return AlgebraWithInvolution(
        K,
        A.labels,
        [[lift(t) for t in row] for row in A.table],
        [K._lift(c, F) for c in A.unit],
        [lift(t) for t in A.involution],
        A.degree,
        form=A.form.extend(K) if A.form is not None else None,
        description=description,
    )


def _span_of(A: AlgebraWithInvolution, elements: Sequence[AlgebraElement]) -> Subspace:
    return Subspace.span(A.field, A.dim, [x.vector() for x in elements])


def _check_idempotent(e: AlgebraElement) -> None:
    if e * e != e:
        raise ValueError(f"{e} is not an idempotent")


def metabolic_witness(A: AlgebraWithInvolution, e: AlgebraElement) -> bool:
    """True iff ``sigma(e) e = 0`` and ``dim eA = dim A / 2``."""
    _check_idempotent(e)
    if not (e.sigma() * e).is_zero():
        return False
    eA = _span_of(A, [e * x for x in A.basis])
    return 2 * eA.dim == A.dim


def part_by_idempotent(A: AlgebraWithInvolution, e: AlgebraElement) -> AlgebraWithInvolution:
    """``eAe`` with unit ``e`` and the restricted involution."""
    _check_idempotent(e)
    if e.sigma() != e:
        raise ValueError(f"idempotent {e} is not symmetric")
    F = A.field
    part = _span_of(A, [e * x * e for x in A.basis])
    vectors = [A.element(v) for v in part.basis]

    def coordinates(x: AlgebraElement) -> Terms:
        coords = part.coordinates(x.vector())
        if coords is None:
            raise ValueError(f"{x} is not in eAe")
        return _terms(F, [c.raw for c in coords])

    table = [[coordinates(p * q) for q in vectors] for p in vectors]
    unit_terms = coordinates(e)
    unit = [F.zero_raw] * part.dim
    for k, c in unit_terms:
        unit[k] = c
    involution = [coordinates(p.sigma()) for p in vectors]
    degree = math.isqrt(part.dim)
    result = AlgebraWithInvolution(
        F,
        [f"p{i + 1}" for i in range(part.dim)],
        table,
        unit,
        involution,
        degree,
        description={"type": "part", "of": A.description, "idempotent": str(e)},
    )
    result.verify_involution()
    return result


@dataclass(frozen=True)
class IsotropyResult:
    """Outcome of :func:`isotropy_search`; ``exact`` marks a decision."""

    status: IsotropyStatus
    witness: Optional[AlgebraElement] = None
    exact: bool = False
    tried: int = 0


def _rank_one_witness(A: AlgebraWithInvolution, v: Sequence[FieldElement]) -> AlgebraElement:
    m = A.degree
    F = A.field
    # x = v * e_1^T, so sigma(x) x = b^-1 e_1 b(v, v) e_1^T = 0
    return A.element([v[i] if j == 0 else F.zero for i in range(m) for j in range(m)])


def isotropy_search(
    A: AlgebraWithInvolution, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED
) -> IsotropyResult:
    """Look for a nonzero ``x`` with ``sigma(x) x = 0``.

    Split adjoint instances are decided exactly through the form. Other
    instances get a seeded search over basis elements, pairwise sums and
    sparse elements with small coefficients.

    Args:
        A: The algebra with involution to search.
        budget: Largest number of candidates tried by the search.
        seed: Seed of the generator drawing sparse candidates.

    Returns:
        An :class:`IsotropyResult`; ``exact`` is set only when the form
        decided the question.
    """
    if A.form is not None:
        v = isotropic_vector(A.form)
        if v is None:
            return IsotropyResult(IsotropyStatus.ANISOTROPIC, exact=True)
        witness = _rank_one_witness(A, v)
        if not (witness.sigma() * witness).is_zero():
            raise ArithmeticError(f"rank-one witness {witness} failed verification")
        return IsotropyResult(IsotropyStatus.ISOTROPIC, witness, exact=True, tried=1)

    rng = random.Random(seed)
    basis = A.basis

    def candidates() -> Iterator[AlgebraElement]:
        yield from basis
        for i, e in enumerate(basis):
            for f in basis[i + 1 :]:
                yield e + f
        while True:
            yield A.sparse_element(rng)

    tried = 0
    for x in candidates():
        if tried >= budget:
            break
        tried += 1
        if x and (x.sigma() * x).is_zero():
            logger.debug("isotropy witness %s after %d candidates", x, tried)
            return IsotropyResult(IsotropyStatus.ISOTROPIC, x, tried=tried)
    logger.debug("no isotropy witness in %d candidates", tried)
    return IsotropyResult(IsotropyStatus.UNKNOWN, tried=tried)


def centralizer(A: AlgebraWithInvolution, U: Subspace) -> Subspace:
    """``{x : x u = u x for u in U}`` as a kernel."""
    rows: List[List[Raw]] = []
    for u_vec in U.basis:
        u = A.element(u_vec)
        columns = [(e * u + u * e).coords for e in A.basis]
        rows.extend([col[k] for col in columns] for k in range(A.dim))
    if not rows:
        return Subspace.full(A.field, A.dim)
    return kernel(Matrix.from_raw(A.field, rows))
