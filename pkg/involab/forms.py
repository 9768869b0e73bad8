"""Symmetric bilinear forms and totally singular quadratic forms."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from involab.fields import FieldElement, FieldTower
from involab.fields.base_field import Scalar
from involab.linalg import Matrix, Subspace, Vector, determinant, rank, semilinear_kernel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TSQuadraticForm:
    """Diagonal totally singular form ``q(v) = sum v_i^2 a_i``."""

    field: FieldTower
    values: Tuple[FieldElement, ...]

    @classmethod
    def of(cls, field: FieldTower, values: Sequence[Scalar]) -> TSQuadraticForm:
        return cls(field, tuple(field(a) for a in values))

    def __len__(self) -> int:
        return len(self.values)

    def evaluate(self, vector: Sequence[Scalar]) -> FieldElement:
        F = self.field
        total = F.zero
        for v, a in zip(vector, self.values):
            total = total + F(v).square() * a
        return total

    def isotropic_vectors(self) -> Subspace:
        """All ``v`` with ``q(v) = 0``; a subspace since ``q`` is additive."""
        return semilinear_kernel([(a,) for a in self.values], self.field)

    def is_anisotropic(self) -> bool:
        return ts_is_anisotropic(self)

    def scale(self, c: Scalar) -> TSQuadraticForm:
        c = self.field(c)
        return TSQuadraticForm(self.field, tuple(c * a for a in self.values))

    def extend(self, K: FieldTower) -> TSQuadraticForm:
        return TSQuadraticForm(K, tuple(K.embed(a) for a in self.values))

    def same_values(self, other: TSQuadraticForm) -> bool:
        """Equality up to a permutation of the diagonal entries."""
        return sorted(map(str, self.values)) == sorted(map(str, other.values))

    def format(self) -> List[str]:
        return [str(a) for a in self.values]


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric bilinear form given by its Gram matrix."""

    gram: Matrix

    def __post_init__(self) -> None:
        if not self.gram.is_symmetric():
            raise ValueError(f"Gram matrix {self.gram.format()} is not symmetric")

    @classmethod
    def diagonal(cls, field: FieldTower, values: Sequence[Scalar]) -> BilinearForm:
        return cls(Matrix.diagonal(field, values))

    @classmethod
    def from_gram(cls, field: FieldTower, rows: Sequence[Sequence[Scalar]]) -> BilinearForm:
        return cls(Matrix(field, rows))

    @property
    def field(self) -> FieldTower:
        return self.gram.field

    @property
    def dim(self) -> int:
        return self.gram.rows

    def __call__(self, v: Sequence[Scalar], w: Sequence[Scalar]) -> FieldElement:
        F = self.field
        image = self.gram.apply(w)
        total = F.zero
        for x, y in zip(v, image):
            total = total + F(x) * y
        return total

    def is_nondegenerate(self) -> bool:
        return rank(self.gram) == self.dim

    def determinant(self) -> FieldElement:
        return determinant(self.gram)

    def is_diagonal(self) -> bool:
        return self.gram.is_diagonal()

    def tensor(self, other: BilinearForm) -> BilinearForm:
        """Kronecker product; basis ordered lexicographically."""
        F = self.field
        a, b = self.gram, other.gram.embed(F)
        rows = []
        for i in range(a.rows):
            for k in range(b.rows):
                rows.append(
                    [a[i, j] * b[k, m] for j in range(a.cols) for m in range(b.cols)]
                )
        return BilinearForm(Matrix(F, rows))

    def scale(self, c: Scalar) -> BilinearForm:
        return BilinearForm(self.gram.scale(c))

    def extend(self, K: FieldTower) -> BilinearForm:
        return BilinearForm(self.gram.embed(K))


@dataclass(frozen=True)
class Diagonalization:
    """Outcome of :func:`diagonalize`.

    ``alternating`` forms carry no diagonal form. Otherwise
    ``change_of_basis.T @ gram @ change_of_basis`` is the diagonal of ``form``.
    """

    alternating: bool
    form: Optional[TSQuadraticForm] = None
    change_of_basis: Optional[Matrix] = None


def diagonalize(b: BilinearForm) -> Diagonalization:
    """Orthogonal basis of a symmetric bilinear form that is not alternating.

    Args:
        b: A symmetric bilinear form.

    Returns:
        A :class:`Diagonalization`; ``alternating`` is set when ``b(x, x) = 0``
        for every ``x``.
    """
    F = b.field
    n = b.dim
    rest: List[List[FieldElement]] = [
        [F.one if i == j else F.zero for j in range(n)] for i in range(n)
    ]
    found: List[Tuple[List[FieldElement], FieldElement]] = []
    while rest:
        pick = next((v for v in rest if b(v, v)), None)
        if pick is None:
            pair = _hyperbolic_vector(b, rest)
            if pair is None:
                # b vanishes on the remaining space
                found.extend((v, F.zero) for v in rest)
                break
            if not found:
                logger.debug("form of dimension %d is alternating", n)
                return Diagonalization(alternating=True)
            # <a> + H: reopen the last line and pivot on v + e, which has value a
            v, _ = found.pop()
            pick = [x + y for x, y in zip(v, pair)]
            rest = [pick] + rest
        inv = b(pick, pick).inverse()
        projected = []
        for w in rest:
            if w is pick:
                continue
            c = b(w, pick) * inv
            projected.append([x + c * y for x, y in zip(w, pick)] if c else w)
        rest = projected
        value = b(pick, pick)
        found.append((pick, value))
    columns = [v for v, _ in found]
    P = Matrix.from_columns(F, columns)
    D = TSQuadraticForm(F, tuple(a for _, a in found))
    return Diagonalization(alternating=False, form=D, change_of_basis=P)


def _hyperbolic_vector(
    b: BilinearForm, vectors: Sequence[Sequence[FieldElement]]
) -> Optional[List[FieldElement]]:
    """A vector of ``vectors`` pairing nontrivially with another one."""
    for i, v in enumerate(vectors):
        for w in vectors[i + 1 :]:
            if b(v, w):
                return list(v)
    return None


def pfister(*slots: Scalar, field: Optional[FieldTower] = None) -> BilinearForm:
    """The diagonal form ``<1, a_1> (x) ... (x) <1, a_n>``.

    Entry ``m`` of the diagonal is the product of the ``a_i`` with bit ``i``
    set in ``m``.
    """
    if field is None:
        elements = [a for a in slots if isinstance(a, FieldElement)]
        if not elements:
            raise ValueError("pfister() needs a field when no slot is a field element")
        field = elements[0].field
    values = [field(a) for a in slots]
    for i, a in enumerate(values):
        if a.is_zero():
            raise ValueError(f"Pfister slot {i} is zero")
    diagonal = []
    for mask in range(1 << len(values)):
        entry = field.one
        for i, a in enumerate(values):
            if (mask >> i) & 1:
                entry = entry * a
        diagonal.append(entry)
    return BilinearForm.diagonal(field, diagonal)


def ts_is_anisotropic(q: TSQuadraticForm) -> bool:
    """True iff the values are linearly independent over the squares."""
    if any(a.is_zero() for a in q.values):
        return False
    return q.isotropic_vectors().dim == 0


def isotropic_vector(b: BilinearForm) -> Optional[Vector]:
    """A nonzero ``v`` with ``b(v, v) = 0``, or ``None`` if ``b`` is anisotropic."""
    F = b.field
    d = diagonalize(b)
    if d.alternating:
        return tuple(F.one if i == 0 else F.zero for i in range(b.dim))
    assert d.form is not None and d.change_of_basis is not None
    kernel = d.form.isotropic_vectors()
    if kernel.dim == 0:
        return None
    return d.change_of_basis.apply(kernel.basis[0])


def bilinear_is_isotropic(b: BilinearForm) -> bool:
    d = diagonalize(b)
    if d.alternating:
        return b.dim >= 1
    assert d.form is not None
    return not ts_is_anisotropic(d.form)


def is_similar_to_pfister(b: BilinearForm) -> bool:
    """Decide similarity of an anisotropic form to a bilinear Pfister form.

    The normalized values ``c_i / c_1`` must span, over the squares, a
    subfield of degree ``2^n``: the span is closed under multiplication
    and its dimension is a power of two.
    """
    F = b.field
    d = diagonalize(b)
    if d.alternating or d.form is None or not ts_is_anisotropic(d.form):
        raise ValueError("is_similar_to_pfister requires an anisotropic form")
    values = d.form.values
    m = len(values)
    if m & (m - 1):
        return False
    c1_inv = values[0].inverse()
    normalized = [c * c1_inv for c in values]
    width = len(F.basis_masks)
    span = Subspace.span(F, width, [F.frobenius_decompose(x) for x in normalized])
    for i, x in enumerate(normalized):
        for y in normalized[i:]:
            if not span.contains(F.frobenius_decompose(x * y)):
                return False
    return True


def determinant_square_class_obstructs(b: BilinearForm) -> bool:
    """True when ``det b`` rules out similarity to a Pfister form.

    A form similar to an ``n``-fold Pfister form with ``n >= 2`` has a
    square determinant.
    """
    m = b.dim
    if m < 4 or m & (m - 1):
        return False
    det = b.determinant()
    if det.is_zero():
        return False
    return b.field.sqrt_exact(det) is None
