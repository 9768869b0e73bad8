"""Exact dense linear algebra over field tower scalars."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from involab.fields import FieldElement, FieldTower
from involab.fields.base_field import Raw, Scalar

logger = logging.getLogger(__name__)

Vector = Tuple[FieldElement, ...]
RawRow = List[Raw]


def _rref(field: FieldTower, rows: Sequence[Sequence[Raw]]) -> Tuple[List[RawRow], List[int]]:
    """Reduced row echelon form; pivot = first nonzero entry in row order."""
    zero, one = field.zero_raw, field.one_raw
    work = [list(r) for r in rows]
    pivots: List[int] = []
    rank = 0
    cols = len(work[0]) if work else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(work)) if work[r][col] != zero), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank][col]
        if lead != one:
            inv = field._inv(lead)
            work[rank] = [field._mul(inv, x) if x != zero else zero for x in work[rank]]
        pivot_row = work[rank]
        for r in range(len(work)):
            factor = work[r][col]
            if r == rank or factor == zero:
                continue
            row = work[r]
            for c in range(col, cols):
                if pivot_row[c] != zero:
                    row[c] = field._add(row[c], field._mul(factor, pivot_row[c]))
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


def _canonical_rows(
    field: FieldTower, vectors: Sequence[Sequence[Raw]], ambient: int
) -> Tuple[Tuple[Raw, ...], ...]:
    """Echelon form with the last nonzero coordinate of each vector equal to 1."""
    if not vectors or ambient == 0:
        return ()
    reversed_rows, _ = _rref(field, [list(reversed(v)) for v in vectors])
    rows = [tuple(reversed(r)) for r in reversed_rows]
    rows.reverse()
    return tuple(rows)


class Matrix:
    """Dense matrix with entries in one field tower level."""

    __slots__ = ("field", "rows", "cols", "_raw")

    def __init__(self, field: FieldTower, entries: Sequence[Sequence[Scalar]]) -> None:
        if not entries or not entries[0]:
            raise ValueError("matrix dimensions must be positive")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError("matrix rows have different lengths")
        self.field = field
        self.rows = len(entries)
        self.cols = cols
        self._raw: Tuple[Tuple[Raw, ...], ...] = tuple(
            tuple(field(x).raw for x in row) for row in entries
        )

    @classmethod
    def from_raw(cls, field: FieldTower, rows: Sequence[Sequence[Raw]]) -> Matrix:
        return cls(field, [[field.element(x) for x in row] for row in rows])

    @classmethod
    def identity(cls, field: FieldTower, n: int) -> Matrix:
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: FieldTower, rows: int, cols: int) -> Matrix:
        return cls(field, [[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, field: FieldTower, values: Sequence[Scalar]) -> Matrix:
        n = len(values)
        return cls(
            field, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @classmethod
    def from_columns(cls, field: FieldTower, columns: Sequence[Sequence[Scalar]]) -> Matrix:
        return cls(field, [list(row) for row in zip(*columns)])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: Tuple[int, int]) -> FieldElement:
        i, j = index
        return self.field.element(self._raw[i][j])

    def row(self, i: int) -> Vector:
        return tuple(self.field.element(x) for x in self._raw[i])

    def column(self, j: int) -> Vector:
        return tuple(self.field.element(row[j]) for row in self._raw)

    def tolist(self) -> List[List[FieldElement]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def raw_rows(self) -> Tuple[Tuple[Raw, ...], ...]:
        return self._raw

    def transpose(self) -> Matrix:
        return Matrix.from_raw(self.field, list(zip(*self._raw)))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field if self.field.is_extension_of(other.field) else other.field
        a, b = self.embed(F)._raw, other.embed(F)._raw
        zero = F.zero_raw
        out = []
        for row in a:
            new = [zero] * other.cols
            for k, x in enumerate(row):
                if x == zero:
                    continue
                for j, y in enumerate(b[k]):
                    if y != zero:
                        new[j] = F._add(new[j], F._mul(x, y))
            out.append(new)
        return Matrix.from_raw(F, out)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        F = self.field
        rows = [
            [F._add(x, y) for x, y in zip(r, s)]
            for r, s in zip(self._raw, other.embed(F)._raw)
        ]
        return Matrix.from_raw(F, rows)

    def scale(self, c: Scalar) -> Matrix:
        F = self.field
        c_raw = F(c).raw
        return Matrix.from_raw(F, [[F._mul(c_raw, x) for x in row] for row in self._raw])

    def apply(self, vector: Sequence[Scalar]) -> Vector:
        """Matrix times column vector."""
        F = self.field
        v = [F(x).raw for x in vector]
        out = []
        for row in self._raw:
            acc = F.zero_raw
            for x, y in zip(row, v):
                acc = F._add(acc, F._mul(x, y))
            out.append(F.element(acc))
        return tuple(out)

    def embed(self, K: FieldTower) -> Matrix:
        if K == self.field:
            return self
        return Matrix.from_raw(
            K, [[K._lift(x, self.field) for x in row] for row in self._raw]
        )

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._raw[i][j] == self._raw[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def is_diagonal(self) -> bool:
        zero = self.field.zero_raw
        return all(
            self._raw[i][j] == zero
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def diagonal_entries(self) -> Vector:
        return tuple(self.field.element(self._raw[i][i]) for i in range(min(self.shape)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self._raw == other._raw

    def __hash__(self) -> int:
        return hash((self.field.key, self._raw))

    def __repr__(self) -> str:
        return f"Matrix({self.format()})"

    def format(self) -> List[List[str]]:
        return [[self.field._format(x) for x in row] for row in self._raw]


@dataclass(frozen=True)
class Subspace:
    """Subspace of ``field^ambient`` held in canonical echelon form.

    Each basis vector has last nonzero coordinate 1 (its pivot), the other
    basis vectors vanish at that coordinate, and vectors are ordered by
    ascending pivot. Two spanning sets of the same subspace produce equal
    instances.
    """

    field: FieldTower
    ambient: int
    rows: Tuple[Tuple[Raw, ...], ...]

    @classmethod
    def span(cls, field: FieldTower, ambient: int, vectors: Sequence[Sequence[Scalar]]) -> Subspace:
        raw = []
        for v in vectors:
            if len(v) != ambient:
                raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient}")
            raw.append([field(x).raw for x in v])
        return cls(field, ambient, _canonical_rows(field, raw, ambient))

    @classmethod
    def _from_raw(
        cls, field: FieldTower, ambient: int, vectors: Sequence[Sequence[Raw]]
    ) -> Subspace:
        return cls(field, ambient, _canonical_rows(field, vectors, ambient))

    @classmethod
    def zero(cls, field: FieldTower, ambient: int) -> Subspace:
        return cls(field, ambient, ())

    @classmethod
    def full(cls, field: FieldTower, ambient: int) -> Subspace:
        return cls.span(
            field, ambient, [[int(i == j) for j in range(ambient)] for i in range(ambient)]
        )

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Tuple[Vector, ...]:
        F = self.field
        return tuple(tuple(F.element(x) for x in row) for row in self.rows)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        zero = self.field.zero_raw
        return tuple(
            max(i for i, x in enumerate(row) if x != zero) for row in self.rows
        )

    def _check(self, other: Subspace) -> None:
        if self.ambient != other.ambient:
            raise ValueError(
                f"ambient dimensions differ: {self.ambient} and {other.ambient}"
            )
        if self.field != other.field:
            raise ValueError(f"subspaces over different fields {self.field!r}, {other.field!r}")

    def _raw_vector(self, vector: Sequence[Scalar]) -> List[Raw]:
        if len(vector) != self.ambient:
            raise ValueError(
                f"vector of length {len(vector)} in ambient dimension {self.ambient}"
            )
        return [self.field(x).raw for x in vector]

    def _reduce_raw(self, v: List[Raw]) -> List[Raw]:
        F = self.field
        zero = F.zero_raw
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != zero:
                v = [F._add(x, F._mul(c, y)) if y != zero else x for x, y in zip(v, row)]
        return v

    def reduce(self, vector: Sequence[Scalar]) -> Vector:
        """Remainder of ``vector`` modulo this subspace; zero iff contained."""
        F = self.field
        return tuple(F.element(x) for x in self._reduce_raw(self._raw_vector(vector)))

    def contains(self, vector: Sequence[Scalar]) -> bool:
        zero = self.field.zero_raw
        return all(x == zero for x in self._reduce_raw(self._raw_vector(vector)))

    __contains__ = contains

    def coordinates(self, vector: Sequence[Scalar]) -> Optional[Vector]:
        """Coefficients of ``vector`` in the canonical basis, or ``None``."""
        raw = self._raw_vector(vector)
        if any(x != self.field.zero_raw for x in self._reduce_raw(list(raw))):
            return None
        return tuple(self.field.element(raw[p]) for p in self.pivots)

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace._from_raw(self.field, self.ambient, self.rows + other.rows)

    def intersection(self, other: Subspace) -> Subspace:
        self._check(other)
        if not self.rows or not other.rows:
            return Subspace.zero(self.field, self.ambient)
        # sum a_i u_i = sum b_j v_j: kernel of the matrix with columns u_i, v_j
        F = self.field
        columns = list(self.rows) + list(other.rows)
        matrix = [[col[k] for col in columns] for k in range(self.ambient)]
        null = _kernel_raw(F, matrix, len(columns))
        vectors = []
        zero = F.zero_raw
        for coefficients in null:
            v = [zero] * self.ambient
            for a, row in zip(coefficients[: len(self.rows)], self.rows):
                if a != zero:
                    v = [F._add(x, F._mul(a, y)) for x, y in zip(v, row)]
            vectors.append(v)
        return Subspace._from_raw(F, self.ambient, vectors)

    __and__ = intersection

    def is_subspace_of(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    def __le__(self, other: Subspace) -> bool:
        return self.is_subspace_of(other)

    def embed(self, K: FieldTower) -> Subspace:
        """Scalar extension ``U (x) K``; canonical form is preserved."""
        lifted = tuple(tuple(K._lift(x, self.field) for x in row) for row in self.rows)
        return Subspace(K, self.ambient, lifted)

    def format(self) -> List[List[str]]:
        return [[self.field._format(x) for x in row] for row in self.rows]

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={self.format()})"


def _kernel_raw(field: FieldTower, rows: Sequence[Sequence[Raw]], cols: int) -> List[List[Raw]]:
    zero, one = field.zero_raw, field.one_raw
    nonzero = [list(r) for r in rows if any(x != zero for x in r)]
    reduced, pivots = _rref(field, nonzero) if nonzero else ([], [])
    logger.debug("kernel: %d x %d system, rank %d", len(rows), cols, len(pivots))
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [zero] * cols
        v[free] = one
        for row, p in zip(reduced, pivots):
            v[p] = row[free]
        basis.append(v)
    return basis


def kernel(matrix: Matrix) -> Subspace:
    """``{v : M v = 0}`` in canonical form."""
    F = matrix.field
    return Subspace._from_raw(F, matrix.cols, _kernel_raw(F, matrix.raw_rows(), matrix.cols))


def linear_solve(matrix: Matrix, target: Sequence[Scalar]) -> Optional[Vector]:
    """A particular solution of ``M v = target``, or ``None`` if inconsistent."""
    F = matrix.field
    if len(target) != matrix.rows:
        raise ValueError(f"target of length {len(target)} for {matrix.rows} rows")
    augmented = [list(row) + [F(b).raw] for row, b in zip(matrix.raw_rows(), target)]
    reduced, pivots = _rref(F, augmented)
    if pivots and pivots[-1] == matrix.cols:
        return None
    solution = [F.zero_raw] * matrix.cols
    for row, p in zip(reduced, pivots):
        solution[p] = row[-1]
    return tuple(F.element(x) for x in solution)


def rank(matrix: Matrix) -> int:
    """Number of pivots in the reduced row echelon form of ``matrix``."""
    return len(_rref(matrix.field, matrix.raw_rows())[1])


def column_space(matrix: Matrix) -> Subspace:
    """Span of the columns of ``matrix``.

    Args:
        matrix: Any matrix over a field tower.

    Returns:
        A :class:`Subspace` of ``F^rows``.
    """
    return Subspace._from_raw(matrix.field, matrix.rows, list(zip(*matrix.raw_rows())))


def inverse(matrix: Matrix) -> Matrix:
    """Gauss-Jordan inverse of a square matrix.

    Args:
        matrix: A square matrix.

    Returns:
        The matrix ``M^-1`` with ``M M^-1 = 1``.

    Raises:
        ValueError: If ``matrix`` is not square or is singular.
    """
    F = matrix.field
    n = matrix.rows
    if matrix.cols != n:
        raise ValueError(f"cannot invert a {matrix.shape} matrix")
    augmented = [
        list(row) + [F.one_raw if i == j else F.zero_raw for j in range(n)]
        for i, row in enumerate(matrix.raw_rows())
    ]
    reduced, pivots = _rref(F, augmented)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return Matrix.from_raw(F, [row[n:] for row in reduced])


def semilinear_kernel(images: Sequence[Sequence[Scalar]], field: FieldTower) -> Subspace:
    """``{alpha : sum alpha_i^2 w_i = 0}`` for the images ``w_i``.

    Each coordinate is split over the 2-basis, ``w_ik = sum_j c_ikj^2 b_j``,
    which turns the condition into the linear system
    ``sum_i alpha_i c_ikj = 0`` for every pair ``(k, j)``.
    """
    n = len(images)
    if n == 0:
        return Subspace.zero(field, 0)
    width = len(images[0])
    masks = field.basis_masks
    zero = field.zero_raw
    parts = [[field._decompose(field(x).raw) for x in w] for w in images]
    rows = []
    for k in range(width):
        for mask in masks:
            row = [parts[i][k].get(mask, zero) for i in range(n)]
            if any(x != zero for x in row):
                rows.append(row)
    logger.debug(
        "semilinear kernel: %d unknowns, %d coordinates, %d-element 2-basis",
        n,
        width,
        len(masks),
    )
    return Subspace._from_raw(field, n, _kernel_raw(field, rows, n))


def determinant(matrix: Matrix) -> FieldElement:
    """Determinant by elimination; row swaps do not change sign in characteristic 2."""
    F = matrix.field
    if matrix.rows != matrix.cols:
        raise ValueError(f"determinant of a non-square {matrix.shape} matrix")
    zero = F.zero_raw
    work = [list(r) for r in matrix.raw_rows()]
    n = matrix.rows
    det = F.one_raw
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != zero), None)
        if pivot is None:
            return F.zero
        work[col], work[pivot] = work[pivot], work[col]
        lead = work[col][col]
        det = F._mul(det, lead)
        inv = F._inv(lead)
        for r in range(col + 1, n):
            factor = work[r][col]
            if factor == zero:
                continue
            factor = F._mul(factor, inv)
            work[r] = [F._add(x, F._mul(factor, y)) for x, y in zip(work[r], work[col])]
    return F.element(det)
