"""Test bilinear forms, diagonalization and Pfister recognition"""

import random

import pytest

from involab.fields import parse_field
from involab.forms import (
    BilinearForm,
    TSQuadraticForm,
    bilinear_is_isotropic,
    determinant_square_class_obstructs,
    diagonalize,
    is_similar_to_pfister,
    isotropic_vector,
    pfister,
    ts_is_anisotropic,
)
from involab.linalg import Matrix, determinant
from tests.utils import f2st, f2stu, f2t


def _check_diagonalization(b: BilinearForm) -> None:
    d = diagonalize(b)
    assert not d.alternating
    assert d.form is not None and d.change_of_basis is not None
    P = d.change_of_basis
    assert not determinant(P).is_zero()
    assert P.transpose() @ b.gram @ P == Matrix.diagonal(b.field, d.form.values)


def test_alternating_form() -> None:
    b = BilinearForm.from_gram(f2t(), [[0, 1], [1, 0]])
    d = diagonalize(b)
    assert d.alternating
    assert d.form is None


def test_non_alternating_hyperbolic_plane() -> None:
    F = f2t()
    b = BilinearForm.from_gram(F, [[1, 1], [1, 0]])
    d = diagonalize(b)
    assert d.form is not None
    assert d.form.values == (F.one, F.one)
    _check_diagonalization(b)


def test_diagonal_form_is_unchanged() -> None:
    F = f2st()
    b = BilinearForm.diagonal(F, ["1", "s", "t", "s*t"])
    d = diagonalize(b)
    assert d.form == TSQuadraticForm.of(F, ["1", "s", "t", "s*t"])
    assert d.change_of_basis == Matrix.identity(F, 4)


def test_hyperbolic_block_after_a_diagonal_line() -> None:
    F = f2t()
    b = BilinearForm.from_gram(F, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    d = diagonalize(b)
    assert d.form is not None
    assert len(d.form) == 3
    _check_diagonalization(b)


def test_random_symmetric_forms_diagonalize() -> None:
    F = f2st()
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 5)
        rows = [[F.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = F.random_element(rng)
        rows[0][0] = F.random_element(rng) + F.one if rows[0][0].is_zero() else rows[0][0]
        _check_diagonalization(BilinearForm.from_gram(F, rows))


def test_gram_must_be_symmetric() -> None:
    with pytest.raises(ValueError, match="not symmetric"):
        BilinearForm.from_gram(f2t(), [[1, 1], [0, 1]])


def test_pfister_forms() -> None:
    F = f2st()
    assert pfister("t", field=F) == BilinearForm.diagonal(F, ["1", "t"])
    assert pfister(F("s"), F("t")) == BilinearForm.diagonal(F, ["1", "s", "t", "s*t"])
    assert pfister(field=F) == BilinearForm.diagonal(F, ["1"])
    assert pfister(F("s")).tensor(pfister(F("t"))) == pfister(F("t"), F("s"))
    with pytest.raises(ValueError, match="needs a field"):
        pfister("t")
    with pytest.raises(ValueError, match="slot 1 is zero"):
        pfister("s", "0", field=F)


@pytest.mark.parametrize(
    "values, anisotropic",
    [
        (["1", "t"], True),
        (["1", "1"], False),
        (["1", "s", "t", "s+t"], False),
        (["1", "s", "t", "s*t"], True),
        (["s", "0"], False),
        (["t", "t^3+s^2*t"], False),
    ],
)
def test_ts_is_anisotropic(values: list, anisotropic: bool) -> None:
    q = TSQuadraticForm.of(f2st(), values)
    assert ts_is_anisotropic(q) is anisotropic
    assert q.is_anisotropic() is anisotropic


def test_ts_form_values() -> None:
    F = f2st()
    q = TSQuadraticForm.of(F, ["1", "s"])
    assert q.evaluate(["t", "1"]) == F("t^2+s")
    assert q.scale("t").values == (F("t"), F("s*t"))
    assert q.same_values(TSQuadraticForm.of(F, ["s", "1"]))
    K = parse_field("GF(2)", ["rat:s", "rat:t", "insep:s"])
    assert not q.extend(K).is_anisotropic()


@pytest.mark.parametrize(
    "rows, isotropic",
    [
        ([[0, 1], [1, 0]], True),
        ([[1, 0], [0, "t"]], False),
        ([[1, 0], [0, 1]], True),
        ([["t", 1], [1, 0]], True),
    ],
)
def test_bilinear_is_isotropic(rows: list, isotropic: bool) -> None:
    b = BilinearForm.from_gram(f2t(), rows)
    assert bilinear_is_isotropic(b) is isotropic
    v = isotropic_vector(b)
    assert (v is not None) is isotropic
    if v is not None:
        assert any(not x.is_zero() for x in v)
        assert b(v, v).is_zero()


@pytest.mark.parametrize(
    "values, similar",
    [
        (["t", "s*t"], True),
        (["1", "s", "t", "s*t"], True),
        (["s", "s^2", "s*t", "s^2*t"], True),
        (["1", "s", "t", "u"], False),
        (["1", "s", "t"], False),
    ],
)
def test_is_similar_to_pfister(values: list, similar: bool) -> None:
    b = BilinearForm.diagonal(f2stu(), values)
    assert is_similar_to_pfister(b) is similar


def test_is_similar_to_pfister_requires_anisotropy() -> None:
    with pytest.raises(ValueError, match="anisotropic"):
        is_similar_to_pfister(BilinearForm.diagonal(f2t(), ["1", "1"]))


@pytest.mark.parametrize(
    "values, obstructs",
    [
        (["1", "s", "t", "u"], True),
        (["1", "s", "t", "s*t"], False),
        (["1", "s"], False),
        (["1", "s", "t"], False),
    ],
)
def test_determinant_obstruction(values: list, obstructs: bool) -> None:
    b = BilinearForm.diagonal(f2stu(), values)
    assert determinant_square_class_obstructs(b) is obstructs


def test_obstruction_implies_not_pfister() -> None:
    b = BilinearForm.diagonal(f2stu(), ["1", "s", "t", "u"])
    assert determinant_square_class_obstructs(b)
    assert not is_similar_to_pfister(b)
