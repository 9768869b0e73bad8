"""Utilities for testing purposes."""

from pathlib import Path
from typing import Sequence

from hypothesis import strategies as st

from involab.algebras import (
    AlgebraWithInvolution,
    matrix_algebra_adjoint,
    quaternion,
    twist_involution,
)
from involab.fields import FieldElement, FieldTower, parse_field
from involab.forms import BilinearForm

FIXTURES = Path(__file__).parent / "fixtures"


def f2t() -> FieldTower:
    return parse_field("GF(2)", ["rat:t"])


def f2st() -> FieldTower:
    return parse_field("GF(2)", ["rat:s", "rat:t"])


def f2stu() -> FieldTower:
    return parse_field("GF(2)", ["rat:s", "rat:t", "rat:u"])


def adjoint(F: FieldTower, values: Sequence[str]) -> AlgebraWithInvolution:
    """Split algebra with the involution adjoint to a diagonal form."""
    return matrix_algebra_adjoint(BilinearForm.diagonal(F, list(values)))


def diag_one_t() -> AlgebraWithInvolution:
    """``M_2(F_2(t))`` with the involution adjoint to ``<1, t>``."""
    return adjoint(f2t(), ["1", "t"])


def transpose(field: str = "GF(2)", m: int = 2) -> AlgebraWithInvolution:
    """``M_m`` over a finite field with the transpose involution."""
    return adjoint(parse_field(field), ["1"] * m)


def twisted_quaternion(F: FieldTower, a: str, c: str, twist: str = "v") -> AlgebraWithInvolution:
    return twist_involution(quaternion(F(a), F(c), F), twist)


def elements(F: FieldTower, degree: int = 2) -> st.SearchStrategy[FieldElement]:
    """Random elements of ``F`` drawn through its seeded generator."""
    return st.randoms(use_true_random=False).map(lambda rng: F.random_element(rng, degree))


def nonzero_elements(F: FieldTower, degree: int = 2) -> st.SearchStrategy[FieldElement]:
    return elements(F, degree).filter(lambda x: not x.is_zero())


def algebra_elements(A: AlgebraWithInvolution) -> st.SearchStrategy:
    return st.randoms(use_true_random=False).map(A.random_element)
