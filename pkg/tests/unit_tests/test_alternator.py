"""Test the alternator subalgebra, its form and the verification suites"""

import importlib
import logging

import pytest

from involab.algebras import isotropy_search, quaternion, twist_involution
from involab.alternator import (
    ASSERTED_SEARCH_BUDGET,
    AnisotropyProvenance,
    InseparableExtensionError,
    SymplecticInvolutionError,
    Verdict,
    alt_membership_check,
    alternator,
    alternator_value,
    anisotropy_provenance,
    brute_force_S,
    check_q_laws,
    direct_by_search,
    inseparable_jump,
    is_direct,
    random_alt_membership_check,
    sample_q_multiplicativity,
    septd_suite,
    totally_decomposable_anisotropic,
    verify_separable_descent,
)
from involab.fields import parse_field
from involab.forms import TSQuadraticForm
from involab.linalg import Subspace
from tests.utils import adjoint, diag_one_t, f2st, f2stu, f2t, transpose, twisted_quaternion

alternator_module = importlib.import_module("involab.alternator")

SEPARABLE_LAYERS = [["as:t"], ["odd:x^3+x+1"], ["odd:x^5+x^2+1"], ["as:t", "odd:x^3+x+1"]]


def _over_f2t(layers: list):
    return parse_field("GF(2)", ["rat:t"] + layers)


def test_transpose_over_gf2() -> None:
    A = transpose()
    report = alternator(A)
    assert report.dim_S == 3
    assert report.passed
    assert report.q(A.one) == A.field.one
    # [[1, 0], [1, 0]]
    assert report.q(A.parse("E11 + E21")).is_zero()
    assert not report.contained_in_sym
    assert not report.direct


def test_diag_one_t() -> None:
    A = diag_one_t()
    F = A.field
    report = alternator(A)
    assert report.S == Subspace.span(F, 4, [A.one.vector(), A.parse("t*E12 + E21").vector()])
    assert report.q_values == (F("t"), F.one)
    assert report.q_form.same_values(TSQuadraticForm.of(F, ["1", "t"]))
    assert report.contained_in_sym
    assert report.direct
    assert report.passed
    assert report.certificates == {
        "unit_in_S": True,
        "q_unit_is_one": True,
        "alternator_identity": True,
        "closed_under_multiplication": True,
    }


def test_twisted_quaternion() -> None:
    F = f2st()
    A = twisted_quaternion(F, "t", "s")
    report = alternator(A)
    assert report.S == Subspace.span(F, 4, [A.one.vector(), A.parse("v").vector()])
    assert report.q_values == (F.one, F("s"))
    assert report.direct


def test_symplectic_involution_is_rejected() -> None:
    with pytest.raises(SymplecticInvolutionError, match="symplectic"):
        alternator(quaternion("t", "s", f2st()))


def test_alternator_value() -> None:
    A = diag_one_t()
    report = alternator(A)
    assert alternator_value(A, A.parse("E12"), report.alt) is None
    assert alternator_value(A, A.one, report.alt) == A.field.one
    with pytest.raises(ValueError, match="not in S"):
        report.q(A.parse("E12"))


@pytest.mark.parametrize(
    "field, m",
    [
        ("GF(2)", 2),
        ("GF(4)", 2),
        ("GF(2)", 3),
        pytest.param("GF(2)", 4, marks=pytest.mark.slow),
    ],
)
def test_brute_force_matches(field: str, m: int) -> None:
    A = transpose(field, m)
    assert brute_force_S(A) == alternator(A).S


def test_brute_force_on_twisted_matrix_algebra() -> None:
    A = twist_involution(transpose(), "E11 + E12 + E21")
    assert brute_force_S(A) == alternator(A).S


def test_brute_force_limits() -> None:
    with pytest.raises(ValueError, match="enumeration cap"):
        brute_force_S(transpose("GF(4)", 4))
    with pytest.raises(ValueError, match="finite"):
        brute_force_S(diag_one_t())


def test_is_direct(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.ERROR):
        assert not is_direct(transpose())
        assert not is_direct(transpose("GF(4)", 3))
    assert not caplog.records
    assert is_direct(diag_one_t())
    assert not direct_by_search(alternator(transpose()))


def test_odd_degree_anisotropic_is_direct() -> None:
    A = adjoint(f2st(), ["1", "s", "t"])
    assert is_direct(A)
    report = verify_separable_descent(A, parse_field("GF(2)", ["rat:s", "rat:t", "odd:x^3+x+1"]))
    assert report.direct_F and report.direct_K


def test_provenance() -> None:
    assert anisotropy_provenance(diag_one_t()) is AnisotropyProvenance.CERTIFIED_SPLIT
    assert anisotropy_provenance(transpose()) is AnisotropyProvenance.ISOTROPIC
    A = twisted_quaternion(f2st(), "t", "s")
    assert anisotropy_provenance(A, budget=50) is AnisotropyProvenance.SEARCHED_NO_WITNESS
    assert (
        anisotropy_provenance(A, assume_anisotropic=True, budget=50)
        is AnisotropyProvenance.ASSERTED
    )


def test_asserted_anisotropy_caps_the_search(monkeypatch: pytest.MonkeyPatch) -> None:
    budgets = []

    def recording_search(A, budget, seed):
        budgets.append(budget)
        return isotropy_search(A, budget=budget, seed=seed)

    monkeypatch.setattr(alternator_module, "isotropy_search", recording_search)
    A = twisted_quaternion(f2st(), "t", "s")
    provenance = anisotropy_provenance(A, assume_anisotropic=True, budget=10_000)
    assert provenance is AnisotropyProvenance.ASSERTED
    assert anisotropy_provenance(A, budget=300) is AnisotropyProvenance.SEARCHED_NO_WITNESS
    assert budgets == [ASSERTED_SEARCH_BUDGET, 300]


def test_asserted_anisotropy_contradicted_by_witness(caplog: pytest.LogCaptureFixture) -> None:
    A = twisted_quaternion(f2t(), "t", "1")
    with caplog.at_level(logging.WARNING):
        provenance = anisotropy_provenance(A, assume_anisotropic=True)
    assert provenance is AnisotropyProvenance.ISOTROPIC
    assert any("asserted anisotropic" in r.getMessage() for r in caplog.records)
    result = totally_decomposable_anisotropic(A, assume_anisotropic=True)
    assert result.verdict is Verdict.NOT_APPLICABLE


def test_decomposable_pfister_form() -> None:
    A = adjoint(f2st(), ["1", "s", "t", "s*t"])
    result = totally_decomposable_anisotropic(A)
    assert result.verdict is Verdict.TRUE
    assert result.provenance is AnisotropyProvenance.CERTIFIED_SPLIT
    assert result.dim_S == 4
    assert result.criterion
    assert result.certificates == {
        "squares_are_scalars": True,
        "centralizer_equals_S": True,
        "direct": True,
    }
    assert result.passed


def test_indecomposable_form() -> None:
    A = adjoint(f2stu(), ["1", "s", "t", "u"])
    result = totally_decomposable_anisotropic(A)
    assert result.verdict is Verdict.FALSE
    assert not result.criterion
    assert result.certificates == {}


def test_decomposability_not_applicable() -> None:
    odd = totally_decomposable_anisotropic(adjoint(f2st(), ["1", "s", "t"]))
    assert odd.verdict is Verdict.NOT_APPLICABLE
    assert odd.provenance is AnisotropyProvenance.CERTIFIED_SPLIT
    isotropic = totally_decomposable_anisotropic(adjoint(f2t(), ["1", "1"]))
    assert isotropic.verdict is Verdict.NOT_APPLICABLE
    assert isotropic.provenance is AnisotropyProvenance.ISOTROPIC


def test_decomposable_quaternion() -> None:
    A = twisted_quaternion(f2st(), "t", "s")
    result = totally_decomposable_anisotropic(A, budget=100)
    assert result.verdict is Verdict.TRUE
    assert result.provenance is AnisotropyProvenance.SEARCHED_NO_WITNESS
    assert result.passed


@pytest.mark.parametrize("layers", SEPARABLE_LAYERS)
def test_separable_descent(layers: list) -> None:
    K = _over_f2t(layers)
    for A in (diag_one_t(), adjoint(f2t(), ["1", "1"]), adjoint(f2t(), ["t", "1", "t+1"])):
        report = verify_separable_descent(A, K)
        assert report.passed
        assert report.equal and report.q_agree and report.contained
        assert report.dim_F == report.dim_K


def test_descent_rejects_inseparable_layers() -> None:
    K = _over_f2t(["insep:t"])
    with pytest.raises(InseparableExtensionError, match="descent requires separable layers"):
        verify_separable_descent(diag_one_t(), K)
    with pytest.raises(ValueError, match="not an extension"):
        verify_separable_descent(diag_one_t(), f2st())


def test_inseparable_jump() -> None:
    K = _over_f2t(["insep:t"])
    report = inseparable_jump(diag_one_t(), K)
    assert (report.dim_F, report.dim_K) == (2, 3)
    assert report.jumped
    assert report.contained
    identity = inseparable_jump(adjoint(f2t(), ["1", "1"]), K)
    assert (identity.dim_F, identity.dim_K) == (3, 3)
    assert not identity.jumped


def test_no_jump_over_separable_layers() -> None:
    report = inseparable_jump(diag_one_t(), _over_f2t(["as:t"]))
    assert not report.jumped
    assert report.contained


def test_alt_membership() -> None:
    A = diag_one_t()
    assert alt_membership_check(A, [A.parse("E12"), A.parse("E21")])
    assert alt_membership_check(A, [A.parse("t*E11 + E12"), A.one, A.parse("E22")])
    for B in (A, twisted_quaternion(f2st(), "t", "s"), transpose("GF(4)", 3)):
        assert random_alt_membership_check(B, samples=100, seed=1)


def test_q_laws() -> None:
    for A in (diag_one_t(), twisted_quaternion(f2st(), "t", "s"), transpose("GF(4)", 2)):
        report = alternator(A)
        assert check_q_laws(report, samples=100, seed=2)


def test_q_is_multiplicative_on_decomposable_instances() -> None:
    report = alternator(adjoint(f2st(), ["1", "s", "t", "s*t"]))
    sampled = sample_q_multiplicativity(report, samples=50, seed=4)
    assert sampled.tried == 50
    assert sampled.failures == 0


def test_septd_agreement_on_split_instances() -> None:
    K = _over_f2t(["as:t"])
    report = septd_suite(diag_one_t(), K)
    assert report.agree
    assert report.verdict_F.verdict is Verdict.TRUE
    assert report.verdict_K.verdict is Verdict.TRUE
    assert report.pfister_oracle is True
    assert report.oracle_agrees is True
    assert report.determinant_obstructs is False
    assert report.flagged == ()


def test_septd_negative_instance() -> None:
    K = parse_field("GF(2)", ["rat:s", "rat:t", "rat:u", "odd:x^3+x+1"])
    report = septd_suite(adjoint(f2stu(), ["1", "s", "t", "u"]), K)
    assert report.agree
    assert report.verdict_F.verdict is Verdict.FALSE
    assert report.pfister_oracle is False
    assert report.oracle_agrees is True
    assert report.determinant_obstructs is True
    assert report.flagged == ()


def test_septd_on_quaternions_skips_the_oracle() -> None:
    K = parse_field("GF(2)", ["rat:s", "rat:t", "as:s*t"])
    report = septd_suite(twisted_quaternion(f2st(), "t", "s"), K, budget=100)
    assert report.agree
    assert report.pfister_oracle is None


def test_septd_rejects_inseparable_layers() -> None:
    with pytest.raises(InseparableExtensionError, match="septd requires separable layers"):
        septd_suite(diag_one_t(), _over_f2t(["insep:t"]))
