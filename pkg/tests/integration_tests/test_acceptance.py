"""End-to-end checks of the alternator computations against known instances"""

import random

import pytest

from involab.algebras import quaternion, tensor, twist_involution
from involab.alternator import (
    Verdict,
    alternator,
    brute_force_S,
    check_q_laws,
    inseparable_jump,
    is_direct,
    random_alt_membership_check,
    septd_suite,
    totally_decomposable_anisotropic,
    verify_separable_descent,
)
from involab.fields import parse_field
from involab.forms import determinant_square_class_obstructs
from involab.suite import random_anisotropic_form, theorem_suite
from tests.utils import adjoint, diag_one_t, f2st, f2stu, f2t, transpose, twisted_quaternion

ONE_VARIABLE_EXTENSIONS = [
    ["as:t"],
    ["odd:x^3+x+1"],
    ["odd:x^5+x^2+1"],
    ["as:t", "odd:x^3+x+1"],
    ["odd:x^3+x+1", "as:t"],
]


def _finite_instances() -> list:
    instances = []
    for field in ("GF(2)", "GF(4)"):
        F = parse_field(field)
        instances.append(transpose(field, 2))
        instances.append(adjoint(F, ["1", "1", "1"]))
        instances.append(twist_involution(transpose(field, 2), "E11 + E12 + E21"))
        for a, c in (("1", "1"), ("0", "1")):
            Q = quaternion(a, c, F)
            instances.append(twist_involution(Q, "v"))
    gf4 = parse_field("GF(4)")
    instances.append(adjoint(gf4, ["1", "g"]))
    instances.append(adjoint(gf4, ["g", "g+1"]))
    instances.append(twist_involution(quaternion("g", "g", gf4), "v"))
    instances.append(twist_involution(quaternion("g", "1", gf4), "uv"))
    instances.append(twist_involution(quaternion("g+1", "g", gf4), "v"))
    instances.append(twist_involution(quaternion("1", "g+1", gf4), "v"))
    instances.append(twist_involution(transpose("GF(4)", 2), "g*E11 + E12 + E21"))
    instances.append(twist_involution(quaternion("1", "1", parse_field("GF(2)")), "uv"))
    instances.append(twist_involution(transpose("GF(2)", 3), "E11 + E12 + E21 + E33"))
    instances.append(twist_involution(transpose("GF(2)", 3), "E11 + E23 + E32"))
    return instances


def test_oracle_equivalence_small() -> None:
    instances = _finite_instances()
    assert len(instances) >= 20
    for A in instances:
        assert brute_force_S(A) == alternator(A).S, A


@pytest.mark.slow
def test_oracle_equivalence_sixteen_dimensional() -> None:
    gf2 = parse_field("GF(2)")
    Q = twist_involution(quaternion("1", "1", gf2), "v")
    gf4 = parse_field("GF(4)")
    instances = [
        transpose("GF(2)", 4),
        adjoint(gf2, ["1", "1", "1", "1"]),
        tensor(Q, Q),
        transpose("GF(4)", 3),
        adjoint(gf4, ["1", "1", "g"]),
    ]
    for A in instances:
        assert brute_force_S(A) == alternator(A).S, A


def test_diag_one_t_reproduction() -> None:
    A = diag_one_t()
    F = A.field
    report = alternator(A)
    assert report.dim_S == 2
    assert [str(x) for x in report.basis] == ["t*E12+E21", "E11+E22"]
    assert report.q_values == (F("t"), F.one)
    assert is_direct(A, report)
    assert totally_decomposable_anisotropic(A, report=report).verdict is Verdict.TRUE


def test_inseparable_jump_is_real() -> None:
    K = parse_field("GF(2)", ["rat:t", "insep:t"])
    report = inseparable_jump(diag_one_t(), K)
    assert (report.dim_F, report.dim_K) == (2, 3)
    assert report.contained


def test_separable_descent_suite() -> None:
    rng = random.Random(2024)
    F = f2t()
    pairs = 0
    instances = [diag_one_t(), adjoint(F, ["1", "1"]), adjoint(F, ["t", "t+1", "1"])]
    instances += [adjoint(F, ["1", "t", "t+1"])]
    instances += [adjoint(F, random_anisotropic_form(F, 2, rng).gram.diagonal_entries())]
    for A in instances:
        for layers in ONE_VARIABLE_EXTENSIONS:
            K = parse_field("GF(2)", ["rat:t"] + layers)
            report = verify_separable_descent(A, K)
            assert report.equal and report.q_agree, (A, layers)
            pairs += 1
    two_variables = [
        adjoint(f2st(), ["1", "s", "t", "s*t"]),
        adjoint(f2st(), ["1", "s", "t"]),
        adjoint(f2st(), ["s", "t"]),
    ]
    for A in two_variables:
        for layers in (["as:s*t"], ["odd:x^3+x+1"]):
            K = parse_field("GF(2)", ["rat:s", "rat:t"] + layers)
            assert verify_separable_descent(A, K).passed
            pairs += 1
    assert pairs >= 30


def test_decomposability_positive_and_negative() -> None:
    positive = totally_decomposable_anisotropic(adjoint(f2st(), ["1", "s", "t", "s*t"]))
    assert positive.verdict is Verdict.TRUE
    assert positive.contained_in_sym and positive.dim_S == 4
    assert positive.passed

    A = adjoint(f2stu(), ["1", "s", "t", "u"])
    negative = totally_decomposable_anisotropic(A)
    assert negative.verdict is Verdict.FALSE
    assert A.form is not None
    assert determinant_square_class_obstructs(A.form)


def test_septd_agreement() -> None:
    rng = random.Random(7)
    F = f2st()
    extensions = (["odd:x^3+x+1"], ["as:s*t"], ["odd:x^5+x^2+1"], ["as:s*t", "odd:x^3+x+1"])
    instances = 0
    for i in range(8):
        b = random_anisotropic_form(F, rng.choice((2, 4)), rng)
        K = parse_field("GF(2)", ["rat:s", "rat:t"] + extensions[i % len(extensions)])
        report = septd_suite(adjoint(F, b.gram.diagonal_entries()), K)
        assert report.agree
        assert report.oracle_agrees is True
        assert report.flagged == ()
        instances += 1
    K = parse_field("GF(2)", ["rat:s", "rat:t", "as:s*t"])
    for A in (twisted_quaternion(F, "t", "s"), _quaternion_tensor(F)):
        report = septd_suite(A, K, assume_anisotropic=True)
        assert report.agree
        assert report.verdict_F.verdict is Verdict.TRUE
        instances += 1
    assert instances >= 10


def _quaternion_tensor(F):
    return tensor(twisted_quaternion(F, "t", "s"), twisted_quaternion(F, "s", "t+1"))


def test_septd_on_quaternion_tensor() -> None:
    K = parse_field("GF(2)", ["rat:s", "rat:t", "as:s*t"])
    report = septd_suite(_quaternion_tensor(f2st()), K, assume_anisotropic=True)
    assert report.verdict_F.verdict is Verdict.TRUE
    assert report.verdict_K.verdict is Verdict.TRUE
    assert report.agree
    assert report.verdict_F.passed and report.verdict_K.passed
    assert all(report.verdict_K.certificates.values())
    assert report.pfister_oracle is None


def test_form_laws_and_alt_membership() -> None:
    for A in (diag_one_t(), adjoint(f2st(), ["1", "s", "t", "s*t"]), transpose("GF(4)", 3)):
        report = alternator(A)
        assert check_q_laws(report, samples=200, seed=1)
        assert random_alt_membership_check(A, samples=200, seed=1)
        assert report.q(A.one) == A.field.one


@pytest.mark.slow
def test_form_laws_and_alt_membership_thousand_samples() -> None:
    for A in (diag_one_t(), adjoint(f2st(), ["1", "s", "t", "s*t"]), transpose("GF(4)", 3)):
        report = alternator(A)
        assert check_q_laws(report, samples=1000, seed=3)
        assert random_alt_membership_check(A, samples=1000, seed=3)


def test_directness_under_odd_extensions() -> None:
    rng = random.Random(11)
    F = f2st()
    odd = ("odd:x^3+x+1", "odd:x^5+x^2+1")
    for i in range(10):
        b = random_anisotropic_form(F, rng.choice((2, 3, 4)), rng)
        A = adjoint(F, b.gram.diagonal_entries())
        K = parse_field("GF(2)", ["rat:s", "rat:t", odd[i % 2]])
        report = verify_separable_descent(A, K)
        assert report.direct_F
        assert report.direct_F == report.direct_K


@pytest.mark.slow
def test_theorem_suite_seed_42() -> None:
    report = theorem_suite(seed=42, count=10)
    assert report.passed, report.failures()
    assert len(report.digests) == 10
    assert theorem_suite(seed=42, count=10).digests == report.digests
