"""Test instance generation and the randomized verification suite"""

import json
import random

import pytest

from involab.fields import parse_field
from involab.forms import bilinear_is_isotropic
from involab.suite import (
    FAMILIES,
    SuiteReport,
    check_instance,
    instance_digest,
    plan,
    random_anisotropic_form,
    theorem_suite,
)


def test_plan_cycles_through_families() -> None:
    jobs = plan(0, 6)
    assert [family for family, _ in jobs] == [
        "split-t",
        "split-st",
        "quaternion-twist",
        "quaternion-tensor",
        "split-t",
        "split-st",
    ]
    assert plan(0, 6) == jobs
    assert plan(1, 6) != jobs
    assert plan(0, 0) == []


def test_random_anisotropic_form() -> None:
    F = parse_field("GF(2)", ["rat:s", "rat:t"])
    rng = random.Random(9)
    for dim in (1, 2, 4):
        b = random_anisotropic_form(F, dim, rng)
        assert b.dim == dim
        assert not bilinear_is_isotropic(b)


def test_random_anisotropic_form_gives_up() -> None:
    with pytest.raises(ValueError, match="no anisotropic form"):
        random_anisotropic_form(parse_field("GF(2)", ["rat:t"]), 3, random.Random(0))


def test_instance_digest_is_stable() -> None:
    A = FAMILIES["split-t"](random.Random(5))
    B = FAMILIES["split-t"](random.Random(5))
    assert instance_digest("split-t", 5, A) == instance_digest("split-t", 5, B)
    assert instance_digest("split-t", 5, A) != instance_digest("split-t", 6, A)
    assert len(instance_digest("split-t", 5, A)) == 64


@pytest.mark.parametrize("family", list(FAMILIES))
def test_check_instance(family: str) -> None:
    result = check_instance(family, 12345)
    assert result["passed"], result["checks"]
    assert result["family"] == family
    assert result["flagged"] == []
    json.dumps(result)


def test_two_variable_instances_cover_degree_five_and_composite_layers() -> None:
    result = check_instance("split-st", 12345)
    extensions = [d["extension"] for d in result["descent"]]
    assert ["odd:x^5+x^2+1"] in extensions
    assert ["as:s*t", "odd:x^3+x+1"] in extensions
    assert all(d["passed"] for d in result["descent"])


def test_empty_suite() -> None:
    report = theorem_suite(seed=0, count=0)
    assert report.passed
    assert report.instances == []
    assert json.loads(report.to_json())["failures"] == []


def test_suite_report_failures() -> None:
    report = SuiteReport(
        seed=0,
        count=2,
        instances=[
            {"digest": "a", "family": "split-t", "seed": 1, "passed": True},
            {"digest": "b", "family": "split-st", "seed": 2, "passed": False},
        ],
    )
    assert not report.passed
    assert report.digests == ["a", "b"]
    assert report.failures() == [{"digest": "b", "family": "split-st", "seed": 2}]


@pytest.mark.slow
def test_suite_is_reproducible() -> None:
    first = theorem_suite(seed=3, count=4)
    second = theorem_suite(seed=3, count=4, workers=2)
    assert first.passed
    assert first.digests == second.digests
    assert first.digests == sorted(first.digests)
    assert first.to_json() == second.to_json()
