"""Randomized verification of the descent and decomposability properties.

Instances are drawn per family from a seeded generator and identified by
the sha256 digest of their description, so a rerun with the same seed
reproduces the same digests in the same order.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence, Tuple

from involab.algebras import (
    DEFAULT_SEED,
    AlgebraWithInvolution,
    matrix_algebra_adjoint,
    quaternion,
    tensor,
    twist_involution,
)
from involab.alternator import (
    alternator,
    check_q_laws,
    inseparable_jump,
    random_alt_membership_check,
    septd_suite,
    verify_separable_descent,
)
from involab.fields import FieldTower, extend_tower, parse_field
from involab.forms import BilinearForm, bilinear_is_isotropic

logger = logging.getLogger(__name__)

DEFAULT_SUITE_COUNT = 10
SUITE_SAMPLES = 50
SUITE_BUDGET = 200
MAX_ATTEMPTS = 100

ONE_VARIABLE = ("GF(2)", ("rat:t",))
TWO_VARIABLES = ("GF(2)", ("rat:s", "rat:t"))

EXTENSIONS: Dict[Tuple[str, ...], Tuple[Tuple[str, ...], ...]] = {
    ONE_VARIABLE[1]: (
        ("as:t",),
        ("odd:x^3+x+1",),
        ("odd:x^5+x^2+1",),
        ("as:t", "odd:x^3+x+1"),
    ),
    TWO_VARIABLES[1]: (
        ("as:s*t",),
        ("odd:x^3+x+1",),
        ("odd:x^5+x^2+1",),
        ("as:s*t", "odd:x^3+x+1"),
    ),
}


def random_anisotropic_form(F: FieldTower, dim: int, rng: random.Random) -> BilinearForm:
    """A diagonal form with small entries, redrawn until it is anisotropic."""
    for _ in range(MAX_ATTEMPTS):
        b = BilinearForm.diagonal(F, [F.one] + [F.small_element(rng) for _ in range(dim - 1)])
        if not bilinear_is_isotropic(b):
            return b
    raise ValueError(
        f"no anisotropic form of dimension {dim} over {F!r} after {MAX_ATTEMPTS} draws"
    )


def _twisted_quaternion(F: FieldTower, rng: random.Random) -> AlgebraWithInvolution:
    Q = quaternion(F.small_element(rng), F.small_element(rng), F)
    for twist in rng.sample(["v", "uv", "v+uv"], 3):
        try:
            return twist_involution(Q, twist)
        except ValueError:
            continue
    raise ValueError(f"no orthogonal twist of {Q!r}")


def _split_one_variable(rng: random.Random) -> AlgebraWithInvolution:
    return matrix_algebra_adjoint(random_anisotropic_form(parse_field(*ONE_VARIABLE), 2, rng))


def _split_two_variables(rng: random.Random) -> AlgebraWithInvolution:
    F = parse_field(*TWO_VARIABLES)
    return matrix_algebra_adjoint(random_anisotropic_form(F, rng.choice((2, 4)), rng))


def _quaternion_twist(rng: random.Random) -> AlgebraWithInvolution:
    return _twisted_quaternion(parse_field(*TWO_VARIABLES), rng)


def _quaternion_tensor(rng: random.Random) -> AlgebraWithInvolution:
    F = parse_field(*TWO_VARIABLES)
    return tensor(_twisted_quaternion(F, rng), _twisted_quaternion(F, rng))


FAMILIES: Dict[str, Callable[[random.Random], AlgebraWithInvolution]] = {
    "split-t": _split_one_variable,
    "split-st": _split_two_variables,
    "quaternion-twist": _quaternion_twist,
    "quaternion-tensor": _quaternion_tensor,
}


def instance_digest(family: str, seed: int, A: AlgebraWithInvolution) -> str:
    """Stable identifier of a generated instance.

    Args:
        family: Name of the generating family.
        seed: Seed the instance was drawn with.
        A: The generated algebra.

    Returns:
        Hex sha256 of the canonical JSON of family, seed, field and algebra.
    """
    payload = {
        "family": family,
        "seed": seed,
        "field": A.field.description,
        "algebra": A.description,
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _extensions_for(family: str, A: AlgebraWithInvolution) -> Sequence[Tuple[str, ...]]:
    layers = tuple(A.field.key[1:])
    options = EXTENSIONS[layers]
    # descent over a tensor of quaternions is the expensive case
    return options[:1] if family == "quaternion-tensor" else options


def check_instance(family: str, seed: int) -> Dict[str, Any]:
    """Build one instance and run every property check on it."""
    rng = random.Random(seed)
    A = FAMILIES[family](rng)
    digest = instance_digest(family, seed, A)
    logger.debug("instance %s (%s, seed %d)", digest[:12], family, seed)

    report = alternator(A)
    checks: Dict[str, bool] = {
        "certificates": report.passed,
        "q_laws": check_q_laws(report, samples=SUITE_SAMPLES, seed=seed),
        "alt_membership": random_alt_membership_check(
            A, samples=SUITE_SAMPLES, seed=seed, sparse=True
        ),
    }
    descents = []
    for layers in _extensions_for(family, A):
        K = extend_tower(A.field, layers)
        descent = verify_separable_descent(A, K)
        jump = inseparable_jump(A, K)
        descents.append(
            {
                "extension": list(layers),
                "dims": {"F": descent.dim_F, "K": descent.dim_K},
                "passed": descent.passed and not jump.jumped and jump.contained,
            }
        )
    checks["descent"] = all(d["passed"] for d in descents)

    K = extend_tower(A.field, _extensions_for(family, A)[0])
    septd = septd_suite(A, K, seed=seed, budget=SUITE_BUDGET)
    checks["septd"] = septd.agree and septd.verdict_F.passed and septd.verdict_K.passed
    checks["pfister_oracle"] = septd.oracle_agrees is not False

    return {
        "digest": digest,
        "family": family,
        "seed": seed,
        "dims": {"A": A.dim, "S": report.dim_S},
        "q_values": [str(q) for q in report.q_values],
        "direct": report.direct,
        "verdicts": {"F": septd.verdict_F.verdict.value, "K": septd.verdict_K.verdict.value},
        "provenance": septd.verdict_F.provenance.value,
        "descent": descents,
        "flagged": list(septd.flagged),
        "checks": checks,
        "passed": all(checks.values()),
    }


@dataclass
class SuiteReport:
    seed: int
    count: int
    instances: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(instance["passed"] for instance in self.instances)

    @property
    def digests(self) -> List[str]:
        return [instance["digest"] for instance in self.instances]

    def failures(self) -> List[Dict[str, Any]]:
        return [
            {"digest": i["digest"], "family": i["family"], "seed": i["seed"]}
            for i in self.instances
            if not i["passed"]
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "count": self.count,
            "digests": self.digests,
            "instances": self.instances,
            "failures": self.failures(),
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def plan(seed: int, count: int) -> List[Tuple[str, int]]:
    """``(family, instance seed)`` pairs; families are visited in turn."""
    rng = random.Random(seed)
    families = list(FAMILIES)
    return [(families[i % len(families)], rng.randrange(2**32)) for i in range(count)]


def theorem_suite(
    seed: int = DEFAULT_SEED, count: int = DEFAULT_SUITE_COUNT, workers: int = 1
) -> SuiteReport:
    """Generate ``count`` instances and check them, optionally in a process pool.

    Args:
        seed: Seed of the instance plan.
        count: Total number of instances; families are visited in turn.
        workers: Worker processes; ``1`` checks the instances in-process.

    Returns:
        A :class:`SuiteReport` with the instances sorted by digest.

    Raises:
        ValueError: If ``count`` is negative.
    """
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    jobs = plan(seed, count)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(check_instance, *zip(*jobs)))
    else:
        results = [check_instance(family, s) for family, s in jobs]
    results.sort(key=lambda r: r["digest"])
    report = SuiteReport(seed=seed, count=count, instances=results)
    logger.info(
        "suite seed %d: %d instances, %d failed", seed, count, len(report.failures())
    )
    return report
