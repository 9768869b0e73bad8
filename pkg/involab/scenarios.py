"""Scenario files and the task runner behind ``involab run``.

A scenario is a TOML file::

    seed = 0
    tasks = ["analyze", "decompose", "descent"]
    extensions = ["as:t", ["odd:x^3+x+1", "as:t"]]

    [field]
    base = "GF(2)"
    layers = ["rat:t"]

    [algebra]
    type = "adjoint"
    form = ["1", "t"]

Running it produces a JSON report whose content depends only on the
scenario and the seed, apart from the ``timings`` entry.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import tomli

from involab.algebras import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    AlgebraWithInvolution,
    InvolutionType,
    classify_type,
    matrix_algebra_adjoint,
    quaternion,
    tensor,
    twist_involution,
)
from involab.alternator import (
    DEFAULT_SAMPLES,
    AlternatorReport,
    alternator,
    brute_force_S,
    check_q_laws,
    inseparable_jump,
    is_direct,
    random_alt_membership_check,
    sample_q_multiplicativity,
    septd_suite,
    totally_decomposable_anisotropic,
    verify_separable_descent,
)
from involab.fields import FieldElement, FieldTower, ParseError, parse_base, parse_element
from involab.fields.parsing import parse_layer
from involab.forms import BilinearForm

logger = logging.getLogger(__name__)

try:
    VERSION = version("involab")
except PackageNotFoundError:
    VERSION = "0.0.0"


class ScenarioError(ValueError):
    """A scenario is well-formed TOML but describes an invalid instance."""

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}")
        self.key = key


class Task(str, Enum):
    ANALYZE = "analyze"
    DECOMPOSE = "decompose"
    DESCENT = "descent"
    JUMP = "jump"
    SEPTD = "septd"
    ORACLE = "oracle"


SEPARABLE_TASKS = (Task.DESCENT, Task.SEPTD)

ExtensionSpec = Union[str, Sequence[str]]


@dataclass(frozen=True)
class Scenario:
    name: str
    field: FieldTower
    algebra: AlgebraWithInvolution
    extensions: Tuple[FieldTower, ...]
    tasks: Tuple[Task, ...]
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    samples: int = DEFAULT_SAMPLES
    assume_anisotropic: bool = False
    source: Mapping[str, Any] = field(default_factory=dict)


def _require(data: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in data:
        raise ScenarioError(f"{path}.{key}" if path else key, "missing required key")
    return data[key]


def _integer(data: Mapping[str, Any], key: str, default: int) -> int:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ScenarioError(key, f"expected a non-negative integer, got {value!r}")
    return value


def _element(F: FieldTower, value: Any, key: str) -> FieldElement:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ScenarioError(key, f"expected a field literal, got {value!r}")
    try:
        return parse_element(str(value), F)
    except ParseError as e:
        raise ScenarioError(key, str(e)) from e


def _extension(F: FieldTower, spec: ExtensionSpec, key: str) -> FieldTower:
    layers = [spec] if isinstance(spec, str) else list(spec)
    if not layers or not all(isinstance(layer, str) for layer in layers):
        raise ScenarioError(key, "expected a layer descriptor or a list of them")
    K = F
    for i, layer in enumerate(layers):
        where = key if isinstance(spec, str) else f"{key}[{i}]"
        try:
            K = K.extend(parse_layer(layer, K))
        except ValueError as e:
            raise ScenarioError(where, str(e)) from e
    return K


def build_field(data: Mapping[str, Any]) -> FieldTower:
    section = _require(data, "field", "")
    base = _require(section, "base", "field")
    try:
        F = parse_base(base)
    except ValueError as e:
        raise ScenarioError("field.base", str(e)) from e
    layers = section.get("layers", [])
    if not isinstance(layers, list):
        raise ScenarioError("field.layers", "expected a list of layer descriptors")
    for i, layer in enumerate(layers):
        F = _extension(F, layer, f"field.layers[{i}]")
    logger.debug("scenario field %r", F)
    return F


def _adjoint(F: FieldTower, spec: Mapping[str, Any], path: str) -> AlgebraWithInvolution:
    if "form" in spec:
        values = [_element(F, v, f"{path}.form[{i}]") for i, v in enumerate(spec["form"])]
        b = BilinearForm.diagonal(F, values)
    elif "gram" in spec:
        rows = [
            [_element(F, v, f"{path}.gram[{i}][{j}]") for j, v in enumerate(row)]
            for i, row in enumerate(spec["gram"])
        ]
        try:
            b = BilinearForm.from_gram(F, rows)
        except ValueError as e:
            raise ScenarioError(f"{path}.gram", str(e)) from e
    else:
        raise ScenarioError(path, "adjoint algebras need 'form' or 'gram'")
    try:
        return matrix_algebra_adjoint(b)
    except ValueError as e:
        raise ScenarioError(path, str(e)) from e


def _quaternion(F: FieldTower, spec: Mapping[str, Any], path: str) -> AlgebraWithInvolution:
    a = _element(F, _require(spec, "a", path), f"{path}.a")
    c = _element(F, _require(spec, "c", path), f"{path}.c")
    try:
        return quaternion(a, c, F)
    except ValueError as e:
        raise ScenarioError(path, str(e)) from e


def build_algebra(
    F: FieldTower, spec: Mapping[str, Any], path: str = "algebra"
) -> AlgebraWithInvolution:
    """Construct the algebra described by an ``[algebra]`` table."""
    kind = _require(spec, "type", path)
    if kind == "adjoint":
        A = _adjoint(F, spec, path)
    elif kind == "quaternion":
        A = _quaternion(F, spec, path)
    elif kind == "tensor":
        factors = _require(spec, "factors", path)
        if not isinstance(factors, list) or not factors:
            raise ScenarioError(f"{path}.factors", "expected a non-empty list of algebras")
        A = build_algebra(F, factors[0], f"{path}.factors[0]")
        for i, factor in enumerate(factors[1:], start=1):
            A = tensor(A, build_algebra(F, factor, f"{path}.factors[{i}]"))
    else:
        raise ScenarioError(
            f"{path}.type", f"unknown algebra type {kind!r}; expected adjoint, quaternion or tensor"
        )
    if "twist" in spec:
        try:
            A = twist_involution(A, str(spec["twist"]))
        except (ParseError, KeyError, ValueError) as e:
            raise ScenarioError(f"{path}.twist", str(e)) from e
    return A


def parse_scenario(
    data: Mapping[str, Any],
    name: str = "<scenario>",
    *,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> Scenario:
    """Validate a decoded scenario table; ``seed`` and ``budget`` override it."""
    F = build_field(data)
    A = build_algebra(F, _require(data, "algebra", ""))

    raw_tasks = _require(data, "tasks", "")
    if not isinstance(raw_tasks, list) or not raw_tasks:
        raise ScenarioError("tasks", "expected a non-empty list of task names")
    tasks = []
    for i, task in enumerate(raw_tasks):
        try:
            tasks.append(Task(task))
        except ValueError:
            names = ", ".join(t.value for t in Task)
            raise ScenarioError(f"tasks[{i}]", f"unknown task {task!r}; expected one of {names}")

    raw_extensions = data.get("extensions", [])
    if not isinstance(raw_extensions, list):
        raise ScenarioError("extensions", "expected a list of extensions")
    extensions = tuple(
        _extension(F, spec, f"extensions[{i}]") for i, spec in enumerate(raw_extensions)
    )
    for i, K in enumerate(extensions):
        for task in tasks:
            if task in SEPARABLE_TASKS and not K.is_separable_over(F):
                raise ScenarioError(
                    f"extensions[{i}]", f"{task.value} requires separable layers"
                )
    needs_extension = [t for t in tasks if t in SEPARABLE_TASKS or t is Task.JUMP]
    if needs_extension and not extensions:
        raise ScenarioError(
            "extensions", f"{needs_extension[0].value} needs at least one extension"
        )

    if classify_type(A) is InvolutionType.SYMPLECTIC:
        raise ScenarioError("algebra", "the involution is symplectic; q_sigma is undefined")

    assume = data.get("assume_anisotropic", False)
    if not isinstance(assume, bool):
        raise ScenarioError("assume_anisotropic", f"expected a boolean, got {assume!r}")

    return Scenario(
        name=name,
        field=F,
        algebra=A,
        extensions=extensions,
        tasks=tuple(tasks),
        seed=_integer(data, "seed", DEFAULT_SEED) if seed is None else seed,
        budget=_integer(data, "budget", DEFAULT_BUDGET) if budget is None else budget,
        samples=_integer(data, "samples", DEFAULT_SAMPLES),
        assume_anisotropic=assume,
        source=data,
    )


def load_scenario(
    path: Union[str, Path], *, seed: Optional[int] = None, budget: Optional[int] = None
) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    try:
        with open(path, "rb") as f:
            data = tomli.load(f)
    except tomli.TOMLDecodeError as e:
        raise ScenarioError(str(path), str(e)) from e
    return parse_scenario(data, path.name, seed=seed, budget=budget)


# -- report assembly ---------------------------------------------------------


def _extension_name(scenario: Scenario, K: FieldTower) -> List[str]:
    return list(K.key[len(scenario.field.key) :])


def _format_basis(report: AlternatorReport) -> List[List[str]]:
    return report.S.format()


def _analyze(scenario: Scenario, report: AlternatorReport) -> Tuple[Dict[str, Any], bool]:
    direct = is_direct(scenario.algebra, report)
    laws = check_q_laws(report, samples=scenario.samples, seed=scenario.seed)
    membership = random_alt_membership_check(
        scenario.algebra, samples=scenario.samples, seed=scenario.seed
    )
    sampled = sample_q_multiplicativity(report, samples=scenario.samples, seed=scenario.seed)
    result = {
        "dims": {
            "A": scenario.algebra.dim,
            "S": report.dim_S,
            "sym": report.sym.dim,
            "alt": report.alt.dim,
        },
        "basis": _format_basis(report),
        "q_values": [str(q) for q in report.q_values],
        "contained_in_sym": report.contained_in_sym,
        "direct": direct,
        "certificates": dict(report.certificates),
        "q_laws": laws,
        "alt_membership": membership,
        "q_multiplicative_failures": sampled.failures,
    }
    return result, report.passed and laws and membership


def _decompose(scenario: Scenario, report: AlternatorReport) -> Tuple[Dict[str, Any], bool]:
    result = totally_decomposable_anisotropic(
        scenario.algebra,
        report=report,
        assume_anisotropic=scenario.assume_anisotropic,
        budget=scenario.budget,
        seed=scenario.seed,
    )
    return {
        "verdict": result.verdict.value,
        "provenance": result.provenance.value,
        "dim_S": result.dim_S,
        "contained_in_sym": result.contained_in_sym,
        "certificates": dict(result.certificates),
    }, result.passed


def _descent(scenario: Scenario, _: AlternatorReport) -> Tuple[List[Dict[str, Any]], bool]:
    results, passed = [], True
    for K in scenario.extensions:
        r = verify_separable_descent(scenario.algebra, K)
        passed = passed and r.passed
        results.append(
            {
                "extension": _extension_name(scenario, K),
                "dims": {"F": r.dim_F, "K": r.dim_K},
                "equal": r.equal,
                "q_agree": r.q_agree,
                "contained": r.contained,
                "direct": {"F": r.direct_F, "K": r.direct_K},
                "passed": r.passed,
            }
        )
    return results, passed


def _jump(scenario: Scenario, _: AlternatorReport) -> Tuple[List[Dict[str, Any]], bool]:
    results, passed = [], True
    for K in scenario.extensions:
        r = inseparable_jump(scenario.algebra, K)
        passed = passed and r.contained
        if K.is_separable_over(scenario.field) and r.jumped:
            logger.error("S grew over the separable extension %r", K)
            passed = False
        results.append(
            {
                "extension": _extension_name(scenario, K),
                "dims": {"F": r.dim_F, "K": r.dim_K},
                "jumped": r.jumped,
                "contained": r.contained,
            }
        )
    return results, passed


def _septd(scenario: Scenario, _: AlternatorReport) -> Tuple[List[Dict[str, Any]], bool]:
    results, passed = [], True
    for K in scenario.extensions:
        r = septd_suite(
            scenario.algebra,
            K,
            assume_anisotropic=scenario.assume_anisotropic,
            budget=scenario.budget,
            seed=scenario.seed,
        )
        passed = passed and r.agree and r.verdict_F.passed and r.verdict_K.passed
        results.append(
            {
                "extension": _extension_name(scenario, K),
                "verdicts": {"F": r.verdict_F.verdict.value, "K": r.verdict_K.verdict.value},
                "provenance": {
                    "F": r.verdict_F.provenance.value,
                    "K": r.verdict_K.provenance.value,
                },
                "agree": r.agree,
                "pfister_oracle": r.pfister_oracle,
                "oracle_agrees": r.oracle_agrees,
                "determinant_obstructs": r.determinant_obstructs,
                "flagged": list(r.flagged),
            }
        )
    return results, passed


def _oracle(scenario: Scenario, report: AlternatorReport) -> Tuple[Dict[str, Any], bool]:
    enumerated = brute_force_S(scenario.algebra)
    equal = enumerated == report.S
    if not equal:
        logger.error("enumeration gives dim %d, alternator gives %d", enumerated.dim, report.dim_S)
    return {"dims": {"enumerated": enumerated.dim, "S": report.dim_S}, "equal": equal}, equal


Runner = Callable[[Scenario, AlternatorReport], Tuple[Any, bool]]

RUNNERS: Dict[Task, Runner] = {
    Task.ANALYZE: _analyze,
    Task.DECOMPOSE: _decompose,
    Task.DESCENT: _descent,
    Task.JUMP: _jump,
    Task.SEPTD: _septd,
    Task.ORACLE: _oracle,
}


@dataclass
class Report:
    """Structured outcome of a scenario run."""

    content: Dict[str, Any]
    passed: bool
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self, *, timings: bool = True) -> Dict[str, Any]:
        data = dict(self.content)
        if timings:
            data["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return data

    def to_json(self, *, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings=timings), indent=2, sort_keys=True) + "\n"


def run(scenario: Scenario, *, force_oracle: bool = False) -> Report:
    """Execute every task of ``scenario``; ``force_oracle`` adds enumeration."""
    tasks = list(scenario.tasks)
    if force_oracle and Task.ORACLE not in tasks:
        tasks.append(Task.ORACLE)
    logger.info("running %s: %s", scenario.name, ", ".join(t.value for t in tasks))

    timings: Dict[str, float] = {}
    start = time.perf_counter()
    report = alternator(scenario.algebra)
    timings["alternator"] = time.perf_counter() - start

    results: Dict[str, Any] = {}
    passed = report.passed
    for task in tasks:
        start = time.perf_counter()
        results[task.value], ok = RUNNERS[task](scenario, report)
        timings[task.value] = time.perf_counter() - start
        logger.info(
            "task %s %s in %.3fs", task.value, "passed" if ok else "FAILED", timings[task.value]
        )
        passed = passed and ok

    verdicts: Dict[str, Any] = {"direct": report.direct}
    provenance = None
    if Task.DECOMPOSE.value in results:
        verdicts["decomposable"] = results[Task.DECOMPOSE.value]["verdict"]
        provenance = results[Task.DECOMPOSE.value]["provenance"]
    if Task.SEPTD.value in results:
        verdicts["septd_agree"] = all(r["agree"] for r in results[Task.SEPTD.value])
    if Task.DESCENT.value in results:
        verdicts["descent"] = all(r["passed"] for r in results[Task.DESCENT.value])

    content = {
        "version": VERSION,
        "scenario": scenario.source,
        "seed": scenario.seed,
        "budget": scenario.budget,
        "field": scenario.field.description,
        "algebra": scenario.algebra.description,
        "dims": {"A": scenario.algebra.dim, "degree": scenario.algebra.degree, "S": report.dim_S},
        "q_values": [str(q) for q in report.q_values],
        "basis": _format_basis(report),
        "verdicts": verdicts,
        "provenance": provenance,
        "certificates": dict(report.certificates),
        "tasks": results,
        "passed": passed,
    }
    return Report(content=content, passed=passed, timings=timings)


def run_scenario(
    path: Union[str, Path],
    *,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
    force_oracle: bool = False,
) -> Report:
    """Load a scenario file and run its tasks.

    Args:
        path: Path of the TOML scenario.
        seed: Overrides the scenario seed.
        budget: Overrides the isotropy search budget.
        force_oracle: Cross-check every task against enumeration where finite.

    Returns:
        The :class:`Report` of the run.
    """
    return run(load_scenario(path, seed=seed, budget=budget), force_oracle=force_oracle)
