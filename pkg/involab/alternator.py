"""The alternator subalgebra ``S(A, sigma)`` and the alternator form ``q_sigma``.

``S(A, sigma)`` is the set of ``x`` with ``sigma(x) x`` in ``F + Alt(A, sigma)``;
for orthogonal ``sigma`` the scalar part is unique and defines ``q_sigma(x)``.
The map ``x -> sigma(x) x`` is additive modulo ``Alt`` and Frobenius
semilinear, so ``S`` is the kernel of a semilinear system.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from involab.algebras import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    AlgebraElement,
    AlgebraWithInvolution,
    IsotropyStatus,
    centralizer,
    isotropy_search,
    scalar_extend,
    sym_alt,
)
from involab.fields import FieldElement, FieldTower, FiniteField
from involab.forms import (
    TSQuadraticForm,
    determinant_square_class_obstructs,
    is_similar_to_pfister,
    ts_is_anisotropic,
)
from involab.linalg import Subspace, semilinear_kernel

logger = logging.getLogger(__name__)

MAX_ENUMERATION = 2**20
DEFAULT_SAMPLES = 1000
# candidates checked against an anisotropy assertion
ASSERTED_SEARCH_BUDGET = 200


class SymplecticInvolutionError(ValueError):
    """The involution is symplectic; ``q_sigma`` is not defined."""


class InseparableExtensionError(ValueError):
    """The extension has an inseparable layer over the algebra's field."""


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    NOT_APPLICABLE = "not applicable"


class AnisotropyProvenance(str, Enum):
    """How the anisotropy of the involution was established."""

    CERTIFIED_SPLIT = "certified-split"
    SEARCHED_NO_WITNESS = "searched-no-witness"
    ASSERTED = "asserted"
    ISOTROPIC = "isotropic"


@dataclass(frozen=True)
class AlternatorReport:
    """``S(A, sigma)`` with the values of ``q_sigma`` on its canonical basis."""

    algebra: AlgebraWithInvolution
    S: Subspace
    q_values: Tuple[FieldElement, ...]
    sym: Subspace
    alt: Subspace
    contained_in_sym: bool
    direct: bool
    certificates: Dict[str, bool]

    @property
    def dim_S(self) -> int:
        return self.S.dim

    @property
    def q_form(self) -> TSQuadraticForm:
        return TSQuadraticForm(self.algebra.field, self.q_values)

    @property
    def basis(self) -> Tuple[AlgebraElement, ...]:
        return tuple(self.algebra.element(v) for v in self.S.basis)

    @property
    def passed(self) -> bool:
        return all(self.certificates.values())

    def q(self, x: AlgebraElement) -> FieldElement:
        """``q_sigma(x) = sum lambda_i^2 q(s_i)`` for ``x = sum lambda_i s_i``."""
        coordinates = self.S.coordinates(x.vector())
        if coordinates is None:
            raise ValueError(f"{x} is not in S(A, sigma)")
        F = self.algebra.field
        total = F.zero
        for c, value in zip(coordinates, self.q_values):
            total = total + c.square() * value
        return total


def _check_orthogonal(A: AlgebraWithInvolution, alt: Subspace) -> None:
    if alt.contains(A.one.vector()):
        raise SymplecticInvolutionError(
            "the involution is symplectic (1 lies in Alt); q_sigma is undefined"
        )


def alternator_value(
    A: AlgebraWithInvolution, x: AlgebraElement, alt: Subspace
) -> Optional[FieldElement]:
    """The unique ``alpha`` with ``sigma(x) x + alpha`` in ``Alt``, if any."""
    rest = alt.reduce((x.sigma() * x).vector())
    unit = alt.reduce(A.one.vector())
    k = next(i for i, u in enumerate(unit) if u)
    alpha = rest[k] / unit[k]
    if any(r != alpha * u for r, u in zip(rest, unit)):
        return None
    return alpha


def alternator(A: AlgebraWithInvolution) -> AlternatorReport:
    """Compute ``S(A, sigma)``, ``q_sigma`` and the certificates.

    Args:
        A: An algebra with orthogonal involution.

    Returns:
        An :class:`AlternatorReport` with an echelon basis of ``S``, the values
        of ``q_sigma`` on it and the structural certificates.

    Raises:
        SymplecticInvolutionError: If ``sigma`` is symplectic.
    """
    F = A.field
    sym, alt = sym_alt(A)
    _check_orthogonal(A, alt)
    # sigma(e_i) e_i modulo F + Alt, in the echelon complement
    base = alt + Subspace.span(F, A.dim, [A.one.vector()])
    images = [base.reduce((e.sigma() * e).vector()) for e in A.basis]
    S = semilinear_kernel(images, F)
    logger.debug("S(A, sigma) has dimension %d in dimension %d", S.dim, A.dim)

    basis = [A.element(v) for v in S.basis]
    q_values: List[FieldElement] = []
    identity_holds = True
    for x in basis:
        alpha = alternator_value(A, x, alt)
        if alpha is None:
            identity_holds = False
            alpha = F.zero
        q_values.append(alpha)

    one = A.one
    certificates = {
        "unit_in_S": S.contains(one.vector()),
        "q_unit_is_one": False,
        "alternator_identity": identity_holds,
        "closed_under_multiplication": all(
            S.contains((x * y).vector()) for x in basis for y in basis
        ),
    }
    report_values = tuple(q_values)
    if certificates["unit_in_S"]:
        coordinates = S.coordinates(one.vector())
        assert coordinates is not None
        q_one = F.zero
        for c, value in zip(coordinates, report_values):
            q_one = q_one + c.square() * value
        certificates["q_unit_is_one"] = q_one.is_one()
    for name, ok in certificates.items():
        if not ok:
            logger.error("alternator certificate %s failed for %r", name, A)

    return AlternatorReport(
        algebra=A,
        S=S,
        q_values=report_values,
        sym=sym,
        alt=alt,
        contained_in_sym=S.is_subspace_of(sym),
        direct=ts_is_anisotropic(TSQuadraticForm(F, report_values)),
        certificates=certificates,
    )


def _finite_elements(F: FieldTower) -> Sequence[int]:
    if not isinstance(F, FiniteField):
        raise ValueError(f"enumeration needs a finite base field, got {F!r}")
    return range(F.order)


def brute_force_S(A: AlgebraWithInvolution) -> Subspace:
    """``S(A, sigma)`` by testing every element of ``A``."""
    F = A.field
    elements = _finite_elements(F)
    size = len(elements) ** A.dim
    if size > MAX_ENUMERATION:
        raise ValueError(f"|A| = {size} exceeds the enumeration cap {MAX_ENUMERATION}")
    _, alt = sym_alt(A)
    base = alt + Subspace.span(F, A.dim, [A.one.vector()])
    members = []
    for coords in itertools.product(elements, repeat=A.dim):
        y = A._sigma_raw(coords)
        product = A._mul_raw(y, coords)
        if not any(base._reduce_raw(list(product))):
            members.append(coords)
    span = Subspace._from_raw(F, A.dim, members)
    if len(members) != len(elements) ** span.dim:
        raise ArithmeticError(
            f"{len(members)} members of S do not form a subspace of dimension {span.dim}"
        )
    logger.debug("enumerated %d elements, %d in S", size, len(members))
    return span


def direct_by_search(report: AlternatorReport) -> bool:
    """No nonzero ``x`` in ``S`` has ``sigma(x) x`` in ``Alt``; finite fields only."""
    A = report.algebra
    elements = _finite_elements(A.field)
    if len(elements) ** report.dim_S > MAX_ENUMERATION:
        raise ValueError("S(A, sigma) is too large to enumerate")
    basis = report.basis
    for coefficients in itertools.product(elements, repeat=report.dim_S):
        if not any(coefficients):
            continue
        x = A.zero
        for c, s in zip(coefficients, basis):
            x = x + s * A.field.element(c)
        if report.alt.contains((x.sigma() * x).vector()):
            return False
    return True


def is_direct(A: AlgebraWithInvolution, report: Optional[AlternatorReport] = None) -> bool:
    """True iff ``q_sigma`` is anisotropic."""
    report = report or alternator(A)
    direct = report.direct
    if isinstance(A.field, FiniteField) and A.field.order**report.dim_S <= MAX_ENUMERATION:
        searched = direct_by_search(report)
        if searched != direct:
            logger.error(
                "directness disagrees with enumeration of S for %r: %s vs %s",
                A,
                direct,
                searched,
            )
    return direct


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def anisotropy_provenance(
    A: AlgebraWithInvolution,
    *,
    assume_anisotropic: bool = False,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> AnisotropyProvenance:
    """Certify, search for or record the anisotropy of ``sigma``.

    Split instances are certified through their form. Otherwise a seeded
    isotropy search runs; an asserted anisotropy only gets a sanity check of
    at most ``ASSERTED_SEARCH_BUDGET`` candidates.

    Args:
        A: The algebra with involution.
        assume_anisotropic: Whether the caller asserts anisotropy.
        budget: Candidate budget of the isotropy search.
        seed: Seed of the isotropy search.

    Returns:
        The :class:`AnisotropyProvenance` tag for the report.
    """
    if assume_anisotropic:
        budget = min(budget, ASSERTED_SEARCH_BUDGET)
    result = isotropy_search(A, budget=budget, seed=seed)
    if result.exact:
        if result.status is IsotropyStatus.ISOTROPIC:
            return AnisotropyProvenance.ISOTROPIC
        return AnisotropyProvenance.CERTIFIED_SPLIT
    if result.status is IsotropyStatus.ISOTROPIC:
        if assume_anisotropic:
            logger.warning(
                "isotropy search found %s on %r, which was asserted anisotropic",
                result.witness,
                A,
            )
        return AnisotropyProvenance.ISOTROPIC
    if assume_anisotropic:
        return AnisotropyProvenance.ASSERTED
    return AnisotropyProvenance.SEARCHED_NO_WITNESS


@dataclass(frozen=True)
class DecomposabilityResult:
    """Verdict of the decomposability criterion.

    ``criterion`` records whether ``S`` lies in ``Sym`` with dimension equal to
    the degree, whatever the verdict; it is meaningful for isotropic input too.
    """

    verdict: Verdict
    provenance: AnisotropyProvenance
    dim_S: int
    contained_in_sym: bool
    criterion: bool
    certificates: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.certificates.values())


def totally_decomposable_anisotropic(
    A: AlgebraWithInvolution,
    *,
    report: Optional[AlternatorReport] = None,
    assume_anisotropic: bool = False,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> DecomposabilityResult:
    """Decide total decomposability of an anisotropic orthogonal involution.

    The verdict is true iff ``S`` lies in ``Sym`` and has dimension equal to
    the degree ``2^n``. A true verdict is backed by the certificates
    ``x^2 = q(x)`` on the basis of ``S``, ``C_A(S) = S`` and directness.

    Args:
        A: An algebra with orthogonal involution.
        report: A precomputed :func:`alternator` report of ``A``.
        assume_anisotropic: Whether the caller asserts anisotropy.
        budget: Candidate budget of the isotropy search.
        seed: Seed of the isotropy search.

    Returns:
        A :class:`DecomposabilityResult` with verdict, provenance and certificates.
    """
    report = report or alternator(A)
    provenance = anisotropy_provenance(
        A, assume_anisotropic=assume_anisotropic, budget=budget, seed=seed
    )
    certificates: Dict[str, bool] = {}
    criterion = report.contained_in_sym and report.dim_S == A.degree
    if not _is_power_of_two(A.degree) or provenance is AnisotropyProvenance.ISOTROPIC:
        verdict = Verdict.NOT_APPLICABLE
    elif not criterion:
        verdict = Verdict.FALSE
    else:
        verdict = Verdict.TRUE
        one = A.one
        certificates = {
            "squares_are_scalars": all(
                x * x == one * q for x, q in zip(report.basis, report.q_values)
            ),
            "centralizer_equals_S": centralizer(A, report.S) == report.S,
            "direct": report.direct,
        }
        for name, ok in certificates.items():
            if not ok:
                logger.error("decomposability certificate %s failed for %r", name, A)
    return DecomposabilityResult(
        verdict=verdict,
        provenance=provenance,
        dim_S=report.dim_S,
        contained_in_sym=report.contained_in_sym,
        criterion=criterion,
        certificates=certificates,
    )


def _check_extension(A: AlgebraWithInvolution, K: FieldTower) -> None:
    if not K.is_extension_of(A.field):
        raise ValueError(f"{K!r} is not an extension of {A.field!r}")


def _check_separable(A: AlgebraWithInvolution, K: FieldTower, task: str) -> None:
    _check_extension(A, K)
    if not K.is_separable_over(A.field):
        raise InseparableExtensionError(f"{task} requires separable layers")


@dataclass(frozen=True)
class DescentReport:
    dim_F: int
    dim_K: int
    equal: bool
    q_agree: bool
    contained: bool
    direct_F: bool
    direct_K: bool

    @property
    def passed(self) -> bool:
        return self.equal and self.q_agree and self.contained and self.direct_F == self.direct_K


def _extended_reports(
    A: AlgebraWithInvolution, K: FieldTower
) -> Tuple[AlternatorReport, AlternatorReport, Subspace]:
    over_F = alternator(A)
    over_K = alternator(scalar_extend(A, K))
    return over_F, over_K, over_F.S.embed(K)


def verify_separable_descent(A: AlgebraWithInvolution, K: FieldTower) -> DescentReport:
    """Check ``S(A_K) = S(A) (x) K`` and ``q_{sigma_K} = (q_sigma)_K``.

    Args:
        A: An algebra with orthogonal involution over ``F``.
        K: A separable extension of ``F``.

    Returns:
        A :class:`DescentReport`; failures are logged, not raised.

    Raises:
        InseparableExtensionError: If ``K`` has an inseparable layer over ``F``.
    """
    _check_separable(A, K, "descent")
    over_F, over_K, embedded = _extended_reports(A, K)
    A_K = over_K.algebra
    q_agree = all(
        over_K.S.contains(A_K.element(v).vector())
        and over_K.q(A_K.element(v)) == K.embed(q)
        for v, q in zip(embedded.basis, over_F.q_values)
    )
    result = DescentReport(
        dim_F=over_F.dim_S,
        dim_K=over_K.dim_S,
        equal=embedded == over_K.S,
        q_agree=q_agree,
        contained=embedded.is_subspace_of(over_K.S),
        direct_F=over_F.direct,
        direct_K=over_K.direct,
    )
    if not result.passed:
        logger.error("separable descent failed over %r: %s", K, result)
    return result


@dataclass(frozen=True)
class JumpReport:
    dim_F: int
    dim_K: int
    jumped: bool
    contained: bool


def inseparable_jump(A: AlgebraWithInvolution, K: FieldTower) -> JumpReport:
    """Compare ``S(A) (x) K`` with ``S(A_K)``; containment always holds."""
    _check_extension(A, K)
    over_F, over_K, embedded = _extended_reports(A, K)
    contained = embedded.is_subspace_of(over_K.S)
    if not contained:
        logger.error("S(A) (x) K is not contained in S(A_K) over %r", K)
    return JumpReport(
        dim_F=over_F.dim_S,
        dim_K=over_K.dim_S,
        jumped=over_K.dim_S > over_F.dim_S,
        contained=contained,
    )


def alt_membership_check(
    A: AlgebraWithInvolution, xs: Sequence[AlgebraElement], alt: Optional[Subspace] = None
) -> bool:
    """``sigma(x) x + sum sigma(x_i) x_i`` lies in ``Alt`` for ``x = sum x_i``."""
    if alt is None:
        _, alt = sym_alt(A)
    x = A.zero
    total = A.zero
    for xi in xs:
        x = x + xi
        total = total + xi.sigma() * xi
    return alt.contains((x.sigma() * x + total).vector())


@dataclass(frozen=True)
class SeptdReport:
    verdict_F: DecomposabilityResult
    verdict_K: DecomposabilityResult
    agree: bool
    pfister_oracle: Optional[bool] = None
    oracle_agrees: Optional[bool] = None
    determinant_obstructs: Optional[bool] = None
    flagged: Tuple[str, ...] = ()


def septd_suite(
    A: AlgebraWithInvolution,
    K: FieldTower,
    *,
    assume_anisotropic: bool = False,
    budget: int = DEFAULT_BUDGET,
    seed: int = DEFAULT_SEED,
) -> SeptdReport:
    """Compare total decomposability over ``F`` and over a separable ``K``."""
    _check_separable(A, K, "septd")
    verdict_F, verdict_K = (
        totally_decomposable_anisotropic(
            B, assume_anisotropic=assume_anisotropic, budget=budget, seed=seed
        )
        for B in (A, scalar_extend(A, K))
    )
    # an isotropy witness over K alone turns the verdict into "not applicable"
    agree = verdict_F.criterion == verdict_K.criterion
    if not agree:
        logger.error(
            "decomposability verdicts differ over %r: %s vs %s",
            K,
            verdict_F.verdict.value,
            verdict_K.verdict.value,
        )
    oracle = agrees = obstructs = None
    flagged: List[str] = []
    if A.form is not None and verdict_F.provenance is AnisotropyProvenance.CERTIFIED_SPLIT:
        oracle = is_similar_to_pfister(A.form)
        agrees = oracle == (verdict_F.verdict is Verdict.TRUE)
        obstructs = determinant_square_class_obstructs(A.form)
        if not agrees:
            message = (
                f"Pfister oracle says {oracle} but the decomposability verdict is "
                f"{verdict_F.verdict.value}"
            )
            logger.warning(message)
            flagged.append(message)
        if obstructs and verdict_F.verdict is Verdict.TRUE:
            message = "non-square determinant on an instance judged decomposable"
            logger.warning(message)
            flagged.append(message)
    return SeptdReport(
        verdict_F=verdict_F,
        verdict_K=verdict_K,
        agree=agree,
        pfister_oracle=oracle,
        oracle_agrees=agrees,
        determinant_obstructs=obstructs,
        flagged=tuple(flagged),
    )


def _random_in_S(report: AlternatorReport, rng: random.Random) -> AlgebraElement:
    A = report.algebra
    x = A.zero
    for s in report.basis:
        x = x + s * A.field.random_element(rng)
    return x


def check_q_laws(
    report: AlternatorReport, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> bool:
    """Additivity and ``q(c x) = c^2 q(x)`` on random elements of ``S``."""
    rng = random.Random(seed)
    F = report.algebra.field
    for _ in range(samples):
        x, y = _random_in_S(report, rng), _random_in_S(report, rng)
        c = F.random_element(rng)
        if report.q(x + y) != report.q(x) + report.q(y):
            logger.error("q_sigma is not additive on %s, %s", x, y)
            return False
        if report.q(x * c) != c.square() * report.q(x):
            logger.error("q_sigma is not semilinear on %s, %s", c, x)
            return False
    return True


@dataclass(frozen=True)
class SampleResult:
    tried: int
    failures: int


def sample_q_multiplicativity(
    report: AlternatorReport, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> SampleResult:
    """Sample ``q(xy) = q(x) q(y)`` on ``S``; failures are logged, not raised."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        x, y = _random_in_S(report, rng), _random_in_S(report, rng)
        product = x * y
        if not report.S.contains(product.vector()):
            continue
        if report.q(product) != report.q(x) * report.q(y):
            failures += 1
    if failures:
        logger.warning(
            "q_sigma failed multiplicativity on %d of %d samples", failures, samples
        )
    return SampleResult(tried=samples, failures=failures)


def random_alt_membership_check(
    A: AlgebraWithInvolution,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    max_terms: int = 4,
    *,
    sparse: bool = False,
) -> bool:
    """:func:`alt_membership_check` on random tuples.

    Args:
        A: The algebra with involution.
        samples: Number of tuples to check.
        seed: Seed of the tuple generator.
        max_terms: Largest tuple length.
        sparse: Draw elements with :meth:`~AlgebraWithInvolution.sparse_element`,
            which keeps products cheap on large algebras over function fields.

    Returns:
        True if every tuple passed; the first failure is logged.
    """
    rng = random.Random(seed)
    _, alt = sym_alt(A)
    draw = A.sparse_element if sparse else A.random_element
    for _ in range(samples):
        xs = [draw(rng) for _ in range(rng.randint(1, max_terms))]
        if not alt_membership_check(A, xs, alt):
            logger.error("Alt membership failed for %s", [str(x) for x in xs])
            return False
    return True
