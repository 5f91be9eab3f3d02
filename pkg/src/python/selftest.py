"""
Acceptance suite run by the selftest command
"""

import logging
import random
import time
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, List, Optional, Tuple

from errors import TwistedTorsionError
from fields import RATIONALS, prime_field
from fox import (
    AbelianizationMap,
    GeneratorImages,
    GroupPresentation,
    abelianization,
    fox_row,
    knot_table,
    random_word,
)
from invariants import (
    alexander_order,
    associated,
    degree_parity_check,
    palindromic_normalize,
    symmetry_check,
    torsion_via_orders,
    wada_invariant,
)
from laurent import LaurentPolynomial, RationalFunction
from linalg import ExactMatrix, random_invertible
from models import CriterionResult, SelftestReport
from monitoring import record_check, set_corpus_size, timed
from reps import (
    Representation,
    enumerate_sl2_reps,
    find_conjugation_to_dual,
    is_irreducible,
    load_representation,
    nontrivial_on_kernel,
    sym_power,
    trivial_representation,
)
from torsion import (
    base_change,
    check_duality_lemma,
    random_based_complex,
    random_short_exact_sequence,
    ses_torsion_check,
    torsion,
    torus_complex,
)

logger = logging.getLogger(__name__)

CORPUS_PRIME = 5
CORPUS_KNOTS = ("trefoil", "figure8")


@dataclass(frozen=True)
class CorpusItem:
    presentation: GroupPresentation
    phi: AbelianizationMap
    representation: Representation
    irreducible: bool


@dataclass
class Outcome:
    passed: bool
    detail: str = ""
    skipped: int = 0
    skip: bool = False


@dataclass
class SelftestContext:
    seed: int = 20240601
    jobs: int = 1
    _corpus: Optional[List[CorpusItem]] = dataclass_field(default=None, repr=False)

    def rng(self, offset: int) -> random.Random:
        return random.Random(self.seed + offset)

    def corpus(self) -> List[CorpusItem]:
        """All SL(2, F_5) representations of trefoil and figure8, plus the shipped trefoil representation"""
        if self._corpus is None:
            items = []
            for name in CORPUS_KNOTS:
                P = knot_table(name)
                phi = abelianization(P)
                for e in enumerate_sl2_reps(P, CORPUS_PRIME, jobs=self.jobs):
                    items.append(CorpusItem(P, phi, e.representation, e.irreducible))
            P = knot_table("trefoil")
            alpha = load_representation("trefoil_sl2q", P)
            items.append(CorpusItem(P, abelianization(P), alpha, is_irreducible(alpha)))
            set_corpus_size(len(items))
            self._corpus = items
        return self._corpus


# Criteria


def torus_fixture(ctx: SelftestContext) -> Outcome:
    value = torsion(torus_complex()).value
    return Outcome(value == -1 and str(value) == "-1", f"torsion = {value}")


def duality_identity(ctx: SelftestContext) -> Outcome:
    rng = ctx.rng(2)
    failures = 0
    for field in (prime_field(101), RATIONALS):
        for k in range(100):
            C = random_based_complex(field, rng, max_dim=6, acyclic=k % 2 == 0)
            if not check_duality_lemma(C):
                failures += 1
    return Outcome(failures == 0, f"{failures} of 200 complexes fail")


def ses_multiplicativity(ctx: SelftestContext) -> Outcome:
    rng = ctx.rng(3)
    field = prime_field(7)
    failures = sum(1 for _ in range(100) if not ses_torsion_check(*random_short_exact_sequence(field, rng)))
    return Outcome(failures == 0, f"{failures} of 100 sequences fail")


def base_change_laws(ctx: SelftestContext) -> Outcome:
    rng = ctx.rng(4)
    field = prime_field(101)
    failures = 0
    for _ in range(100):
        C = random_based_complex(field, rng, max_dim=6, acyclic=True)
        tau = torsion(C).value
        degrees = [i for i, d in enumerate(C.dims) if d >= 1]
        if not degrees:
            continue
        i = rng.choice(degrees)
        n = C.dims[i]
        f = field.random_element(rng, nonzero=True)
        scale = ExactMatrix.diagonal(field, [f] + [field.one] * (n - 1))
        expected = tau * f if i % 2 == 0 else tau / f
        if torsion(base_change(C, i, scale)).value != expected:
            failures += 1
        if n >= 2:
            perm = list(range(n))
            perm[0], perm[1] = 1, 0
            swap = ExactMatrix(field, [[field.one if perm[c] == r else field.zero for c in range(n)] for r in range(n)])
            if torsion(base_change(C, i, swap)).value != -tau:
                failures += 1
    return Outcome(failures == 0, f"{failures} base changes violate the laws")


def _t(field=RATIONALS) -> LaurentPolynomial:
    return LaurentPolynomial.variable(field)


def classical_values(ctx: SelftestContext) -> Outcome:
    t = _t()
    problems = []
    trefoil = knot_table("trefoil")
    phi = abelianization(trefoil)
    inv = wada_invariant(trefoil, trivial_representation(trefoil), phi)
    if not associated(inv.representative, RationalFunction(t * t - t + 1, t - 1)):
        problems.append(f"trefoil invariant {inv.representative}")
    delta = alexander_order(trefoil, trivial_representation(trefoil), phi, 1).polynomial
    if not associated(RationalFunction(delta), RationalFunction(t * t - t + 1)):
        problems.append(f"trefoil order {delta}")
    figure8 = knot_table("figure8")
    delta = alexander_order(figure8, trivial_representation(figure8), abelianization(figure8), 1).polynomial
    if not associated(RationalFunction(delta), RationalFunction(t * t - 3 * t + 1)):
        problems.append(f"figure8 order {delta}")
    unknot = knot_table("unknot")
    inv = wada_invariant(unknot, trivial_representation(unknot), abelianization(unknot))
    if not associated(inv.representative, RationalFunction(LaurentPolynomial.one(RATIONALS), t - 1)):
        problems.append(f"unknot invariant {inv.representative}")
    return Outcome(not problems, "; ".join(problems))


def wada_orders_triangle(ctx: SelftestContext) -> Outcome:
    failures = []
    corpus = ctx.corpus()
    for item in corpus:
        inv = wada_invariant(item.presentation, item.representation, item.phi)
        ratio = torsion_via_orders(item.presentation, item.representation, item.phi)
        if not associated(inv.representative, ratio):
            failures.append(item.representation.label())
    return Outcome(not failures, f"{len(corpus)} representations, {len(failures)} mismatches {failures[:3]}")


def symmetry_theorem(ctx: SelftestContext) -> Outcome:
    failures, checked, skipped = [], 0, 0
    for item in ctx.corpus():
        if not item.irreducible or not find_conjugation_to_dual(item.representation).found:
            continue
        inv = wada_invariant(item.presentation, item.representation, item.phi)
        if inv.is_zero:
            skipped += 1
            continue
        report = symmetry_check(inv, item.representation, item.phi, item.presentation.boundary_components or 1)
        checked += 1
        record_check("symmetry", "inconclusive" if report.inconclusive else ("pass" if report.holds else "fail"))
        if not report.holds or report.inconclusive:
            failures.append(item.representation.label())
    return Outcome(not failures, f"{checked} checked, {len(failures)} failures", skipped=skipped, skip=checked == 0)


def degree_parity(ctx: SelftestContext) -> Outcome:
    failures, checked, skipped = [], 0, 0
    items = [i for i in ctx.corpus() if i.representation.dim == 2]
    P = knot_table("5_2")
    phi = abelianization(P)
    items += [CorpusItem(P, phi, e.representation, e.irreducible) for e in enumerate_sl2_reps(P, CORPUS_PRIME, jobs=ctx.jobs)]
    for item in items:
        inv = wada_invariant(item.presentation, item.representation, item.phi)
        if inv.is_zero:
            skipped += 1
            continue
        checked += 1
        if not degree_parity_check(inv, 2, item.presentation.thurston_norm):
            failures.append(item.representation.label())
    trefoil = knot_table("trefoil")
    inv = wada_invariant(trefoil, trivial_representation(trefoil), abelianization(trefoil))
    if inv.degree() % 2 != 1:
        failures.append("trivial trefoil")
    return Outcome(not failures, f"{checked + 1} invariants, {len(failures)} failures", skipped=skipped)


def polynomiality(ctx: SelftestContext) -> Outcome:
    failures, checked, skipped = [], 0, 0
    for item in ctx.corpus():
        if not item.irreducible:
            continue
        kernel = nontrivial_on_kernel(item.representation, item.phi)
        if kernel.inconclusive:
            skipped += 1
            continue
        checked += 1
        delta0 = alexander_order(item.presentation, item.representation, item.phi, 0)
        inv = wada_invariant(item.presentation, item.representation, item.phi)
        if not delta0.is_unit or inv.as_polynomial() is None:
            failures.append(item.representation.label())
    return Outcome(not failures, f"{checked} checked, {len(failures)} failures", skipped=skipped, skip=checked == 0)


def palindrome(ctx: SelftestContext) -> Outcome:
    problems = []
    for knot, rep in (("trefoil", "trefoil_sl2q"), ("figure8", "figure8_sl2qi")):
        P = knot_table(knot)
        inv = wada_invariant(P, load_representation(rep, P), abelianization(P))
        if palindromic_normalize(inv) is None:
            problems.append(knot)
    return Outcome(not problems, f"no symmetric shift for {problems}" if problems else "")


def symmetric_powers(ctx: SelftestContext) -> Outcome:
    P = knot_table("trefoil")
    alpha = load_representation("trefoil_sl2q", P)
    problems = [f"sym^{k}" for k in range(1, 6) if sym_power(alpha, k).dim != k + 1]
    sym2 = sym_power(alpha, 2)
    if not find_conjugation_to_dual(sym2).found:
        problems.append("sym^2 has no duality witness")
    inv = wada_invariant(P, sym2, abelianization(P))
    if inv.is_zero or not degree_parity_check(inv, 3, P.thurston_norm):
        problems.append("sym^2 invariant has the wrong degree parity")
    return Outcome(not problems, "; ".join(problems))


def fox_identities(ctx: SelftestContext) -> Outcome:
    rng = ctx.rng(12)
    field = prime_field(7)
    n, d = 3, 3
    rho = GeneratorImages.from_matrices(field, [random_invertible(field, rng, d) for _ in range(n)])
    identity = rho.identity()
    failures = 0
    for _ in range(200):
        u = random_word(rng, n, rng.randint(0, 8))
        v = random_word(rng, n, rng.randint(0, 8))
        row = fox_row(u, rho)
        total = ExactMatrix.zeros(field, d, d)
        for j in range(n):
            total = total + row[j] @ (rho.images[j] - identity)
        if total != rho.evaluate(u) - identity:
            failures += 1
        uv = fox_row(u * v, rho)
        rv = fox_row(v, rho)
        ru = rho.evaluate(u)
        if any(uv[j] != row[j] + ru @ rv[j] for j in range(n)):
            failures += 1
    return Outcome(failures == 0, f"{failures} identity failures")


CRITERIA: List[Tuple[int, str, Callable[[SelftestContext], Outcome]]] = [
    (1, "torus fixture", torus_fixture),
    (2, "duality identity", duality_identity),
    (3, "short exact sequence multiplicativity", ses_multiplicativity),
    (4, "base change laws", base_change_laws),
    (5, "classical values", classical_values),
    (6, "wada, torsion and orders agree", wada_orders_triangle),
    (7, "symmetry", symmetry_theorem),
    (8, "degree parity", degree_parity),
    (9, "polynomiality", polynomiality),
    (10, "palindromic form", palindrome),
    (11, "symmetric powers", symmetric_powers),
    (12, "fox calculus identities", fox_identities),
]


def run_selftest(jobs: int = 1, only: Optional[List[int]] = None, seed: int = 20240601) -> SelftestReport:
    """Run the acceptance criteria and collect pass/fail/skip per criterion"""
    ctx = SelftestContext(seed=seed, jobs=jobs)
    results: List[CriterionResult] = []
    for number, name, check in CRITERIA:
        if only and number not in only:
            continue
        start = time.time()
        try:
            with timed(f"selftest_{number}"):
                outcome = check(ctx)
        except TwistedTorsionError as e:
            logger.error(f"Criterion {number} ({name}) raised: {e}")
            outcome = Outcome(False, f"{type(e).__name__}: {e}")
        status = "skip" if outcome.skip else ("pass" if outcome.passed else "fail")
        record_check(f"criterion_{number}", status)
        logger.info(f"[selftest] {number:2d} {name}: {status.upper()} ({time.time() - start:.1f}s) {outcome.detail}")
        results.append(
            CriterionResult(number=number, name=name, status=status, detail=outcome.detail, skipped_cases=outcome.skipped)
        )
    failed = sum(1 for r in results if r.status == "fail")
    passed = sum(1 for r in results if r.status == "pass")
    skipped = sum(1 for r in results if r.status == "skip")
    return SelftestReport(success=failed == 0, passed=passed, failed=failed, skipped=skipped, criteria=results)
