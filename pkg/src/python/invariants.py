"""
Twisted Alexander invariants and the checks run against them
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from errors import (
    ConventionError,
    HypothesisError,
    PresentationError,
    UnsupportedError,
    ZeroInvariantError,
)
from fox import (
    AbelianizationMap,
    GroupPresentation,
    boundary_column,
    fox_jacobian,
    presentation_complex,
)
from laurent import FractionField, LaurentPolynomial, RationalFunction, format_rational, is_monomial_unit
from linalg import ExactMatrix, det, presentation_order, smith_form
from reps import DetSubgroupData, Representation, dual_representation, tensor_with_phi
from torsion import invariant_torsion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Indeterminacy:
    """
    Units eps * f^d * a relating two representatives

    eps is +1 or (-1)^d, f a monomial and a an element of det(alpha(pi)).
    """

    dim: int
    det_data: DetSubgroupData

    @property
    def sign_allowed(self) -> bool:
        return self.dim % 2 == 1


def canonical_form(f: RationalFunction) -> RationalFunction:
    """Numerator and denominator each scaled to their unit-normalized form"""
    if not f.numerator:
        return f
    num, _ = f.numerator.unit_normalize()
    return RationalFunction(num, f.denominator)


def canonical_text(f: RationalFunction) -> str:
    return format_rational(canonical_form(f))


@dataclass(frozen=True)
class TwistedAlexInvariant:
    representative: RationalFunction
    indeterminacy: Indeterminacy
    column: Optional[int] = None
    columns_checked: Tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return not self.representative

    @property
    def rank(self) -> int:
        return self.representative.rank

    def canonical(self) -> RationalFunction:
        return canonical_form(self.representative)

    def degree(self) -> int:
        return self.representative.degree()

    def as_polynomial(self) -> Optional[LaurentPolynomial]:
        return self.representative.as_polynomial()


def unit_equiv(tau1: RationalFunction, tau2: RationalFunction, indeterminacy: Indeterminacy) -> bool:
    """True iff tau1 / tau2 is a unit the indeterminacy permits"""
    if not tau1 or not tau2:
        return not tau1 and not tau2
    parts = is_monomial_unit(tau1 / tau2)
    if parts is None:
        return False
    c, e = parts
    d = indeterminacy.dim
    if any(x % d for x in e):
        return False
    if indeterminacy.det_data.contains(c):
        return True
    return indeterminacy.sign_allowed and indeterminacy.det_data.contains(-c)


def associated(f: RationalFunction, g: RationalFunction) -> bool:
    """Equality up to an arbitrary monomial unit c * t^k"""
    if not f or not g:
        return not f and not g
    return is_monomial_unit(f / g) is not None


# Wada's invariant


def _minor_ratio(jacobian: ExactMatrix, column_block: ExactMatrix, n: int, d: int, j: int, target: FractionField) -> Optional[RationalFunction]:
    denominator = det(column_block)
    if not denominator:
        return None
    keep = [c for c in range(n * d) if not j * d <= c < (j + 1) * d]
    numerator = det(jacobian.select_columns(keep))
    if (d * (n - 1 - j)) % 2:
        numerator = -numerator
    return target.coerce(numerator) / target.coerce(denominator)


def wada_invariant(P: GroupPresentation, alpha: Representation, phi: AbelianizationMap, all_columns: bool = False) -> TwistedAlexInvariant:
    """
    Twisted Alexander invariant of a deficiency one presentation

    Computed twice: as det(A_j) / det((alpha x phi)(x_j) - I) for the first
    column j with nonzero denominator, and as the torsion of the twisted
    presentation complex. The two must agree up to the indeterminacy.

    Args:
        P: presentation with one relator fewer than generators
        alpha: representation of P
        phi: abelianization map of P
        all_columns: also compare every other valid column

    Returns:
        TwistedAlexInvariant carrying the minor-ratio representative
    """
    if P.deficiency != 1:
        raise PresentationError("Wada's invariant needs a deficiency one presentation", str(P.deficiency))
    rho = tensor_with_phi(alpha, phi)
    d, n = alpha.dim, P.n
    target = FractionField(alpha.field, phi.rank)
    indeterminacy = Indeterminacy(dim=d, det_data=alpha.det_data())
    engine = invariant_torsion(presentation_complex(P, rho)).value

    jacobian = fox_jacobian(P, rho)
    identity = rho.identity()
    ratios: List[Tuple[int, RationalFunction]] = []
    for j in range(n):
        ratio = _minor_ratio(jacobian, rho.images[j] - identity, n, d, j, target)
        if ratio is None:
            continue
        ratios.append((j, ratio))
        if not all_columns:
            break

    if not ratios:
        if engine:
            logger.warning(f"No column of {P.label()} has a nonzero denominator; using the torsion engine value")
        return TwistedAlexInvariant(representative=engine, indeterminacy=indeterminacy)

    column, representative = ratios[0]
    if not unit_equiv(representative, engine, indeterminacy):
        raise ConventionError(
            "minor ratio and presentation-complex torsion disagree",
            f"{format_rational(representative)} vs {format_rational(engine)}",
        )
    for j, other in ratios[1:]:
        if not unit_equiv(representative, other, indeterminacy):
            raise ConventionError(f"columns {column} and {j} give inequivalent invariants", alpha.label())
    logger.debug(f"Computed Wada invariant for {P.label()} (d={d}, column {column})")
    return TwistedAlexInvariant(
        representative=representative,
        indeterminacy=indeterminacy,
        column=column,
        columns_checked=tuple(j for j, _ in ratios),
    )


# Twisted Alexander orders


@dataclass(frozen=True)
class OrderValue:
    polynomial: LaurentPolynomial
    index: int

    @property
    def is_zero(self) -> bool:
        return not self.polynomial

    @property
    def is_unit(self) -> bool:
        return bool(self.polynomial) and self.polynomial.is_monomial


def alexander_order(P: GroupPresentation, alpha: Representation, phi: AbelianizationMap, i: int) -> OrderValue:
    """
    Order of H_i of the presentation complex with K[t^+-1]^d coefficients

    H_0 is presented by the boundary C_1 -> C_0. H_1 is presented by the
    image of C_2 written in a basis of the cycles, read off the Smith form
    of the first boundary.
    """
    if phi.rank != 1:
        raise UnsupportedError("twisted Alexander orders need a rank one abelianization", str(phi.rank))
    if i not in (0, 1):
        raise UnsupportedError("orders are computed for i = 0 and i = 1", str(i))
    rho = tensor_with_phi(alpha, phi)
    d0 = boundary_column(P, rho).transpose()
    if i == 0:
        order = presentation_order(d0)
    else:
        d1 = fox_jacobian(P, rho).transpose()
        snf = smith_form(d0)
        r = snf.rank
        coords = snf.right_inverse @ d1
        presentation = coords.select_rows(list(range(r, coords.rows)))
        order = presentation_order(presentation)
    logger.debug(f"Order {i} of {P.label()} twisted by {alpha.label()}: {order}")
    return OrderValue(polynomial=order, index=i)


def torsion_via_orders(P: GroupPresentation, alpha: Representation, phi: AbelianizationMap, closed: bool = False) -> RationalFunction:
    """
    Delta_1 / Delta_0, or Delta_1 / (Delta_0 * Delta_0 of the dual) for closed manifolds

    Orders are only defined up to units of K[t^+-1], so the result is
    compared with other representatives using associated().
    """
    delta1 = alexander_order(P, alpha, phi, 1).polynomial
    delta0 = alexander_order(P, alpha, phi, 0).polynomial
    denominator = delta0
    if closed:
        denominator = denominator * alexander_order(P, dual_representation(alpha), phi, 0).polynomial
    if not denominator:
        raise HypothesisError("zeroth order vanishes", P.label())
    return RationalFunction(delta1, denominator)


# Symmetry


@dataclass(frozen=True)
class SymmetryReport:
    holds: bool
    unit_coefficient: Optional[Any] = None
    unit_exponent: Optional[Tuple[int, ...]] = None
    charge: Optional[Tuple[int, ...]] = None
    charge_valid: Optional[bool] = None
    inconclusive: bool = False
    reason: str = ""


def _meridian_determinants(alpha: Representation, phi: AbelianizationMap) -> Optional[List[Any]]:
    """det(alpha(x)) for a generator mapping to each coordinate vector"""
    out: List[Any] = []
    for k in range(phi.rank):
        unit = tuple(1 if m == k else 0 for m in range(phi.rank))
        g = next((g for g in range(alpha.presentation.n) if phi.images[g] == unit), None)
        if g is None:
            return None
        out.append(det(alpha.images[g]))
    return out


def charge_congruence(P: GroupPresentation, charge: Tuple[int, ...]) -> bool:
    """n_i = 1 + sum over j != i of lk(L_i, L_j) mod 2"""
    for i, n_i in enumerate(charge):
        linking = sum(P.linking_number(i, j) for j in range(len(charge)) if j != i)
        if (n_i - 1 - linking) % 2:
            return False
    return True


def symmetry_check(inv: TwistedAlexInvariant, alpha: Representation, phi: AbelianizationMap, b0: int) -> SymmetryReport:
    """
    Test involute(tau) = (-1)^(d b0) det(alpha(g)) phi(g)^d tau

    The quotient involute(tau) / ((-1)^(d b0) tau) must be a monomial
    c t^e with d | e; with n = e / d, c must equal det(alpha(g)) for some g
    with phi(g) = t^n. For link presentations the charge n is also checked
    against the linking numbers.
    When no meridian pins down the coefficient (no generator maps to a
    coordinate vector, or H_1 has torsion) a mismatch is reported as
    inconclusive rather than as a failure.
    """
    if inv.is_zero:
        raise ZeroInvariantError("symmetry check of a zero invariant")
    tau = inv.representative
    d = alpha.dim
    sign = -1 if (d * b0) % 2 else 1
    u = tau.involute() / (tau * sign)
    parts = is_monomial_unit(u)
    if parts is None:
        return SymmetryReport(holds=False, reason="involute(tau)/tau is not a monomial unit")
    c, e = parts
    if any(x % d for x in e):
        return SymmetryReport(holds=False, unit_coefficient=c, unit_exponent=e, reason="exponent not divisible by d")
    charge = tuple(x // d for x in e)
    P = alpha.presentation
    charge_valid = charge_congruence(P, charge) if P.components is not None else None

    # det(alpha(g)) is not a function of phi(g) once H_1 has torsion
    deltas = None if phi.torsion else _meridian_determinants(alpha, phi)
    if deltas is not None:
        expected = alpha.field.one
        for delta, n_i in zip(deltas, charge):
            expected = expected * (delta ** n_i if n_i >= 0 else alpha.field.inv(delta) ** -n_i)
        holds = c == expected
        reason = "" if holds else f"coefficient {alpha.field.format_element(c)} differs from det(alpha(g)) = {alpha.field.format_element(expected)}"
        return SymmetryReport(
            holds=holds, unit_coefficient=c, unit_exponent=e, charge=charge, charge_valid=charge_valid, reason=reason
        )
    if inv.indeterminacy.det_data.contains(c):
        return SymmetryReport(holds=True, unit_coefficient=c, unit_exponent=e, charge=charge, charge_valid=charge_valid)
    return SymmetryReport(
        holds=False,
        unit_coefficient=c,
        unit_exponent=e,
        charge=charge,
        charge_valid=charge_valid,
        inconclusive=True,
        reason=(
            f"H_1 has torsion {list(phi.torsion)} and no generator determinant matches"
            if phi.torsion
            else "no generator maps to a coordinate vector and the bounded determinant search failed"
        ),
    )


# Degree checks


def _require_nonzero_rank_one(inv: TwistedAlexInvariant):
    if inv.is_zero:
        raise ZeroInvariantError("degree of a zero invariant")
    if inv.rank != 1:
        raise UnsupportedError("degree checks need a rank one invariant", str(inv.rank))


def degree_parity_check(inv: TwistedAlexInvariant, d: int, x_phi: int) -> bool:
    """deg(tau) = d x(phi) mod 2"""
    _require_nonzero_rank_one(inv)
    return (inv.degree() - d * x_phi) % 2 == 0


def degree_bound_check(inv: TwistedAlexInvariant, d: int, x_phi: int) -> bool:
    """deg(tau) <= d x(phi)"""
    _require_nonzero_rank_one(inv)
    return inv.degree() <= d * x_phi


# Palindromic form


@dataclass(frozen=True)
class PalindromicForm:
    """t^shift tau = sum_i a_i (t^-i + t^i)"""

    shift: int
    coefficients: Tuple[Any, ...]

    def polynomial(self, field) -> LaurentPolynomial:
        terms = {}
        for i, a in enumerate(self.coefficients):
            if i == 0:
                terms[(0,)] = a + a
            else:
                terms[(i,)] = a
                terms[(-i,)] = a
        return LaurentPolynomial(field, 1, terms)


def palindromic_normalize(inv: TwistedAlexInvariant) -> Optional[PalindromicForm]:
    """Shift a polynomial invariant to a symmetric one, if possible"""
    _require_nonzero_rank_one(inv)
    p = inv.as_polynomial()
    if p is None:
        logger.info("Invariant is not a Laurent polynomial; no palindromic form")
        return None
    field = p.field
    if field.characteristic == 2:
        raise UnsupportedError("palindromic form halves the constant term; characteristic 2 is excluded")
    lo, hi = p.min_exponent(), p.max_exponent()
    if (lo + hi) % 2:
        return None
    k = -(lo + hi) // 2
    q = p.shift((k,))
    if q.involute() != q:
        return None
    top = hi + k
    coefficients = [q.coefficient((0,)) / field.coerce(2)]
    coefficients += [q.coefficient((i,)) for i in range(1, top + 1)]
    return PalindromicForm(shift=k, coefficients=tuple(coefficients))
