import pytest
from sympy.polys.domains import QQ

from errors import PresentationError, UnsupportedError, ZeroInvariantError
from fields import RATIONALS, prime_field
from fox import GroupPresentation, abelianization, knot_table, parse_presentation, parse_word
from invariants import (
    Indeterminacy,
    PalindromicForm,
    TwistedAlexInvariant,
    alexander_order,
    associated,
    canonical_text,
    charge_congruence,
    degree_bound_check,
    degree_parity_check,
    palindromic_normalize,
    symmetry_check,
    torsion_via_orders,
    unit_equiv,
    wada_invariant,
)
from laurent import LaurentPolynomial, RationalFunction
from linalg import ExactMatrix
from reps import Representation, det_subgroup, trivial_representation


def _invariant(P, alpha=None, **kwargs):
    alpha = alpha or trivial_representation(P)
    return wada_invariant(P, alpha, abelianization(P), **kwargs)


def _indeterminacy(dim, dets=()):
    return Indeterminacy(dim=dim, det_data=det_subgroup(RATIONALS, dets))


def test_trefoil_with_trivial_representation(trefoil, t):
    inv = _invariant(trefoil)
    assert inv.representative == RationalFunction(1 - t + t * t, t - 1)
    assert canonical_text(inv.representative) == "(1 - t + t^2)/(1 - t)"
    assert inv.column == 0
    assert inv.degree() == 1
    assert inv.as_polynomial() is None


def test_figure8_with_trivial_representation(figure8, t):
    inv = _invariant(figure8)
    assert associated(inv.representative, RationalFunction(1 - 3 * t + t * t, t - 1))


def test_unknot(t):
    inv = _invariant(knot_table("unknot"))
    assert inv.representative == RationalFunction(t ** 0, t - 1)


def test_all_columns_agree(trefoil, trefoil_rep):
    inv = _invariant(trefoil, trefoil_rep, all_columns=True)
    assert inv.columns_checked == (0, 1)


def test_trefoil_parabolic_representation(trefoil, trefoil_rep, t):
    inv = _invariant(trefoil, trefoil_rep)
    assert unit_equiv(inv.representative, RationalFunction(1 + t * t), inv.indeterminacy)
    assert inv.as_polynomial() is not None
    assert inv.degree() == 2


def test_figure8_gaussian_representation_is_polynomial(figure8, figure8_rep):
    inv = _invariant(figure8, figure8_rep)
    assert not inv.is_zero
    assert degree_parity_check(inv, 2, 1)
    assert degree_bound_check(inv, 2, 1)


def test_presentation_must_have_deficiency_one():
    names = ("a", "b")
    P = GroupPresentation(generators=names, relators=(parse_word("a b A B", names), parse_word("a B", names)))
    with pytest.raises(PresentationError):
        wada_invariant(P, trivial_representation(P), abelianization(knot_table("hopf")))


@pytest.mark.parametrize("dim, factor, expected", [(2, 2, True), (2, 1, False), (1, 1, True)])
def test_unit_equiv_monomials(t, dim, factor, expected):
    tau = RationalFunction(1 + t * t, t - 1)
    assert unit_equiv(tau, tau * RationalFunction(t ** factor), _indeterminacy(dim)) is expected


def test_unit_equiv_signs_and_determinants(t):
    tau = RationalFunction(1 + t)
    minus = tau * RationalFunction(-(t ** 0))
    assert unit_equiv(tau, minus, _indeterminacy(1))
    assert not unit_equiv(tau, minus, _indeterminacy(2))
    assert unit_equiv(tau, minus, _indeterminacy(2, [QQ(-1)]))
    doubled = tau * RationalFunction(2 * t ** 0)
    assert unit_equiv(tau, doubled, _indeterminacy(2, [QQ(2)]))
    assert not unit_equiv(tau, doubled, _indeterminacy(2))
    zero = tau - tau
    assert unit_equiv(zero, zero, _indeterminacy(2))
    assert not unit_equiv(tau, zero, _indeterminacy(2))


def test_associated_ignores_constants(t):
    tau = RationalFunction(1 + t)
    assert associated(tau, tau * RationalFunction(-3 * t ** 5))
    assert not associated(tau, RationalFunction(1 + t * t))


def test_orders_of_trefoil(trefoil, t):
    alpha = trivial_representation(trefoil)
    phi = abelianization(trefoil)
    delta0 = alexander_order(trefoil, alpha, phi, 0)
    delta1 = alexander_order(trefoil, alpha, phi, 1)
    assert delta0.polynomial == 1 - t
    assert delta1.polynomial == 1 - t + t * t
    assert not delta1.is_unit
    assert associated(_invariant(trefoil).representative, torsion_via_orders(trefoil, alpha, phi))


def test_orders_match_invariant_for_parabolic_representation(trefoil, trefoil_rep, trefoil_phi):
    inv = _invariant(trefoil, trefoil_rep)
    assert associated(inv.representative, torsion_via_orders(trefoil, trefoil_rep, trefoil_phi))


def test_orders_need_rank_one():
    hopf = knot_table("hopf")
    with pytest.raises(UnsupportedError):
        alexander_order(hopf, trivial_representation(hopf), abelianization(hopf), 0)


def test_symmetry_of_trefoil(trefoil, trefoil_rep):
    phi = abelianization(trefoil)
    for alpha in (trivial_representation(trefoil), trefoil_rep):
        report = symmetry_check(_invariant(trefoil, alpha), alpha, phi, 1)
        assert report.holds
        assert report.charge == (-1,)


def test_symmetry_of_hopf_link():
    hopf = knot_table("hopf")
    alpha = trivial_representation(hopf)
    report = symmetry_check(_invariant(hopf, alpha), alpha, abelianization(hopf), 2)
    assert report.holds
    assert report.charge_valid


def test_symmetry_with_torsion_in_first_homology_is_inconclusive():
    # a b a^-1 = b^-2, so H_1 = Z + Z/3 and b may carry a cube root of unity
    P = parse_presentation("gens: a b\nrel: a b A b b\n")
    phi = abelianization(P)
    assert phi.images == ((1,), (0,))
    assert phi.torsion == (3,)
    f7 = prime_field(7)
    alpha = Representation(P, f7, (ExactMatrix(f7, [[1]]), ExactMatrix(f7, [[2]])))
    inv = wada_invariant(P, alpha, phi)
    assert inv.representative.as_polynomial().is_constant
    report = symmetry_check(inv, alpha, phi, 1)
    assert report.unit_coefficient == f7(-1)
    assert report.inconclusive
    assert "torsion" in report.reason


def test_charge_congruence():
    hopf = knot_table("hopf")
    assert charge_congruence(hopf, (0, 0))
    assert not charge_congruence(hopf, (1, 0))


def test_symmetry_of_zero_invariant():
    zero = RationalFunction(LaurentPolynomial.zero(RATIONALS, 1))
    inv = TwistedAlexInvariant(zero, _indeterminacy(1))
    trefoil = knot_table("trefoil")
    with pytest.raises(ZeroInvariantError):
        symmetry_check(inv, trivial_representation(trefoil), abelianization(trefoil), 1)
    with pytest.raises(ZeroInvariantError):
        degree_parity_check(inv, 1, 1)


def test_degree_parity_and_bound(trefoil, trefoil_rep):
    for name, x_phi in (("trefoil", 1), ("figure8", 1), ("5_1", 3), ("5_2", 1), ("6_1", 1)):
        inv = _invariant(knot_table(name))
        assert degree_parity_check(inv, 1, x_phi)
        assert degree_bound_check(inv, 1, x_phi)
    inv = _invariant(trefoil, trefoil_rep)
    assert degree_parity_check(inv, 2, 1)
    assert degree_parity_check(inv, 2, 2)
    assert not degree_bound_check(inv, 2, 0)


def test_degree_checks_need_rank_one():
    hopf = knot_table("hopf")
    with pytest.raises(UnsupportedError):
        degree_parity_check(_invariant(hopf), 1, 1)


def _polynomial_invariant(p):
    return TwistedAlexInvariant(RationalFunction(p), _indeterminacy(1))


def test_palindrome_of_symmetric_polynomial(t):
    form = palindromic_normalize(_polynomial_invariant(t ** -1 + 3 + t))
    assert form.shift == 0
    assert form.coefficients == (QQ(3, 2), QQ(1))
    assert form.polynomial(RATIONALS) == t ** -1 + 3 + t


def test_palindrome_after_shift(t):
    form = palindromic_normalize(_polynomial_invariant(t * t + 1))
    assert form.shift == -1
    assert form.coefficients == (QQ(0), QQ(1))


def test_palindrome_absent(t):
    assert palindromic_normalize(_polynomial_invariant(1 + 2 * t)) is None
    assert palindromic_normalize(_polynomial_invariant(1 + t + 2 * t * t)) is None
    assert palindromic_normalize(TwistedAlexInvariant(RationalFunction(t ** 0, t - 1), _indeterminacy(1))) is None


def test_palindrome_of_parabolic_trefoil(trefoil, trefoil_rep):
    form = palindromic_normalize(_invariant(trefoil, trefoil_rep))
    assert form is not None
    assert form.shift == -1
    assert form.coefficients == (QQ(0), QQ(1))


def test_palindrome_excludes_characteristic_two():
    f2 = prime_field(2)
    s = LaurentPolynomial.variable(f2)
    with pytest.raises(UnsupportedError):
        palindromic_normalize(_polynomial_invariant(s + 1))


def test_palindromic_form_polynomial():
    form = PalindromicForm(shift=0, coefficients=(QQ(1, 2), QQ(2)))
    t = LaurentPolynomial.variable(RATIONALS)
    assert form.polynomial(RATIONALS) == 2 * t ** -1 + 1 + 2 * t
