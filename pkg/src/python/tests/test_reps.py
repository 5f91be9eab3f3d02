import itertools

import pytest
from sympy.polys.domains import QQ

from errors import InputError, ParseError, PresentationError, RelatorViolationError, UnsupportedError
from fields import RATIONALS, prime_field
from fox import knot_table
from linalg import ExactMatrix, det
from reps import (
    Representation,
    det_subgroup,
    dual_representation,
    enumerate_sl2_reps,
    find_conjugation_to_dual,
    format_representation,
    is_irreducible,
    load_representation,
    nontrivial_on_kernel,
    parse_representation,
    permutation_representation,
    shipped_representations,
    sl2_elements,
    sym_basis,
    sym_power,
    tensor_with_phi,
    check_tensor_determinants,
    trivial_representation,
)


def _abelian(P, field, matrix):
    M = ExactMatrix(field, matrix)
    return Representation(P, field, (M, M))


def test_shipped_representations_load(trefoil_rep, figure8_rep):
    assert shipped_representations() == ["figure8_sl2qi.rep", "trefoil_sl2q.rep"]
    assert trefoil_rep.dim == 2 and trefoil_rep.is_special_linear()
    assert figure8_rep.field.spec == "Qi:trivial"
    assert figure8_rep.is_special_linear()


def test_relator_violation_is_rejected(trefoil):
    a = ExactMatrix(RATIONALS, [[1, 1], [0, 1]])
    b = ExactMatrix(RATIONALS, [[2, 0], [0, 1]])
    with pytest.raises(RelatorViolationError):
        Representation(trefoil, RATIONALS, (a, b))


def test_wrong_number_of_images(trefoil):
    with pytest.raises(PresentationError):
        Representation(trefoil, RATIONALS, (ExactMatrix.identity(RATIONALS, 2),))


def test_trivial_representation(trefoil):
    alpha = trivial_representation(trefoil, dim=2)
    assert alpha.dim == 2
    assert alpha.label() == "trivial2"
    assert alpha.det_data().is_trivial


def test_det_subgroup_over_finite_field(f7):
    data = det_subgroup(f7, [f7(2)])
    assert data.subgroup == frozenset({f7(1), f7(2), f7(4)})
    assert data.contains(4)
    assert not data.contains(3)


def test_det_subgroup_over_rationals():
    data = det_subgroup(RATIONALS, [QQ(2)])
    assert data.contains(QQ(1, 4))
    assert not data.contains(3)
    assert data.subgroup is None


def test_dual_is_an_involution(trefoil_rep):
    twice = dual_representation(dual_representation(trefoil_rep))
    assert twice.images == trefoil_rep.images


def test_special_linear_reps_are_self_dual(trefoil_rep, figure8_rep):
    for alpha in (trefoil_rep, figure8_rep):
        search = find_conjugation_to_dual(alpha)
        assert search.found
        assert search.witness.verify(alpha, dual_representation(alpha))


def test_one_dimensional_rep_with_det_two_is_not_self_dual(trefoil):
    alpha = _abelian(trefoil, RATIONALS, [[2]])
    search = find_conjugation_to_dual(alpha)
    assert not search.found
    assert not search.probabilistic


def test_tensor_with_phi_determinants(trefoil_rep, trefoil_phi, t):
    rho = tensor_with_phi(trefoil_rep, trefoil_phi)
    assert rho.images[0][0, 1] == t
    assert rho.images[0] @ rho.inverses[0] == rho.identity()
    assert check_tensor_determinants(trefoil_rep, trefoil_phi)


def test_sym_basis_size():
    assert len(sym_basis(2, 3)) == 4
    assert len(sym_basis(3, 2)) == 6


def test_sym_square_of_diagonal(trefoil):
    alpha = _abelian(trefoil, RATIONALS, [[2, 0], [0, 3]])
    square = sym_power(alpha, 2)
    assert square.images[0] == ExactMatrix.diagonal(RATIONALS, [4, 6, 9])


def test_sym_powers_of_special_linear(trefoil_rep):
    for k in (2, 3):
        power = sym_power(trefoil_rep, k)
        assert power.dim == k + 1
        assert power.is_special_linear()
    assert sym_power(trefoil_rep, 1) is trefoil_rep
    with pytest.raises(ValueError):
        sym_power(trefoil_rep, 0)


def test_irreducibility(trefoil, trefoil_rep, figure8_rep):
    assert is_irreducible(trefoil_rep)
    assert is_irreducible(figure8_rep)
    assert is_irreducible(sym_power(trefoil_rep, 2))
    unipotent = _abelian(trefoil, RATIONALS, [[1, 1], [0, 1]])
    assert not is_irreducible(unipotent)
    with pytest.raises(UnsupportedError):
        is_irreducible(sym_power(trefoil_rep, 3))


def test_nontrivial_on_kernel(trefoil, trefoil_rep, trefoil_phi):
    search = nontrivial_on_kernel(trefoil_rep, trefoil_phi)
    assert search.nontrivial
    assert not any(trefoil_phi(search.witness))
    trivial = nontrivial_on_kernel(trivial_representation(trefoil), trefoil_phi)
    assert trivial.inconclusive and not trivial.nontrivial


def test_sl2_elements():
    assert len(sl2_elements(3)) == 24
    assert len(sl2_elements(5)) == 120


def _brute_force_count(P, p):
    field = prime_field(p)
    quads = sl2_elements(p)
    count = 0
    for A, B in itertools.product(quads, repeat=2):
        images = [ExactMatrix(field, [[A[0], A[1]], [A[2], A[3]]]), ExactMatrix(field, [[B[0], B[1]], [B[2], B[3]]])]
        try:
            Representation(P, field, tuple(images))
        except RelatorViolationError:
            continue
        count += 1
    return count


def test_enumeration_matches_brute_force(trefoil):
    found = enumerate_sl2_reps(trefoil, 3)
    assert len(found) == _brute_force_count(trefoil, 3)
    names = [e.representation.name for e in found]
    assert names[0] == "trefoil/sl2_f3/0"
    assert any(e.irreducible for e in found)
    for e in found:
        assert all(det(M) == prime_field(3).one for M in e.representation.images)


@pytest.mark.slow
def test_enumeration_in_parallel(figure8):
    serial = enumerate_sl2_reps(figure8, 5)
    parallel = enumerate_sl2_reps(figure8, 5, jobs=2)
    assert [e.representation.images for e in serial] == [e.representation.images for e in parallel]


def test_enumeration_rejects_bad_input():
    with pytest.raises(PresentationError):
        enumerate_sl2_reps(knot_table("unknot"), 3)
    with pytest.raises(UnsupportedError):
        enumerate_sl2_reps(knot_table("trefoil"), 11)


def test_permutation_representation(trefoil):
    a, b = [1, 0, 2], [0, 2, 1]
    full = permutation_representation(trefoil, [a, b])
    assert full.dim == 3
    assert not is_irreducible(full)
    reduced = permutation_representation(trefoil, [a, b], reduced=True, name="trefoil_s3")
    assert reduced.dim == 2
    assert is_irreducible(reduced)
    with pytest.raises(InputError):
        permutation_representation(trefoil, [[0, 0, 1], b])


def test_representation_file_round_trip(trefoil_rep):
    text = format_representation(trefoil_rep)
    assert "knot: trefoil" in text
    again = parse_representation(text)
    assert again.images == trefoil_rep.images
    assert again.name == "trefoil_sl2q"


@pytest.mark.parametrize(
    "text",
    [
        "knot: trefoil\na: 1\nb: 1\n",
        "field: Q\nknot: trefoil\na: 1\n",
        "field: Q\nknot: trefoil\na: 1\nb: 1\nc: 1\n",
        "field: Q\nknot: trefoil\na: 1, 2\nb: 1\n",
        "field: Q\nknot: trefoil\njunk\n",
    ],
)
def test_representation_parse_errors(text):
    with pytest.raises(ParseError):
        parse_representation(text)


def test_missing_representation_file():
    with pytest.raises(InputError):
        load_representation("no_such_rep")
