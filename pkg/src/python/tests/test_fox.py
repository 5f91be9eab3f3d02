import pytest

from errors import ParseError, PresentationError, RelatorViolationError, UnknownKnotError
from fields import RATIONALS
from fox import (
    GeneratorImages,
    GroupPresentation,
    Word,
    abelianization,
    boundary_column,
    check_relators,
    format_presentation,
    fox_derivative_eval,
    fox_jacobian,
    fox_row,
    knot_table,
    parse_presentation,
    parse_word,
    presentation_complex,
    random_word,
    two_bridge_presentation,
)
from linalg import ExactMatrix, random_invertible
from torsion import torsion

TREFOIL_TEXT = """
# comment line
name: trefoil_wirtinger
gens: x y z
rel: x y X Z
rel: y z Y X
b0: 1
x: 1
"""


def test_words_are_freely_reduced():
    w = parse_word("a b B A b", ("a", "b"))
    assert w == Word.generator(1)
    assert parse_word("aB", ("a", "b")).letters == ((0, 1), (1, -1))
    assert len(parse_word("1", ("a",))) == 0
    assert (w * w.inverse()) == Word()


def test_unknown_generator_in_word():
    with pytest.raises(ParseError):
        parse_word("a c", ("a", "b"))


def test_parse_and_format_presentation():
    P = parse_presentation(TREFOIL_TEXT)
    assert P.generators == ("x", "y", "z")
    assert P.deficiency == 1
    assert P.boundary_components == 1
    assert P.thurston_norm == 1
    assert parse_presentation(format_presentation(P)) == P


def test_presentation_parse_errors():
    with pytest.raises(ParseError):
        parse_presentation("rel: a b\n")
    with pytest.raises(ParseError):
        parse_presentation("gens: a b\nfoo: 1\n")
    with pytest.raises(ParseError):
        parse_presentation("gens: A\n")
    with pytest.raises(PresentationError):
        parse_presentation("gens: a a\n")


def test_link_metadata_is_zero_based():
    P = parse_presentation("gens: a b\nrel: a b A B\ncomponents: 1 2\nlk: 1 2 1\n")
    assert P.components == (0, 1)
    assert P.component_count == 2
    assert P.linking_number(1, 0) == 1


def test_two_bridge_relators(trefoil, figure8):
    assert trefoil.format_word(trefoil.relators[0]) == "a b a B A B"
    assert figure8.format_word(figure8.relators[0]) == "a b A B a B A b a B"
    hopf = knot_table("hopf")
    assert hopf.format_word(hopf.relators[0]) == "a b A B"
    assert hopf.linking_number(0, 1) == 1


def test_two_bridge_parameters_are_checked():
    with pytest.raises(PresentationError):
        two_bridge_presentation(4, 2)


def test_knot_table_aliases(trefoil):
    assert knot_table("3_1") is trefoil
    with pytest.raises(UnknownKnotError):
        knot_table("8_19")


def test_abelianization_of_knots(trefoil):
    phi = abelianization(trefoil)
    assert phi.rank == 1
    assert phi.images == ((1,), (1,))
    wirtinger = abelianization(parse_presentation(TREFOIL_TEXT))
    assert wirtinger.images == ((1,), (1,), (1,))


def test_abelianization_of_links():
    phi = abelianization(knot_table("whitehead"))
    assert phi.rank == 2
    assert phi.images == ((1, 0), (0, 1))


def test_abelianization_needs_free_part():
    P = GroupPresentation(generators=("a",), relators=(parse_word("a a", ("a",)),))
    with pytest.raises(PresentationError):
        abelianization(P)


def test_fox_derivatives_of_a_commutator():
    ring = RATIONALS
    a = ExactMatrix(ring, [[2]])
    b = ExactMatrix(ring, [[3]])
    rho = GeneratorImages.from_matrices(ring, [a, b])
    w = parse_word("a b A B", ("a", "b"))
    # d/da = 1 - a b a^-1 ; d/db = a - a b a^-1 b^-1
    assert fox_derivative_eval(w, 0, rho) == ExactMatrix(ring, [[1 - 3]])
    assert fox_derivative_eval(w, 1, rho) == ExactMatrix(ring, [[2 - 1]])


def test_fundamental_formula(f7, rng):
    # sum_j (dw/dx_j)(x_j - 1) = w - 1
    for _ in range(200):
        images = [random_invertible(f7, rng, 3) for _ in range(3)]
        rho = GeneratorImages.from_matrices(f7, images)
        w = random_word(rng, 3, rng.randint(0, 12))
        total = ExactMatrix.zeros(f7, 3, 3)
        for D, M in zip(fox_row(w, rho), images):
            total = total + D @ (M - rho.identity())
        assert total == rho.evaluate(w) - rho.identity()


def test_product_rule(f7, rng):
    images = [random_invertible(f7, rng, 2) for _ in range(2)]
    rho = GeneratorImages.from_matrices(f7, images)
    for _ in range(50):
        u = random_word(rng, 2, rng.randint(0, 6))
        v = random_word(rng, 2, rng.randint(0, 6))
        for j in range(2):
            lhs = fox_derivative_eval(u * v, j, rho)
            rhs = fox_derivative_eval(u, j, rho) + rho.evaluate(u) @ fox_derivative_eval(v, j, rho)
            assert lhs == rhs


def test_relators_are_checked(trefoil):
    ring = RATIONALS
    rho = GeneratorImages.from_matrices(ring, [ExactMatrix(ring, [[1, 1], [0, 1]]), ExactMatrix(ring, [[2, 0], [0, 1]])])
    with pytest.raises(RelatorViolationError):
        check_relators(trefoil, rho)


def test_presentation_complex_of_trefoil(trefoil, trefoil_rep, trefoil_phi):
    from reps import tensor_with_phi

    rho = tensor_with_phi(trefoil_rep, trefoil_phi)
    C = presentation_complex(trefoil, rho)
    assert C.dims == (2, 4, 2)
    assert fox_jacobian(trefoil, rho).shape == (2, 4)
    assert boundary_column(trefoil, rho).shape == (4, 2)
    assert C.is_acyclic()
    assert torsion(C)
