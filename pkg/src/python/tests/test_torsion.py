import pytest

from errors import ChainComplexError, MissingHomologyBasisError, ShapeError, SingularMatrixError
from fields import GAUSSIAN_RATIONALS, RATIONALS, prime_field
from linalg import ExactMatrix, det, random_invertible
from torsion import (
    BasedChainComplex,
    base_change,
    check_duality_lemma,
    complex_from_json,
    complex_to_json,
    dual_complex,
    homology,
    invariant_torsion,
    random_based_complex,
    random_short_exact_sequence,
    ses_terms,
    ses_torsion_check,
    sign_data,
    sign_refined_torsion,
    torsion,
    torus_complex,
)


def test_torus_torsion_is_minus_one():
    C = torus_complex()
    value = torsion(C)
    assert value.acyclic
    assert value.value == C.ring.coerce(-1)
    assert str(value.value) == "-1"


def test_torus_sign_data():
    data = sign_data(torus_complex())
    assert data.alpha == (1, 1, 0)
    assert data.beta == (0, 0, 0)
    assert data.eta == 0
    assert sign_refined_torsion(torus_complex()).value == torsion(torus_complex()).value


def test_boundaries_must_compose_to_zero():
    d0 = ExactMatrix(RATIONALS, [[1]])
    d1 = ExactMatrix(RATIONALS, [[1]])
    with pytest.raises(ChainComplexError):
        BasedChainComplex(RATIONALS, (1, 1, 1), (d0, d1))


def test_boundary_shapes_are_checked():
    with pytest.raises(ShapeError):
        BasedChainComplex(RATIONALS, (1, 2), (ExactMatrix(RATIONALS, [[1]]),))


def test_homology_of_zero_map():
    C = BasedChainComplex(RATIONALS, (2, 1), (ExactMatrix.zeros(RATIONALS, 2, 1),))
    assert [g.dimension for g in homology(C)] == [2, 1]
    assert not C.is_acyclic()


def test_missing_homology_basis():
    C = BasedChainComplex(RATIONALS, (1, 1), (ExactMatrix.zeros(RATIONALS, 1, 1),))
    with pytest.raises(MissingHomologyBasisError):
        torsion(C)
    assert not invariant_torsion(C)


def test_torsion_ignores_choice_of_lifts(f7, rng):
    for _ in range(10):
        C = random_based_complex(f7, rng)
        assert torsion(C, rng).value == torsion(C).value


def test_torsion_is_never_zero(f101, rng):
    for _ in range(10):
        assert torsion(random_based_complex(f101, rng))


@pytest.mark.parametrize("field", [prime_field(101), RATIONALS, GAUSSIAN_RATIONALS], ids=["Fp:101", "Q", "Qi"])
def test_duality_identity(field, rng):
    for _ in range(15):
        C = random_based_complex(field, rng, max_dim=5)
        assert check_duality_lemma(C)


def test_dual_complex_shape(f7, rng):
    C = random_based_complex(f7, rng, length=3, acyclic=True)
    D = dual_complex(C)
    assert D.dims == tuple(reversed(C.dims))
    assert D.homology_bases is None


def test_short_exact_sequences_are_multiplicative(f7, rng):
    for _ in range(15):
        sub, total, quotient = random_short_exact_sequence(f7, rng)
        assert ses_torsion_check(sub, total, quotient)


def test_ses_terms_expose_the_sign_exponents(f7, rng):
    sub, total, quotient = random_short_exact_sequence(f7, rng, max_dim=4)
    terms = ses_terms(sub, total, quotient)
    assert terms.holds
    assert terms.nu >= 0 and terms.mu >= 0


def test_base_change_scales_torsion(f7, rng):
    for _ in range(10):
        C = random_based_complex(f7, rng)
        degree = rng.randrange(len(C.dims))
        n = C.dims[degree]
        if n == 0:
            continue
        P = random_invertible(f7, rng, n)
        changed = torsion(base_change(C, degree, P)).value
        factor = det(P) if degree % 2 == 0 else f7.inv(det(P))
        assert changed == torsion(C).value * factor


def test_base_change_swap_negates(f7, rng):
    C = random_based_complex(f7, rng, length=2, acyclic=True, max_dim=6)
    degree = next((i for i, d in enumerate(C.dims) if d >= 2), None)
    if degree is None:
        pytest.skip("no degree of dimension two")
    n = C.dims[degree]
    swap = ExactMatrix.identity(f7, n).select_columns([1, 0] + list(range(2, n)))
    assert torsion(base_change(C, degree, swap)).value == -torsion(C).value


def test_base_change_rejects_singular(f7, rng):
    C = random_based_complex(f7, rng, length=1, acyclic=True)
    n = C.dims[0]
    if n == 0:
        pytest.skip("empty degree")
    with pytest.raises(SingularMatrixError):
        base_change(C, 0, ExactMatrix.zeros(f7, n, n))


def test_json_round_trip(f7, rng):
    C = random_based_complex(f7, rng)
    D = complex_from_json(complex_to_json(C))
    assert D.dims == C.dims
    assert D.boundaries == C.boundaries
    assert torsion(D).value == torsion(C).value


def test_json_round_trip_over_fraction_field():
    C = torus_complex()
    D = complex_from_json(complex_to_json(C))
    assert D.boundaries == C.boundaries
    assert torsion(D).value == torsion(C).value


@pytest.mark.parametrize("field", [prime_field(7), RATIONALS, GAUSSIAN_RATIONALS], ids=["Fp:7", "Q", "Qi"])
def test_json_reserialization_is_byte_identical(field, rng):
    text = complex_to_json(random_based_complex(field, rng))
    assert complex_to_json(complex_from_json(text)) == text
    torus = complex_to_json(torus_complex())
    assert complex_to_json(complex_from_json(torus)) == torus


def test_malformed_json():
    from errors import ParseError

    with pytest.raises(ParseError):
        complex_from_json('{"field": "Q"}')
