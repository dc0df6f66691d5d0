"""Cartan matrix validation, the type trichotomy, and sign witnesses."""

from fractions import Fraction

import numpy as np
import pytest

from vinberg.cartan import (
    MIXED,
    NEGATIVE,
    POSITIVE,
    ZERO,
    CartanValidationError,
    classify_type,
    irreducible_components,
    restrict,
    validate_cartan,
    witness_vector,
)
from vinberg.scalars import INFINITY, InputError


def test_validation_rejects_each_axiom_breach():
    with pytest.raises(CartanValidationError) as err:
        validate_cartan([[1]])
    assert "diagonal" in str(err.value)
    with pytest.raises(CartanValidationError) as err:
        validate_cartan([[2, 1], [1, 2]])
    assert "nonpositive" in str(err.value)
    with pytest.raises(CartanValidationError) as err:
        validate_cartan([[2, 0], [-1, 2]])
    assert "zero-symmetry" in str(err.value)
    with pytest.raises(CartanValidationError) as err:
        validate_cartan([[2, -1], [Fraction(-5, 2), 2]])
    assert "product" in str(err.value)
    with pytest.raises(InputError):
        validate_cartan([[2, -1], [-1, 2], [0, 0]])


def test_mode_inference_and_exact_demand():
    A = validate_cartan([[2, -1], [-1, 2]])
    assert A.mode == "exact"
    A = validate_cartan([[2, -1.5], [-2.0, 2]])  # product 3 = 4cos^2(pi/6)
    assert A.mode == "approx"
    assert A.orders[0][1] == 6
    with pytest.raises(InputError):
        validate_cartan([[2, -1.5], [-2.0, 2]], mode="exact")


def test_orders_from_products():
    A = validate_cartan(
        [[2, -1, 0, -2], [-1, 2, -1, 0], [0, -3, 2, 0], [-2, 0, 0, 2]]
    )
    assert A.orders[0][1] == 3  # product 1
    assert A.orders[1][2] == 6  # product 3
    assert A.orders[0][2] == 2  # product 0
    assert A.orders[0][3] == INFINITY  # product 4
    B = validate_cartan([[2, -1], [-2, 2]])
    assert B.orders[0][1] == 4  # product 2
    C = validate_cartan([[2, -9], [-1, 2]])
    assert C.orders[0][1] == INFINITY  # product 9 > 4


def test_classify_type_hand_cases():
    assert classify_type(validate_cartan([[2, -1], [-1, 2]])).overall == POSITIVE
    assert classify_type(validate_cartan([[2, -2], [-2, 2]])).overall == ZERO
    tag = classify_type(
        validate_cartan([[2, -2, -2], [-2, 2, -2], [-2, -2, 2]])
    )
    assert tag.overall == NEGATIVE
    # Perron eigenvalue of the free-product triangle: 2 - rho = 2 - 4 = -2.
    assert abs(tag.blocks[0].lam + 2.0) <= 1e-9


def test_classify_type_blocks_and_mixed():
    rows = [
        [2, -1, 0, 0],
        [-1, 2, 0, 0],
        [0, 0, 2, -2],
        [0, 0, -2, 2],
    ]
    tag = classify_type(validate_cartan(rows))
    assert tag.overall == MIXED
    by_indices = {b.indices: b.tag for b in tag.blocks}
    assert by_indices == {(0, 1): POSITIVE, (2, 3): ZERO}


def test_approx_near_zero_warns():
    delta = 1e-12
    tag = classify_type(validate_cartan([[2.0, -2.0 + delta], [-2.0, 2.0]]))
    assert tag.overall == ZERO
    assert any("within eps" in w for w in tag.warnings)


def test_irreducible_components_ignore_order():
    A = validate_cartan([[2, 0, -1], [0, 2, 0], [-1, 0, 2]])
    assert irreducible_components(A) == [(0, 2), (1,)]


def test_restrict_keeps_entries_and_labels():
    A = validate_cartan(
        [[2, -2, -2], [-2, 2, -2], [-2, -2, 2]], labels=["a", "b", "c"]
    )
    B = restrict(A, (0, 2))
    assert B.entries == ((Fraction(2), Fraction(-2)), (Fraction(-2), Fraction(2)))
    assert B.labels == ("a", "c")


def _check_witness(rows, expected_sign):
    A = validate_cartan(rows)
    w = witness_vector(A)
    u = w.x
    assert all(x > 0 for x in u)
    prod = [sum(row[j] * u[j] for j in range(len(u))) for row in A.entries]
    assert tuple(prod) == w.image
    for x in prod:
        if expected_sign == 0:
            assert x == 0
        elif expected_sign > 0:
            assert x > 0
        else:
            assert x < 0


def test_witness_vectors_certify_each_type():
    _check_witness([[2, -1], [-1, 2]], +1)
    _check_witness([[2, -2], [-2, 2]], 0)
    _check_witness([[2, -2, -2], [-2, 2, -2], [-2, -2, 2]], -1)
    # Asymmetric entries exercise the non-symmetrizable path.
    _check_witness([[2, -1, -1], [-1, 2, -9], [-1, -1, 2]], -1)
    with pytest.raises(InputError):
        witness_vector(
            validate_cartan([[2, 0, 0], [0, 2, -2], [0, -2, 2]])
        )


def test_exact_and_float_classification_agree():
    rows = [[2, -1, -1], [-1, 2, -3], [-1, -2, 2]]
    exact_tag = classify_type(validate_cartan(rows))
    float_tag = classify_type(validate_cartan([[float(x) for x in r] for r in rows]))
    assert exact_tag.overall == float_tag.overall == NEGATIVE
    # The float Perron value also matches 2 - rho(2I - A) computed directly.
    rho = max(abs(np.linalg.eigvals(2 * np.eye(3) - np.array(rows, dtype=float))))
    assert abs(exact_tag.blocks[0].lam - (2 - rho)) <= 1e-9
