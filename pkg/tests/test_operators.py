import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from regslep.operators import (
    DiagonalOperator,
    apply,
    couple,
    forward_values,
    identity_operator,
    join_coupled,
    operator_from_config,
    reciprocal_degree_operator,
    restrict,
    split_coupled,
    upward_continuation_operator,
)
from regslep.spaces import Domain1D, FourierBasis, SphericalBasis, make_interval_region

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_restrict_identity_first_coordinate():
    b = FourierBasis(3)
    op = identity_operator(b)
    region = make_interval_region(Domain1D(), 1.0, 2.0, 11)
    F = np.zeros(7)
    F[0] = 1.0
    assert restrict(F, op, b, region, 1.5) == pytest.approx(1 / math.sqrt(2 * math.pi))


def test_restrict_zero_operator():
    b = FourierBasis(3)
    op = DiagonalOperator(np.zeros(7), b, b)
    region = make_interval_region(Domain1D(), 1.0, 2.0, 11)
    assert restrict(np.ones(7), op, b, region, 1.2) == 0.0
    assert op.zero_count == 7


def test_restrict_reciprocal_degree_cosine():
    b = FourierBasis(3)
    op = reciprocal_degree_operator(b)
    region = make_interval_region(Domain1D(), 0.0, 2 * math.pi, 11)
    F = np.zeros(7)
    F[1] = 1.0
    for x in (0.3, 2.0, 4.1):
        assert restrict(F, op, b, region, x) == pytest.approx(math.cos(x) / (2 * math.sqrt(math.pi)))


def test_restrict_rejects_outside_point():
    b = FourierBasis(2)
    region = make_interval_region(Domain1D(), 1.0, 2.0, 11)
    with pytest.raises(ValueError):
        restrict(np.ones(5), identity_operator(b), b, region, 3.0)


def test_apply_examples():
    b = FourierBasis(4)
    F = np.arange(1.0, 10.0)
    assert np.array_equal(apply(identity_operator(b), F), F)
    e3 = np.zeros(9)
    e3[2] = 1.0
    assert np.allclose(apply(reciprocal_degree_operator(b), e3), 0.5 * e3)


def test_apply_downward_scaling_degree_two():
    op = upward_continuation_operator(2, 0.9, 1.0)
    out = apply(op, np.ones(9))
    assert np.allclose(out[4:], 0.81)
    assert np.allclose(out[0], 1.0)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(identity_operator(FourierBasis(2)), np.ones(4))


def test_apply_batch_axes():
    op = reciprocal_degree_operator(FourierBasis(3))
    F = np.random.default_rng(0).normal(size=(7, 4))
    assert np.allclose(apply(op, F), np.column_stack([apply(op, F[:, i]) for i in range(4)]))


@settings(max_examples=50)
@given(arrays(float, 11, elements=finite), arrays(float, 11, elements=finite), finite)
def test_apply_is_linear(F, G, a):
    op = reciprocal_degree_operator(FourierBasis(5))
    assert np.allclose(apply(op, a * F + G), a * apply(op, F) + apply(op, G), atol=1e-9)


@settings(max_examples=50)
@given(arrays(float, 11, elements=finite))
def test_apply_norm_bound(F):
    op = reciprocal_degree_operator(FourierBasis(5))
    assert np.linalg.norm(apply(op, F)) <= op.norm * np.linalg.norm(F) * (1 + 1e-12) + 1e-300


def test_forward_values_matches_basis_sum():
    b = FourierBasis(4)
    op = reciprocal_degree_operator(b)
    F = np.random.default_rng(1).normal(size=9)
    x = np.linspace(0, 6, 13)
    expected = sum(F[k] * op.sigmas[k] * b.evaluate(x)[k] for k in range(9))
    assert np.allclose(forward_values(op, F, x), expected)


def test_upward_continuation_values():
    op = upward_continuation_operator(10, 6371.0, 6771.0)
    assert op.sigmas[0] == 1.0
    assert op.sigmas[-1] == pytest.approx((6371 / 6771) ** 10)
    assert op.sigmas[-1] == pytest.approx(0.5439, abs=1e-4)
    ext = upward_continuation_operator(2, 6771.0, 13542.0, exponent_shift=1)
    assert ext.sigmas[0] == pytest.approx(0.5)
    assert ext.u_basis.radius == 13542.0 and ext.v_basis.radius == 6771.0
    with pytest.raises(ValueError):
        upward_continuation_operator(2, 2.0, 1.0)


def test_couple_concatenated_sizes_and_labels():
    op1 = identity_operator(FourierBasis(2))
    op2 = reciprocal_degree_operator(FourierBasis(3))
    c = couple(op1, op2)
    assert c.size == 12
    assert [lab[0] for lab in c.u_basis.labels[:5]] == [1] * 5
    assert c.u_basis.labels[5][0] == 2


def test_couple_interleaved_alternates_spectra():
    r_p, r_s, r_e = 6371.0, 6771.0, 13542.0
    op1 = upward_continuation_operator(2, r_p, r_s)
    op2 = upward_continuation_operator(2, r_s, r_e, exponent_shift=1)
    c = couple(op1, op2, "interleaved")
    assert np.allclose(c.sigmas[0::2], op1.sigmas)
    assert np.allclose(c.sigmas[1::2], op2.sigmas)
    deg = op1.u_basis.degrees
    assert np.allclose(c.sigmas[1::2], (r_s / r_e) ** (deg + 1))


def test_couple_zero_second_part():
    b = FourierBasis(3)
    op1 = reciprocal_degree_operator(b)
    op2 = DiagonalOperator(np.zeros(7), b, b)
    c = couple(op1, op2)
    rng = np.random.default_rng(2)
    F1, F2 = rng.normal(size=7), rng.normal(size=7)
    x = np.linspace(0, 6, 9)
    assert np.allclose(forward_values(c, join_coupled(c, F1, F2), x), forward_values(op1, F1, x))


@pytest.mark.parametrize("layout", ["concatenated", "interleaved"])
def test_couple_forward_is_sum(layout):
    b1, b2 = FourierBasis(3), FourierBasis(2)
    op1, op2 = reciprocal_degree_operator(b1), identity_operator(b2)
    c = couple(op1, op2, layout)
    rng = np.random.default_rng(3)
    F1, F2 = rng.normal(size=7), rng.normal(size=5)
    F = join_coupled(c, F1, F2)
    x = np.linspace(0, 6, 11)
    assert np.allclose(forward_values(c, F, x), forward_values(op1, F1, x) + forward_values(op2, F2, x))
    G1, G2 = split_coupled(c, F)
    assert np.array_equal(G1, F1) and np.array_equal(G2, F2)


def test_couple_rejects_mismatched_image_domains():
    with pytest.raises(ValueError):
        couple(identity_operator(FourierBasis(2)), identity_operator(SphericalBasis(1)))
    with pytest.raises(ValueError):
        couple(identity_operator(FourierBasis(2)), identity_operator(FourierBasis(2)), "zigzag")


def test_product_basis_orthonormal():
    c = couple(
        upward_continuation_operator(2, 1.0, 1.5),
        upward_continuation_operator(2, 1.5, 3.0, exponent_shift=1),
        "interleaved",
    )
    pts, w = c.u_basis.reference_quadrature()
    V = c.u_basis.evaluate(pts)
    assert np.abs((V * w) @ V.T - np.eye(c.size)).max() < 1e-12


def test_diagonal_operator_validation():
    b = FourierBasis(2)
    with pytest.raises(ValueError):
        DiagonalOperator(np.ones(4), b, b)
    with pytest.raises(ValueError):
        DiagonalOperator(np.array([1, 1, np.inf, 1, 1]), b, b)


def test_operator_config_round_trip():
    ops = [
        identity_operator(FourierBasis(3)),
        reciprocal_degree_operator(FourierBasis(3)),
        upward_continuation_operator(3, 1.0, 1.2),
        couple(
            upward_continuation_operator(2, 1.0, 1.2),
            upward_continuation_operator(1, 1.2, 2.0, exponent_shift=1),
            "interleaved",
        ),
    ]
    for op in ops:
        again = operator_from_config(op.to_config())
        assert np.array_equal(again.sigmas, op.sigmas)
        assert again.kind == op.kind
