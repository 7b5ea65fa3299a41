"""Activation family: evaluation, derivatives, piecewise decomposition."""

import math

import numpy as np
import pytest

from lipact import activations
from lipact.activations import (
    LEAKY_SLOPE,
    SELU_SCALE,
    SELU_SHAPE,
    ActivationSpec,
    derivative,
    descriptor,
    make_lstar_relu,
    parse_descriptor,
    piecewise_view,
    trainable_param_grad,
)
from lipact.errors import DomainError, ParameterError

from conftest import ALL_KINDS, PIECEWISE_KINDS

GRID = np.linspace(-10.0, 10.0, 1000)


def test_eval_relu_negative_is_zero():
    assert activations.eval(ActivationSpec("relu"), -3.0) == 0.0


def test_eval_lstar_linear_negative_part():
    af = ActivationSpec("lstar", alpha=0.25)
    assert activations.eval(af, -2.0) == -0.5


def test_eval_elu_at_minus_one():
    got = activations.eval(ActivationSpec("elu"), -1.0)
    np.testing.assert_allclose(got, math.exp(-1.0) - 1.0, rtol=1e-15)


def test_eval_swish_at_zero():
    assert activations.eval(ActivationSpec("swish", beta=1.0), 0.0) == 0.0


def test_eval_selu_uses_fixed_constants():
    af = ActivationSpec("selu")
    np.testing.assert_allclose(
        activations.eval(af, -1.0),
        SELU_SCALE * SELU_SHAPE * (math.exp(-1.0) - 1.0), rtol=1e-15)
    np.testing.assert_allclose(activations.eval(af, 2.0), SELU_SCALE * 2.0,
                               rtol=1e-15)
    assert af.params == {"scale": SELU_SCALE, "shape": SELU_SHAPE}


def test_eval_tanhmix_negative_branch():
    af = ActivationSpec("tanhmix", a=0.1, b=0.15)
    x = -2.0
    np.testing.assert_allclose(
        activations.eval(af, x), math.tanh(0.1 * x) + 0.15 * x, rtol=1e-15)
    assert activations.eval(af, 3.0) == 3.0


def test_eval_scalar_in_scalar_out(each_af):
    out = activations.eval(each_af, -1.5)
    assert isinstance(out, float)
    arr = activations.eval(each_af, GRID)
    assert arr.shape == GRID.shape


def test_eval_rejects_non_finite_input(each_af):
    with pytest.raises(DomainError):
        activations.eval(each_af, float("nan"))
    with pytest.raises(DomainError):
        activations.eval(each_af, np.array([1.0, float("inf")]))


def test_derivative_swish_at_zero_is_half():
    assert derivative(ActivationSpec("swish", beta=1.0), 0.0) == 0.5


def test_derivative_swish_matches_closed_form():
    # (e^-x (x+1) + 1) / (1 + e^-x)^2 at beta=1
    af = ActivationSpec("swish", beta=1.0)
    for x in (-3.0, -1.0, -0.2, 0.7, 2.5):
        expect = (math.exp(-x) * (x + 1.0) + 1.0) / (1.0 + math.exp(-x)) ** 2
        np.testing.assert_allclose(derivative(af, x), expect, rtol=1e-12)


def test_derivative_lstar_constant_negative_slope():
    assert derivative(ActivationSpec("lstar", alpha=0.3), -5.0) == 0.3


def test_derivative_elu_at_minus_one():
    np.testing.assert_allclose(
        derivative(ActivationSpec("elu"), -1.0), math.exp(-1.0), rtol=1e-15)


def test_derivative_tanhmix_negative_formula():
    # a * sech^2(a x) + b on the negative domain
    af = ActivationSpec("tanhmix", a=0.1, b=0.15)
    for x in (-8.0, -1.0, -0.05):
        expect = 0.1 * (1.0 - math.tanh(0.1 * x) ** 2) + 0.15
        np.testing.assert_allclose(derivative(af, x), expect, rtol=1e-14)
    assert derivative(af, 2.0) == 1.0


def test_derivative_matches_central_difference(each_af, rng):
    h = 1e-5
    xs = rng.uniform(-8.0, 8.0, size=64)
    if each_af.kind in PIECEWISE_KINDS:
        xs = xs[np.abs(xs) > 1e-4]
    for x in xs:
        numeric = (activations.eval(each_af, x + h)
                   - activations.eval(each_af, x - h)) / (2.0 * h)
        analytic = derivative(each_af, float(x))
        np.testing.assert_allclose(analytic, numeric, rtol=1e-6, atol=1e-9)


def test_derivative_sides_at_corner():
    lstar = ActivationSpec("lstar", alpha=0.3)
    assert derivative(lstar, 0.0) == 1.0
    assert derivative(lstar, 0.0, side="left") == 0.3
    selu = ActivationSpec("selu")
    assert derivative(selu, 0.0) == SELU_SCALE
    np.testing.assert_allclose(derivative(selu, 0.0, side="left"),
                               SELU_SCALE * SELU_SHAPE, rtol=1e-15)
    tm = ActivationSpec("tanhmix", a=0.1, b=0.15)
    assert derivative(tm, 0.0) == 1.0
    np.testing.assert_allclose(derivative(tm, 0.0, side="left"), 0.25,
                               rtol=1e-15)
    with pytest.raises(ParameterError):
        derivative(lstar, 0.0, side="center")


def test_piecewise_relu_negative_part_is_zero():
    view = piecewise_view(ActivationSpec("relu"))
    xs = np.linspace(-10.0, 0.0, 100)
    np.testing.assert_array_equal(view.negative_part(xs), np.zeros_like(xs))


def test_piecewise_lstar_parts():
    view = piecewise_view(ActivationSpec("lstar", alpha=0.1))
    np.testing.assert_allclose(view.negative_part(-2.0), -0.2, rtol=1e-15)
    assert view.positive_part(3.0) == 3.0


def test_piecewise_reconstruction_on_grid(each_af):
    view = piecewise_view(each_af)
    f = activations.eval(each_af, GRID)
    rebuilt = (view.positive_part(np.maximum(GRID, 0.0))
               + view.negative_part(np.minimum(GRID, 0.0)))
    assert np.max(np.abs(f - rebuilt)) < 1e-12


def test_piecewise_quadrant_containment(each_af):
    view = piecewise_view(each_af)
    pos = np.linspace(1e-9, 10.0, 500)
    neg = np.linspace(-10.0, 0.0, 500)
    assert np.all(view.positive_part(pos) >= 0.0)
    assert np.all(view.negative_part(neg) <= 0.0)


def test_make_lstar_zero_equals_relu():
    af = make_lstar_relu(0.0)
    relu = ActivationSpec("relu")
    np.testing.assert_array_equal(activations.eval(af, GRID),
                                  activations.eval(relu, GRID))


def test_make_lstar_001_equals_lrelu():
    af = make_lstar_relu(0.01)
    lrelu = ActivationSpec("lrelu", alpha=LEAKY_SLOPE)
    np.testing.assert_array_equal(activations.eval(af, GRID),
                                  activations.eval(lrelu, GRID))


def test_make_lstar_rejects_negative_slope():
    with pytest.raises(ParameterError):
        make_lstar_relu(-0.1)
    with pytest.raises(DomainError):
        make_lstar_relu(float("nan"))


def test_lstar_monotone_for_nonnegative_slope():
    for alpha in (0.0, 0.3, 1.0):
        values = activations.eval(make_lstar_relu(alpha), GRID)
        assert np.all(np.diff(values) >= 0.0)


def test_lstar_negative_part_unbounded():
    for alpha in (0.01, 0.25, 1.0):
        view = piecewise_view(make_lstar_relu(alpha))
        assert abs(float(view.negative_part(-1e6))) > 1e5 * alpha


def test_elu_negative_part_saturates_at_minus_one():
    view = piecewise_view(ActivationSpec("elu"))
    xs = np.linspace(-50.0, 0.0, 1000)
    assert np.all(view.negative_part(xs) >= -1.0)


def test_trainable_flags():
    for af in ALL_KINDS:
        assert af.trainable == (af.kind in ("prelu", "pswish"))
    prelu = ActivationSpec("prelu", alpha=0.05)
    assert prelu.trainable_value == 0.05
    assert prelu.with_trainable_value(0.2).alpha == 0.2
    pswish = ActivationSpec("pswish", beta=0.0)
    assert pswish.with_trainable_value(1.5).beta == 1.5
    with pytest.raises(ParameterError):
        ActivationSpec("relu").with_trainable_value(0.1)


def test_trainable_param_grad_prelu():
    af = ActivationSpec("prelu", alpha=0.25)
    xs = np.array([-2.0, -0.5, 0.0, 1.0, 3.0])
    np.testing.assert_array_equal(trainable_param_grad(af, xs),
                                  np.minimum(xs, 0.0))


def test_trainable_param_grad_pswish_finite_difference(rng):
    xs = rng.normal(scale=3.0, size=32)
    h = 1e-6
    for beta in (0.0, 0.7, 1.0):
        af = ActivationSpec("pswish", beta=beta)
        hi = activations.eval(ActivationSpec("pswish", beta=beta + h), xs)
        lo = activations.eval(ActivationSpec("pswish", beta=beta - h), xs)
        numeric = (hi - lo) / (2.0 * h)
        np.testing.assert_allclose(trainable_param_grad(af, xs), numeric,
                                   rtol=1e-6, atol=1e-8)


def test_spec_validation_errors():
    with pytest.raises(ParameterError):
        ActivationSpec("softplus")
    with pytest.raises(ParameterError):
        ActivationSpec("lstar")  # missing alpha
    with pytest.raises(ParameterError):
        ActivationSpec("relu", alpha=0.1)  # parameter not taken
    with pytest.raises(ParameterError):
        ActivationSpec("lstar", alpha=-0.2)
    with pytest.raises(ParameterError):
        ActivationSpec("lrelu", alpha=0.02)  # slope fixed at 0.01
    with pytest.raises(ParameterError):
        ActivationSpec("tanhmix", a=-0.1, b=0.15)
    with pytest.raises(DomainError):
        ActivationSpec("swish", beta=float("inf"))


def test_descriptor_round_trip(each_af):
    assert parse_descriptor(descriptor(each_af)) == each_af


def test_descriptor_strings():
    assert descriptor(ActivationSpec("relu")) == "relu"
    assert parse_descriptor("lstar:0.25") == ActivationSpec("lstar", alpha=0.25)
    assert parse_descriptor("tanhmix:0.1:0.15") == ActivationSpec(
        "tanhmix", a=0.1, b=0.15)
    assert parse_descriptor("swish") == ActivationSpec("swish", beta=1.0)
    assert parse_descriptor("pswish:0.0") == ActivationSpec("pswish", beta=0.0)
    assert parse_descriptor("prelu") == ActivationSpec("prelu", alpha=0.25)


def test_descriptor_parse_errors():
    for bad in ("gelu", "lstar", "lstar:a", "tanhmix:0.1", "relu:1", "lrelu:0.01"):
        with pytest.raises(ParameterError):
            parse_descriptor(bad)
