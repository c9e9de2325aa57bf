"""
Unit tests for the linear and MLP predictors.
"""

import numpy as np
import pytest

from wdro.constants import ModelKind, Activation
from wdro.exceptions import ShapeMismatch
from wdro.schemas import ModelSpec, ModelParams, param_count
from wdro.services.predictor import (
    init_params,
    logits,
    forward_loss,
    weighted_loss,
    weighted_grad,
    finite_diff_grad,
    sgd_step,
    predict,
)

LINEAR = ModelSpec()
TANH_MLP = ModelSpec(kind=ModelKind.MLP, hidden=(4, 3), activation=Activation.TANH)
RELU_MLP = ModelSpec(kind=ModelKind.MLP, hidden=(5,), activation=Activation.RELU)


def zero_params(spec: ModelSpec, input_dim: int) -> ModelParams:
    return ModelParams(
        kind=spec.kind,
        hidden=spec.hidden,
        activation=spec.activation,
        input_dim=input_dim,
        weights=np.zeros(param_count(input_dim, spec.hidden)),
    )


def clear_of_kinks(params: ModelParams, features: np.ndarray, margin: float = 1e-3) -> bool:
    """True when no first-layer pre-activation sits within margin of the ReLU kink."""
    fan_out = params.hidden[0]
    w = params.weights[:params.input_dim * fan_out].reshape(params.input_dim, fan_out)
    b = params.weights[params.input_dim * fan_out:(params.input_dim + 1) * fan_out]
    return bool(np.min(np.abs(features @ w + b)) > margin)


class TestForwardLoss:
    """Binary cross-entropy on logits."""

    def test_zero_weights_give_log_two(self):
        params = zero_params(LINEAR, 3)
        batch = forward_loss(params, np.ones((4, 3)), np.array([0, 1, 1, 0]))
        np.testing.assert_allclose(batch.per_sample, np.log(2.0), atol=1e-15)
        assert batch.mean == pytest.approx(np.log(2.0))

    def test_large_logits_do_not_overflow(self):
        params = zero_params(LINEAR, 1).with_weights(np.array([30.0, 0.0]))
        batch = forward_loss(params, np.array([[1.0], [1.0]]), np.array([1, 0]))
        assert batch.per_sample[0] == pytest.approx(np.exp(-30.0), rel=1e-6)
        assert batch.per_sample[1] == pytest.approx(30.0, rel=1e-12)

        huge = zero_params(LINEAR, 1).with_weights(np.array([1000.0, 0.0]))
        assert np.all(np.isfinite(forward_loss(huge, np.array([[1.0]]), np.array([0])).per_sample))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            forward_loss(zero_params(LINEAR, 3), np.ones((2, 4)), np.array([0, 1]))
        with pytest.raises(ShapeMismatch):
            forward_loss(zero_params(LINEAR, 3), np.ones((2, 3)), np.array([0, 1, 1]))

    def test_linear_loss_is_convex_along_segments(self, rng):
        features = rng.standard_normal((30, 4))
        labels = (rng.random(30) < 0.5).astype(int)
        weights = np.full(30, 1 / 30)
        a = init_params(LINEAR, 4, rng)
        b = a.with_weights(rng.standard_normal(a.weights.size))
        for t in np.linspace(0, 1, 11):
            mid = a.with_weights((1 - t) * a.weights + t * b.weights)
            chord = (1 - t) * weighted_loss(a, features, labels, weights, 0.0) + t * weighted_loss(
                b, features, labels, weights, 0.0
            )
            assert weighted_loss(mid, features, labels, weights, 0.0) <= chord + 1e-12


class TestGradients:
    """Backpropagation against central differences."""

    @pytest.mark.parametrize("spec", [LINEAR, RELU_MLP, TANH_MLP], ids=["linear", "relu", "tanh"])
    def test_relative_error_over_random_draws(self, rng, spec):
        """Test analytic gradients are within 1e-4 relative error over 100 weighted, decayed draws."""
        worst = 0.0
        for _ in range(100):
            n = int(rng.integers(4, 11))
            params = init_params(spec, 4, rng)
            params = params.with_weights(params.weights + 0.1 * rng.standard_normal(params.weights.size))
            features = rng.standard_normal((n, 4))
            while spec is RELU_MLP and not clear_of_kinks(params, features):
                features = rng.standard_normal((n, 4))
            labels = (rng.random(n) < 0.5).astype(int)
            weights = rng.dirichlet(np.ones(n))
            decay = float(rng.uniform(0.001, 0.1))

            analytic = weighted_grad(params, features, labels, weights, decay)
            numeric = finite_diff_grad(params, features, labels, weights, decay)
            scale = max(np.linalg.norm(analytic), np.linalg.norm(numeric))
            worst = max(worst, float(np.linalg.norm(analytic - numeric) / scale))
        assert worst < 1e-4

    def test_zero_sample_weights_leave_only_ridge(self, rng):
        params = init_params(TANH_MLP, 3, rng)
        gradient = weighted_grad(params, rng.standard_normal((5, 3)), np.ones(5), np.zeros(5), 0.3)
        np.testing.assert_allclose(gradient, 0.3 * params.weights, atol=1e-15)

    def test_sgd_step(self):
        params = zero_params(LINEAR, 2).with_weights(np.array([1.0, 2.0, 3.0]))
        stepped = sgd_step(params, np.array([1.0, 0.0, -1.0]), 0.5)
        np.testing.assert_allclose(stepped.weights, [0.5, 2.0, 3.5])
        with pytest.raises(ShapeMismatch):
            sgd_step(params, np.zeros(2), 0.5)


class TestPredict:
    """Thresholded logits and parameter layout."""

    def test_zero_logit_predicts_positive(self):
        assert predict(zero_params(LINEAR, 2), np.zeros((3, 2))).tolist() == [1, 1, 1]

    def test_linear_layout_is_weights_then_bias(self):
        params = zero_params(LINEAR, 2).with_weights(np.array([1.0, -1.0, 0.5]))
        np.testing.assert_allclose(logits(params, np.array([[2.0, 1.0]])), [1.5])

    def test_init_is_glorot_with_zero_biases(self, rng):
        params = init_params(RELU_MLP, 4, rng)
        first = params.weights[:20]
        assert np.all(np.abs(first) <= np.sqrt(6.0 / 9.0))
        np.testing.assert_array_equal(params.weights[20:25], np.zeros(5))
        assert params.weights[-1] == 0.0

    def test_checkpoint_round_trip(self, rng):
        params = init_params(TANH_MLP, 3, rng)
        restored = ModelParams.from_json(params.to_json())
        assert restored.spec == params.spec
        np.testing.assert_array_equal(restored.weights, params.weights)

    def test_invalid_architectures(self):
        with pytest.raises(ValueError):
            ModelSpec(kind=ModelKind.LINEAR, hidden=(3,))
        with pytest.raises(ValueError):
            ModelSpec(kind=ModelKind.MLP, hidden=(3, 3, 3))
