"""
Small binary classifiers (linear and MLP) with hand-written gradients.

Parameters live in one flat vector laid out layer by layer, each layer as its
weight matrix (fan_in x fan_out, row-major) followed by its bias.
"""

import logging
from typing import List, Tuple, Optional

import numpy as np

from wdro.constants import Activation
from wdro.exceptions import ShapeMismatch, InvalidConfig
from wdro.schemas import ModelSpec, ModelParams, LossBatch, layer_shapes

logger = logging.getLogger(__name__)

Layer = Tuple[np.ndarray, np.ndarray]


def _unpack(params: ModelParams) -> List[Layer]:
    layers = []
    offset = 0
    for fan_in, fan_out in layer_shapes(params.input_dim, params.hidden):
        w = params.weights[offset:offset + fan_in * fan_out].reshape(fan_in, fan_out)
        offset += fan_in * fan_out
        b = params.weights[offset:offset + fan_out]
        offset += fan_out
        layers.append((w, b))
    return layers


def _activate(a: np.ndarray, activation: Activation) -> np.ndarray:
    if activation == Activation.TANH:
        return np.tanh(a)
    return np.maximum(a, 0.0)


def _activation_grad(a: np.ndarray, h: np.ndarray, activation: Activation) -> np.ndarray:
    if activation == Activation.TANH:
        return 1.0 - h * h
    return (a > 0).astype(float)


def _check_inputs(params: ModelParams, features: np.ndarray, labels: Optional[np.ndarray] = None) -> None:
    if features.ndim != 2 or features.shape[1] != params.input_dim:
        raise ShapeMismatch("features", (features.shape[0], params.input_dim), features.shape)
    if labels is not None and labels.shape != (features.shape[0],):
        raise ShapeMismatch("labels", (features.shape[0],), labels.shape)


def _forward(params: ModelParams, features: np.ndarray):
    """Logits plus the (pre-activation, activation) cache of every hidden layer."""
    layers = _unpack(params)
    cache = []
    h = features
    for w, b in layers[:-1]:
        a = h @ w + b
        h_next = _activate(a, params.activation)
        cache.append((h, a, h_next))
        h = h_next
    w, b = layers[-1]
    z = (h @ w + b)[:, 0]
    return z, cache, h, layers


def _bce(logits: np.ndarray, labels: np.ndarray) -> np.ndarray:
    # log(1 + e^z) - y z without overflow
    return np.maximum(logits, 0.0) - labels * logits + np.log1p(np.exp(-np.abs(logits)))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def init_params(spec: ModelSpec, input_dim: int, rng: np.random.Generator) -> ModelParams:
    """
    Glorot-uniform weights in [-a, a], a = sqrt(6 / (fan_in + fan_out)), zero biases.
    """
    if input_dim < 1:
        raise InvalidConfig("input_dim", input_dim, ">= 1")
    chunks = []
    for fan_in, fan_out in layer_shapes(input_dim, spec.hidden):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        chunks.append(rng.uniform(-limit, limit, size=fan_in * fan_out))
        chunks.append(np.zeros(fan_out))
    weights = np.concatenate(chunks)
    return ModelParams(
        kind=spec.kind,
        hidden=spec.hidden,
        activation=spec.activation,
        input_dim=input_dim,
        weights=weights,
    )


def logits(params: ModelParams, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    _check_inputs(params, features)
    z, _, _, _ = _forward(params, features)
    return z


def forward_loss(params: ModelParams, features: np.ndarray, labels: np.ndarray) -> LossBatch:
    """
    Per-sample binary cross-entropy on the logit.

    Args:
        params: Model parameters
        features: N x d matrix
        labels: N binary labels

    Returns:
        LossBatch with per-sample losses and their mean
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    _check_inputs(params, features, labels)
    z, _, _, _ = _forward(params, features)
    per_sample = _bce(z, labels)
    mean = float(per_sample.mean()) if per_sample.size else 0.0
    return LossBatch(per_sample=per_sample, mean=mean)


def weighted_loss(
    params: ModelParams,
    features: np.ndarray,
    labels: np.ndarray,
    sample_weights: np.ndarray,
    weight_decay: float,
) -> float:
    """sum_i s_i l_i + (weight_decay / 2) ||w||^2"""
    batch = forward_loss(params, features, labels)
    ridge = 0.5 * weight_decay * float(params.weights @ params.weights)
    return float(np.asarray(sample_weights, dtype=float) @ batch.per_sample) + ridge


def weighted_grad(
    params: ModelParams,
    features: np.ndarray,
    labels: np.ndarray,
    sample_weights: np.ndarray,
    weight_decay: float,
) -> np.ndarray:
    """
    Gradient of sum_i s_i l_i + (weight_decay / 2) ||w||^2 by backpropagation.

    Args:
        params: Model parameters
        features: N x d matrix
        labels: N binary labels
        sample_weights: N nonnegative per-sample weights
        weight_decay: Ridge coefficient applied to every parameter

    Returns:
        Gradient with the same layout as params.weights
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    sample_weights = np.asarray(sample_weights, dtype=float)
    _check_inputs(params, features, labels)
    if sample_weights.shape != labels.shape:
        raise ShapeMismatch("sample_weights", labels.shape, sample_weights.shape)

    z, cache, h_last, layers = _forward(params, features)
    delta = (sample_weights * (_sigmoid(z) - labels))[:, None]

    grads: List[np.ndarray] = []
    w_out, _ = layers[-1]
    grads.append(np.concatenate([(h_last.T @ delta).ravel(), delta.sum(axis=0)]))

    upstream = delta @ w_out.T
    for index in range(len(cache) - 1, -1, -1):
        h_in, a, h_out = cache[index]
        local = upstream * _activation_grad(a, h_out, params.activation)
        grads.append(np.concatenate([(h_in.T @ local).ravel(), local.sum(axis=0)]))
        w, _ = layers[index]
        upstream = local @ w.T

    gradient = np.concatenate(grads[::-1])
    return gradient + weight_decay * params.weights


def finite_diff_grad(
    params: ModelParams,
    features: np.ndarray,
    labels: np.ndarray,
    sample_weights: np.ndarray,
    weight_decay: float,
    step: float = 1e-5,
) -> np.ndarray:
    """Central-difference gradient of weighted_loss, one coordinate at a time."""
    if step <= 0:
        raise InvalidConfig("step", step, "> 0")
    base = params.weights
    gradient = np.zeros_like(base)
    for index in range(base.size):
        shifted = base.copy()
        shifted[index] = base[index] + step
        upper = weighted_loss(params.with_weights(shifted), features, labels, sample_weights, weight_decay)
        shifted[index] = base[index] - step
        lower = weighted_loss(params.with_weights(shifted), features, labels, sample_weights, weight_decay)
        gradient[index] = (upper - lower) / (2.0 * step)
    return gradient


def sgd_step(params: ModelParams, gradient: np.ndarray, eta_w: float) -> ModelParams:
    """w - eta_w * g"""
    gradient = np.asarray(gradient, dtype=float)
    if gradient.shape != params.weights.shape:
        raise ShapeMismatch("gradient", params.weights.shape, gradient.shape)
    return params.with_weights(params.weights - eta_w * gradient)


def predict(params: ModelParams, features: np.ndarray) -> np.ndarray:
    """Binary predictions 1{logit >= 0}."""
    return (logits(params, features) >= 0.0).astype(np.int64)

