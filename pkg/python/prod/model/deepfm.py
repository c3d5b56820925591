"""DeepFM forward and backward passes in numpy.

For one example with slot embeddings ``v_1 .. v_S`` and linear terms
``w_1 .. w_S``::

    logit = bias + sum_i w_i + FM2 + MLP(concat(v_1 .. v_S))
    FM2   = 1/2 * sum_d [(sum_i v_id)^2 - sum_i v_id^2]

Gradients are those of the log loss, whose derivative with respect to the
logit is ``p - y``.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..store.feature_key import FeatureKey
from .deepfm_config import DeepFMConfig
from .dense_params import DenseParams
from .prediction import Prediction
from .shape_mismatch import ShapeMismatch


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    z = np.exp(x[~pos])
    out[~pos] = z / (1.0 + z)
    return out


@dataclass
class ForwardCache:
    """Intermediates kept by :py:meth:`DeepFM.forward_batch` for the backward pass."""

    embeddings: np.ndarray
    sum_v: np.ndarray
    activations: List[np.ndarray] = field(default_factory=list)
    pre_activations: List[np.ndarray] = field(default_factory=list)
    logits: Optional[np.ndarray] = None
    fm2: Optional[np.ndarray] = None

    @property
    def probabilities(self) -> np.ndarray:
        return sigmoid(self.logits)


@dataclass
class ExampleGradients:
    """Gradients of one example's log loss."""

    dense: DenseParams
    embeddings: Dict[FeatureKey, np.ndarray]
    linear: Dict[FeatureKey, float]


class DeepFM:

    def __init__(self, config: DeepFMConfig):
        self.__config = config

    def get_config(self) -> DeepFMConfig:
        return self.__config

    def check_dense(self, dense: DenseParams):
        config = self.__config
        if dense.num_layers() != len(config.mlp_layers):
            raise ShapeMismatch("MLP layer count", len(config.mlp_layers), dense.num_layers())
        width = config.mlp_input_width
        for l, (w, b) in enumerate(zip(dense.weights, dense.biases)):
            expected = (width, config.mlp_layers[l])
            if w.shape != expected:
                raise ShapeMismatch(f"MLP weight {l}", expected, w.shape)
            if b.shape != (expected[1],):
                raise ShapeMismatch(f"MLP bias {l}", (expected[1],), b.shape)
            width = expected[1]

    def forward_batch(self, embeddings: np.ndarray, linear: np.ndarray, dense: DenseParams) -> ForwardCache:
        """
        :param embeddings:
            (batch, num_slots, dim), zero rows for filtered features

        :param linear:
            (batch, num_slots) first-order terms

        :return:
            Cache holding logits and everything backward needs
        """
        config = self.__config
        batch = embeddings.shape[0]
        if embeddings.shape[1:] != (config.num_slots, config.dim):
            raise ShapeMismatch("Embedding batch", (batch, config.num_slots, config.dim), embeddings.shape)
        if linear.shape != (batch, config.num_slots):
            raise ShapeMismatch("Linear batch", (batch, config.num_slots), linear.shape)

        emb = np.asarray(embeddings, dtype=np.float64)
        sum_v = emb.sum(axis=1)
        fm2 = 0.5 * (sum_v * sum_v - (emb * emb).sum(axis=1)).sum(axis=1)
        logits = dense.bias[0] + linear.sum(axis=1) + fm2

        cache = ForwardCache(emb, sum_v, fm2=fm2)
        if dense.weights:
            h = emb.reshape(batch, config.mlp_input_width)
            cache.activations.append(h)
            last = len(dense.weights) - 1
            for l, (w, b) in enumerate(zip(dense.weights, dense.biases)):
                z = h @ w + b
                cache.pre_activations.append(z)
                h = np.maximum(z, 0.0) if l < last else z
                cache.activations.append(h)
            logits = logits + h[:, 0]

        cache.logits = logits
        return cache

    def backward_batch(self, cache: ForwardCache, dlogits: np.ndarray, dense: DenseParams) -> Tuple[DenseParams, np.ndarray, np.ndarray]:
        """Back-propagate upstream logit gradients.

        :param dlogits:
            (batch,) derivative of the loss with respect to each logit

        :return:
            (dense gradients, embedding gradients (batch, slots, dim), linear gradients (batch, slots))
        """
        config = self.__config
        batch = dlogits.shape[0]
        grads = dense.zeros_like()
        grads.bias[0] = dlogits.sum()

        glinear = np.repeat(dlogits[:, None], config.num_slots, axis=1)
        gemb = dlogits[:, None, None] * (cache.sum_v[:, None, :] - cache.embeddings)

        if dense.weights:
            delta = dlogits[:, None]
            for l in range(len(dense.weights) - 1, -1, -1):
                grads.weights[l] = cache.activations[l].T @ delta
                grads.biases[l] = delta.sum(axis=0)
                dh = delta @ dense.weights[l].T
                if l > 0:
                    delta = dh * (cache.pre_activations[l - 1] > 0)
                else:
                    gemb = gemb + dh.reshape(batch, config.num_slots, config.dim)

        return grads, gemb, glinear

    def forward(
        self,
        example_features: Sequence[FeatureKey],
        embeddings: Mapping[FeatureKey, np.ndarray],
        linear_terms: Mapping[FeatureKey, float],
        dense: DenseParams,
    ) -> Prediction:
        """Single-example forward pass.

        Features missing from `embeddings` or `linear_terms` were filtered
        and contribute zeros.
        """
        cache = self.forward_batch(*self.__stack(example_features, embeddings, linear_terms), dense)
        return Prediction.from_logit(float(cache.logits[0]))

    def backward(
        self,
        example_features: Sequence[FeatureKey],
        embeddings: Mapping[FeatureKey, np.ndarray],
        linear_terms: Mapping[FeatureKey, float],
        prediction: Prediction,
        label: int,
        dense: DenseParams,
    ) -> ExampleGradients:
        """Gradients of ``-[y log p + (1-y) log(1-p)]`` for one example."""
        assert label in (0, 1), f"Label must be 0 or 1, got {label}"
        emb, lin = self.__stack(example_features, embeddings, linear_terms)
        cache = self.forward_batch(emb, lin, dense)
        dlogit = np.array([prediction.probability - label], dtype=np.float64)
        grads, gemb, glin = self.backward_batch(cache, dlogit, dense)

        emb_grads: Dict[FeatureKey, np.ndarray] = {}
        lin_grads: Dict[FeatureKey, float] = {}
        for s, key in enumerate(example_features):
            if key in embeddings:
                emb_grads[key] = emb_grads.get(key, 0.0) + gemb[0, s]
            if key in linear_terms:
                lin_grads[key] = lin_grads.get(key, 0.0) + float(glin[0, s])
        return ExampleGradients(grads, emb_grads, lin_grads)

    def __stack(self, features, embeddings, linear_terms) -> Tuple[np.ndarray, np.ndarray]:
        config = self.__config
        if len(features) != config.num_slots:
            raise ShapeMismatch("Feature slots", config.num_slots, len(features))
        emb = np.zeros((1, config.num_slots, config.dim))
        lin = np.zeros((1, config.num_slots))
        for s, key in enumerate(features):
            vector = embeddings.get(key)
            if vector is not None:
                if len(vector) != config.dim:
                    raise ShapeMismatch(f"Embedding of {key}", config.dim, len(vector))
                emb[0, s] = vector
            lin[0, s] = linear_terms.get(key, 0.0)
        return emb, lin
