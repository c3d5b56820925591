import itertools

import numpy as np
import pytest

from cuckoorec import AdamOptimizer, DeepFM, DeepFMConfig, DenseParams, Prediction, ShapeMismatch, UndefinedMetric, auc, log_loss
from cuckoorec.model.metrics import LOG_LOSS_EPS
from cuckoorec.model.tools.dense_codec import CorruptDenseData, DenseCodec
from cuckoorec.store.feature_key import FeatureKey


def keys(num_slots: int) -> list:
    return [FeatureKey(s, 10 + s) for s in range(num_slots)]


def random_instance(rng, config: DeepFMConfig):
    features = keys(config.num_slots)
    embeddings = {k: rng.normal(0.0, 0.5, config.dim) for k in features}
    linear = {k: float(rng.normal(0.0, 0.3)) for k in features}
    dense = DenseParams.init(config, rng)
    dense.bias[0] = 0.1
    for b in dense.biases:
        b += rng.normal(0.0, 0.1, b.shape)
    return features, embeddings, linear, dense


def loss(model, features, embeddings, linear, dense, label) -> float:
    p = model.forward(features, embeddings, linear, dense).probability
    return float(log_loss([p], [label])[0])


# forward

def test_all_zero_inputs_give_bias():
    config = DeepFMConfig(3, 4, (8, 1))
    dense = DenseParams.init(config, zero_mlp=True)
    dense.bias[0] = 0.3
    features = keys(3)
    prediction = DeepFM(config).forward(features, {k: np.zeros(4) for k in features}, {k: 0.0 for k in features}, dense)
    assert prediction.logit == pytest.approx(0.3)


def test_fm_hand_arithmetic():
    config = DeepFMConfig(2, 1, ())
    features = keys(2)
    embeddings = {features[0]: np.array([2.0]), features[1]: np.array([3.0])}
    prediction = DeepFM(config).forward(features, embeddings, {}, DenseParams.init(config))
    assert prediction.logit == pytest.approx(6.0)


def test_fm_identity_against_pairwise(rng):
    config = DeepFMConfig(5, 3, ())
    model = DeepFM(config)
    for _ in range(20):
        features, embeddings, _, dense = random_instance(rng, config)
        logit = model.forward(features, embeddings, {}, dense).logit
        pairwise = sum(float(embeddings[a] @ embeddings[b]) for a, b in itertools.combinations(features, 2))
        assert logit - dense.bias[0] == pytest.approx(pairwise, abs=1e-6)


def test_missing_keys_contribute_zero(rng):
    config = DeepFMConfig(2, 3, ())
    features = keys(2)
    only_first = {features[0]: rng.normal(size=3)}
    prediction = DeepFM(config).forward(features, only_first, {}, DenseParams.init(config))
    assert prediction.logit == pytest.approx(0.0)


def test_probability_is_sigmoid(rng):
    config = DeepFMConfig(2, 4, (4, 1))
    features, embeddings, linear, dense = random_instance(rng, config)
    prediction = DeepFM(config).forward(features, embeddings, linear, dense)
    assert prediction.probability == pytest.approx(1.0 / (1.0 + np.exp(-prediction.logit)))
    assert Prediction.from_logit(-800.0).probability == 0.0


def test_shape_mismatch():
    config = DeepFMConfig(2, 4, (4, 1))
    model = DeepFM(config)
    dense = DenseParams.init(config)
    with pytest.raises(ShapeMismatch):
        model.forward(keys(3), {}, {}, dense)
    with pytest.raises(ShapeMismatch):
        model.forward(keys(2), {keys(2)[0]: np.zeros(3)}, {}, dense)
    with pytest.raises(ShapeMismatch):
        model.check_dense(DenseParams.init(DeepFMConfig(3, 4, (4, 1))))


def test_batch_matches_single_examples(rng):
    config = DeepFMConfig(3, 4, (6, 1))
    model = DeepFM(config)
    dense = DenseParams.init(config, rng)
    emb = rng.normal(size=(5, 3, 4))
    lin = rng.normal(size=(5, 3))
    batch = model.forward_batch(emb, lin, dense).logits
    features = keys(3)
    for b in range(5):
        single = model.forward(features, {k: emb[b, s] for s, k in enumerate(features)}, {k: lin[b, s] for s, k in enumerate(features)}, dense)
        assert batch[b] == pytest.approx(single.logit)


# backward

def test_dlogit_is_p_minus_y(rng):
    config = DeepFMConfig(2, 3, ())
    model = DeepFM(config)
    features, embeddings, linear, dense = random_instance(rng, config)
    prediction = model.forward(features, embeddings, linear, dense)
    for label in (0, 1):
        grads = model.backward(features, embeddings, linear, prediction, label, dense)
        assert grads.dense.bias[0] == pytest.approx(prediction.probability - label)
        for k in features:
            assert grads.linear[k] == pytest.approx(prediction.probability - label)


def test_perfect_prediction_has_zero_gradients(rng):
    config = DeepFMConfig(2, 3, (4, 1))
    model = DeepFM(config)
    features, embeddings, linear, dense = random_instance(rng, config)
    perfect = Prediction(logit=50.0, probability=1.0)
    grads = model.backward(features, embeddings, linear, perfect, 1, dense)
    assert all(np.allclose(a, 0.0) for a in grads.dense.named_arrays().values())
    assert all(np.allclose(g, 0.0) for g in grads.embeddings.values())
    assert all(g == 0.0 for g in grads.linear.values())


def hidden_margin(model, features, embeddings, linear, dense) -> float:
    """Smallest distance of a hidden pre-activation from the ReLU kink."""
    emb = np.array([[embeddings[k] for k in features]])
    lin = np.array([[linear[k] for k in features]])
    hidden = model.forward_batch(emb, lin, dense).pre_activations[:-1]
    return min((float(np.abs(z).min()) for z in hidden), default=np.inf)


def check_gradients(model, config, rng, label, h: float = 1e-4):
    instance = random_instance(rng, config)
    while hidden_margin(model, *instance) < 1e-2:
        instance = random_instance(rng, config)
    features, embeddings, linear, dense = instance
    prediction = model.forward(features, embeddings, linear, dense)
    grads = model.backward(features, embeddings, linear, prediction, label, dense)

    def central(array, index):
        old = array[index]
        array[index] = old + h
        up = loss(model, features, embeddings, linear, dense, label)
        array[index] = old - h
        down = loss(model, features, embeddings, linear, dense, label)
        array[index] = old
        return (up - down) / (2 * h)

    for name, array in dense.named_arrays().items():
        analytic = grads.dense.named_arrays()[name]
        numeric = np.array([central(array, i) for i in np.ndindex(array.shape)]).reshape(array.shape)
        assert np.allclose(analytic, numeric, rtol=1e-3, atol=1e-6), name

    for key in features:
        numeric = np.array([central(embeddings[key], d) for d in range(config.dim)])
        assert np.allclose(grads.embeddings[key], numeric, rtol=1e-3, atol=1e-6)

        old = linear[key]
        linear[key] = old + h
        up = loss(model, features, embeddings, linear, dense, label)
        linear[key] = old - h
        down = loss(model, features, embeddings, linear, dense, label)
        linear[key] = old
        assert grads.linear[key] == pytest.approx((up - down) / (2 * h), rel=1e-3, abs=1e-6)


def test_gradients_match_finite_differences(rng):
    config = DeepFMConfig(3, 4, (5, 1))
    model = DeepFM(config)
    for label in (0, 1):
        check_gradients(model, config, rng, label)


@pytest.mark.slow
def test_gradients_match_finite_differences_over_random_shapes():
    shapes = [(), (1,), (5, 1), (6, 3, 1)]
    for case in range(1000):
        rng = np.random.default_rng(case)
        config = DeepFMConfig(int(rng.integers(1, 5)), int(rng.integers(1, 6)), shapes[case % len(shapes)])
        check_gradients(DeepFM(config), config, rng, label=int(rng.integers(0, 2)))


# metrics

def test_auc_separated_and_tied():
    assert auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert auc([0.5] * 6, [0, 1, 0, 1, 1, 0]) == 0.5


def test_auc_matches_pair_counting():
    for case in range(1000):
        rng = np.random.default_rng(case)
        n = int(rng.integers(2, 60))
        scores = np.round(rng.random(n), int(rng.integers(0, 3)))
        labels = rng.integers(0, 2, n)
        labels[:2] = [0, 1]
        pos, neg = scores[labels == 1], scores[labels == 0]
        wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
        assert auc(scores, labels) == pytest.approx(wins / (len(pos) * len(neg)), abs=1e-9), f"case {case}"


def test_auc_invariant_under_monotone_transform(rng):
    scores = rng.normal(size=100)
    labels = rng.integers(0, 2, 100)
    assert auc(scores, labels) == pytest.approx(auc(np.exp(3 * scores) + 1, labels), abs=1e-12)


def test_auc_single_class():
    with pytest.raises(UndefinedMetric):
        auc([0.1, 0.2], [1, 1])


def test_log_loss_bounds():
    values = log_loss([0.0, 1.0, 0.3, 0.9], [0, 1, 1, 0])
    assert np.all(values >= 0)
    assert values[0] == pytest.approx(-np.log(1.0 - LOG_LOSS_EPS))
    assert np.isfinite(log_loss([0.0], [1])).all()


# dense parameters

def test_adam_first_step():
    config = DeepFMConfig(1, 1, ())
    params = DenseParams.init(config)
    grads = params.zeros_like()
    grads.bias[0] = 0.5
    optimizer = AdamOptimizer(lr=0.01)
    optimizer.step(params, grads)
    assert params.bias[0] == pytest.approx(-0.01, rel=1e-6)
    assert optimizer.get_step_count() == 1


def test_adam_state_round_trip(rng):
    config = DeepFMConfig(2, 2, (3, 1))
    params = DenseParams.init(config, rng)
    optimizer = AdamOptimizer()
    for _ in range(3):
        grads = DenseParams.from_named_arrays({n: rng.normal(size=a.shape) for n, a in params.named_arrays().items()})
        optimizer.step(params, grads)
    restored = AdamOptimizer()
    restored.load_state_arrays(DenseCodec().decode(DenseCodec().encode(optimizer.state_arrays())))
    assert restored.same_state(optimizer)
    assert restored.get_step_count() == 3


def test_dense_codec_truncated(rng):
    data = DenseCodec().encode(DenseParams.init(DeepFMConfig(2, 2, (3, 1)), rng).named_arrays())
    with pytest.raises(CorruptDenseData):
        DenseCodec().decode(data[:-5])


def test_config_validation():
    with pytest.raises(ValueError):
        DeepFMConfig(2, 4, (8, 2))
    assert DeepFMConfig(3, 4).mlp_input_width == 12
