import numpy as np
import pytest

from skelhar import FineKnnSpec, train_arrays
from skelhar.classifiers import FineKnnModel
from oracles import exhaustive_knn


def test_one_nn_memorizes_training_set():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(50, 4))
    y = rng.integers(1, 10, size=50)
    y[:2] = [1, 2]  # ensure two classes
    model = train_arrays(FineKnnSpec(k=1), x, y)
    assert np.array_equal(model.predict(x), y)


def test_majority_vote():
    x = np.array([[0.0], [1.0], [10.0]])
    y = np.array([2, 2, 5])
    model = train_arrays(FineKnnSpec(k=3), x, y)
    assert model.predict(np.array([[0.5]]))[0] == 2


def test_equal_distance_vote_tie_prefers_smallest_label():
    # neighbors at distance 1 on both sides carry labels {2, 5}
    x = np.array([[-1.0], [1.0]])
    y = np.array([5, 2])
    model = train_arrays(FineKnnSpec(k=2), x, y)
    assert model.predict(np.array([[0.0]]))[0] == 2


def test_matches_exhaustive_oracle_including_ties():
    rng = np.random.default_rng(1)
    for trial in range(12):
        n = int(rng.integers(10, 120))
        d = int(rng.integers(1, 6))
        if trial % 3 == 0:
            # integer grids force exact distance ties
            x = rng.integers(0, 4, size=(n, d)).astype(np.float64)
            queries = rng.integers(0, 4, size=(30, d)).astype(np.float64)
        else:
            x = rng.normal(size=(n, d))
            queries = np.concatenate([rng.normal(size=(20, d)), x[:5]])
        y = rng.integers(1, 10, size=n)
        y[:2] = [1, 2]
        k = int(rng.choice([1, 2, 3, 5]))
        k = min(k, n)
        model = train_arrays(FineKnnSpec(k=k), x, y)
        expected = exhaustive_knn(x, y, queries, k)
        assert np.array_equal(model.predict(queries), expected)


def test_dimension_mismatch():
    model = train_arrays(FineKnnSpec(), np.eye(3), np.array([1, 2, 3]))
    with pytest.raises(ValueError, match="dimension"):
        model.predict(np.zeros((1, 4)))


def test_k_larger_than_training_set():
    with pytest.raises(ValueError, match="exceeds"):
        train_arrays(FineKnnSpec(k=5), np.eye(3), np.array([1, 2, 3]))


def test_serialization_round_trip():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(20, 3))
    y = rng.integers(1, 4, size=20)
    y[:2] = [1, 2]
    model = train_arrays(FineKnnSpec(k=3), x, y)
    again = FineKnnModel.from_json_dict(model.to_json_dict())
    queries = rng.normal(size=(10, 3))
    assert np.array_equal(model.predict(queries), again.predict(queries))
