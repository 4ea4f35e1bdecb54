import numpy as np
import pytest

from skelhar import LinearDiscriminantSpec, train_arrays
from skelhar.classifiers import LinearDiscriminantModel, SingularCovarianceError
from skelhar.classifiers.lda import train_lda


def test_boundary_normal_aligns_with_mean_difference():
    # two spherical equal-covariance classes: the discriminant direction
    # must align with the class-mean difference within 5 degrees
    rng = np.random.default_rng(0)
    mu_a, mu_b = np.array([0.0, 0.0, 0.0]), np.array([2.0, 1.0, -0.5])
    x = np.concatenate([rng.normal(mu_a, 1.0, (1000, 3)),
                        rng.normal(mu_b, 1.0, (1000, 3))])
    y = np.array([1] * 1000 + [2] * 1000)
    model = train_arrays(LinearDiscriminantSpec(), x, y)
    normal = model.weights[1] - model.weights[0]
    diff = model.means[1] - model.means[0]
    cos = normal @ diff / (np.linalg.norm(normal) * np.linalg.norm(diff))
    assert np.degrees(np.arccos(min(1.0, cos))) < 5.0


def test_separates_well_separated_gaussians():
    rng = np.random.default_rng(1)
    x = np.concatenate([rng.normal([-4, 0], 0.5, (100, 2)),
                        rng.normal([4, 0], 0.5, (100, 2)),
                        rng.normal([0, 4], 0.5, (100, 2))])
    y = np.repeat([1, 2, 3], 100)
    model = train_arrays(LinearDiscriminantSpec(), x, y)
    assert np.mean(model.predict(x) == y) > 0.99


def test_redundant_column_is_regularized_away():
    rng = np.random.default_rng(2)
    base = rng.normal(size=(60, 2))
    x = np.column_stack([base, base[:, 0]])  # singular pooled covariance
    y = np.where(base[:, 0] > 0, 1, 2)
    model = train_lda(LinearDiscriminantSpec(), x, y)
    assert np.mean(model.predict(x) == y) > 0.95


def test_zero_variance_data_raises():
    x = np.concatenate([np.zeros((5, 3)), np.ones((5, 3))])
    y = np.array([1] * 5 + [2] * 5)
    with pytest.raises(SingularCovarianceError, match="regularization or more data"):
        train_lda(LinearDiscriminantSpec(), x, y)


def test_priors_shift_the_boundary():
    rng = np.random.default_rng(3)
    x = np.concatenate([rng.normal(-1.0, 1.0, (900, 1)), rng.normal(1.0, 1.0, (100, 1))])
    y = np.array([1] * 900 + [2] * 100)
    model = train_arrays(LinearDiscriminantSpec(), x, y)
    # the midpoint belongs to the majority class once priors are counted
    assert model.predict(np.array([[0.0]]))[0] == 1


def test_serialization_round_trip():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(50, 3))
    y = np.where(x[:, 0] > 0, 3, 7)
    model = train_arrays(LinearDiscriminantSpec(), x, y)
    again = LinearDiscriminantModel.from_json_dict(model.to_json_dict())
    queries = rng.normal(size=(20, 3))
    assert np.array_equal(model.predict(queries), again.predict(queries))
