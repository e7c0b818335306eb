"""SMI, its distance terms, silhouette, and the scalar error metrics.

Brute-force oracles are written as literal translations of the defining
formulas; they exist to catch vectorization mistakes, not to be fast.
"""

import math

import numpy as np
import pytest

from tslx.io import ValidationError
from tslx.metrics import (
    SMIConfig,
    d_inter,
    d_intra,
    groups_from_labels,
    mae,
    mse,
    silhouette,
    smi,
    smi_report,
)
from tslx.features import extract_features


def oracle_d_intra(groups):
    total = 0.0
    for g in groups:
        for k in range(g.shape[1]):
            col = g[:, k]
            mean = sum(col) / len(col)
            var = sum((v - mean) ** 2 for v in col) / len(col)
            total += var ** 0.5
    return total


def oracle_d_inter(groups):
    total = 0.0
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            for k in range(groups[i].shape[1]):
                mi = sum(groups[i][:, k]) / groups[i].shape[0]
                mj = sum(groups[j][:, k]) / groups[j].shape[0]
                total += abs(mi - mj)
    return total


def oracle_silhouette(points, labels):
    n = len(points)
    labels = list(labels)
    dist = [[math.dist(points[i], points[j]) for j in range(n)] for i in range(n)]
    scores = []
    for i in range(n):
        same = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not same:
            scores.append(0.0)
            continue
        a = sum(dist[i][j] for j in same) / len(same)
        b = math.inf
        for other in set(labels):
            if other == labels[i]:
                continue
            members = [j for j in range(n) if labels[j] == other]
            b = min(b, sum(dist[i][j] for j in members) / len(members))
        denom = max(a, b)
        scores.append(0.0 if denom == 0.0 else (b - a) / denom)
    return sum(scores) / n


def random_groups(rng, max_groups=5, max_rows=8, cols=7):
    n_groups = int(rng.integers(1, max_groups + 1))
    return [
        rng.normal(size=(int(rng.integers(1, max_rows + 1)), cols)) * 2.0
        + rng.normal() * 3.0
        for _ in range(n_groups)
    ]


def test_d_intra_matches_bruteforce():
    rng = np.random.default_rng(0)
    for _ in range(200):
        groups = random_groups(rng)
        assert abs(d_intra(groups) - oracle_d_intra(groups)) < 1e-12


def test_d_inter_matches_bruteforce():
    rng = np.random.default_rng(1)
    for _ in range(200):
        groups = random_groups(rng)
        assert abs(d_inter(groups) - oracle_d_inter(groups)) < 1e-12


def test_d_inter_single_group_is_zero():
    assert d_inter([np.ones((3, 7))]) == 0.0


def test_smi_spot_value():
    assert abs(smi(1.0, 20.0) - (1.0 - math.exp(-1.0))) < 1e-12
    assert abs(smi(1.0, 20.0) - 0.6321205588285577) < 1e-12


def test_smi_boundaries_exact():
    assert smi(0.0, 5.0) == 1.0
    assert smi(0.0, 0.0) == 1.0
    assert smi(3.0, 0.0) == 0.0


def test_smi_monotonicity_and_range():
    rng = np.random.default_rng(2)
    for _ in range(200):
        di = float(rng.uniform(0.01, 10))
        de = float(rng.uniform(0, 50))
        v = smi(di, de)
        assert 0.0 <= v < 1.0
        assert smi(di, de + 1.0) > v
        assert smi(di + 1.0, de) <= v


def test_smi_rejects_negatives_and_bad_config():
    with pytest.raises(ValidationError):
        smi(-1.0, 2.0)
    with pytest.raises(ValidationError):
        smi(1.0, -2.0)
    with pytest.raises(ValidationError):
        SMIConfig(a=0.0, b=0.1)
    with pytest.raises(ValidationError):
        SMIConfig(a=0.5, b=-1.0)


def test_smi_config_scales():
    assert abs(smi(1.0, 2.0, SMIConfig(a=1.0, b=1.0)) - (1 - math.exp(-2.0))) < 1e-12


def test_groups_from_labels_first_occurrence_order():
    values = np.arange(12.0).reshape(6, 2)
    keys, groups = groups_from_labels(values, ["b", "a", "b", "c", "a", "b"])
    assert keys == ["b", "a", "c"]
    assert [g.shape[0] for g in groups] == [3, 2, 1]
    assert np.array_equal(groups[0], values[[0, 2, 5]])


def test_smi_report_fields_and_warnings():
    rng = np.random.default_rng(3)
    patches = rng.normal(size=(12, 16))
    feats = extract_features(patches)
    labels = [i % 3 for i in range(12)]
    report = smi_report(feats, labels)
    assert report.n_groups == 3
    assert 0.0 <= report.smi <= 1.0
    assert abs(report.smi - smi(report.d_intra, report.d_inter)) < 1e-15
    single = smi_report(feats, [0] * 12)
    assert single.smi == 0.0
    assert any("single group" in w for w in single.warnings)


def test_silhouette_matches_bruteforce():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(2, 14))
        points = rng.normal(size=(n, int(rng.integers(1, 6))))
        labels = rng.integers(0, int(rng.integers(1, 5)) + 1, size=n).tolist()
        labels[0], labels[1] = 0, 1  # the metric requires >= 2 clusters
        got = silhouette(points, labels)
        assert abs(got - oracle_silhouette(points.tolist(), labels)) < 1e-12


def test_silhouette_range_and_edges():
    points = np.array([[0.0, 0.0], [0.0, 0.0], [5.0, 5.0], [5.0, 5.0]])
    assert silhouette(points, [0, 0, 1, 1]) == 1.0
    # identical points in different clusters: a == b == 0 -> score 0
    same = np.zeros((4, 2))
    assert silhouette(same, [0, 0, 1, 1]) == 0.0
    # singleton clusters contribute 0
    assert abs(silhouette(points[:3], [0, 0, 1])) <= 1.0
    with pytest.raises(ValidationError):
        silhouette(points, [0, 0, 0, 0])


def test_silhouette_accepts_feature_table():
    rng = np.random.default_rng(5)
    patches = rng.normal(size=(10, 16))
    feats = extract_features(patches)
    labels = [i % 2 for i in range(10)]
    assert silhouette(feats, labels) == silhouette(feats.values, labels)


def test_mse_mae_literal():
    y = np.array([[1.0, 2.0], [3.0, 4.0]])
    yhat = np.array([[1.5, 2.0], [2.0, 6.0]])
    assert abs(mse(y, yhat) - (0.25 + 0.0 + 1.0 + 4.0) / 4.0) < 1e-15
    assert abs(mae(y, yhat) - (0.5 + 0.0 + 1.0 + 2.0) / 4.0) < 1e-15
    with pytest.raises(ValidationError):
        mse(y, yhat[:1])
