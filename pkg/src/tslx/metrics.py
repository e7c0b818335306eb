"""Semantic matching index, silhouette comparator, and scalar error metrics.

The matching index scores how well a grouping of patches (by shared token
tuples) separates statistical patterns:

* ``d_intra``: sum over groups and features of the population standard
  deviation of that feature inside the group.
* ``d_inter``: sum over unordered group pairs and features of the absolute
  difference of feature means.
* ``smi``: ``1 - exp(-b * (a * d_inter / d_intra))``, defined as exactly 1
  when ``d_intra`` is 0.  Defaults ``a = 0.5``, ``b = 0.1``.

A single group gives ``d_inter = 0`` (empty pair sum), hence smi 0 unless the
group is internally constant; the report carries a warning in that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .features import FEATURE_NAMES, FeatureTable
from .io import ValidationError


@dataclass(frozen=True)
class SMIConfig:
    a: float = 0.5
    b: float = 0.1

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValidationError(f"a and b must be positive, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class GroupDiagnostics:
    key: str
    size: int
    feature_std: tuple[float, ...]


@dataclass(frozen=True)
class SMIReport:
    d_intra: float
    d_inter: float
    smi: float
    n_groups: int
    per_group: tuple[GroupDiagnostics, ...]
    config: SMIConfig
    feature_names: tuple[str, ...] = FEATURE_NAMES
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "d_intra": self.d_intra,
            "d_inter": self.d_inter,
            "smi": self.smi,
            "n_groups": self.n_groups,
            "per_group": [
                {"key": g.key, "size": g.size, "feature_std": list(g.feature_std)}
                for g in self.per_group
            ],
            "config": {"a": self.config.a, "b": self.config.b},
            "feature_names": list(self.feature_names),
            "warnings": list(self.warnings),
        }


def _validate_groups(groups) -> list[np.ndarray]:
    out = []
    width = None
    for i, g in enumerate(groups):
        arr = np.asarray(g, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValidationError(f"group {i} must be a non-empty 2-D slice, got shape {arr.shape}")
        if width is None:
            width = arr.shape[1]
        elif arr.shape[1] != width:
            raise ValidationError(
                f"group {i} has {arr.shape[1]} features, expected {width}"
            )
        out.append(arr)
    if not out:
        raise ValidationError("at least one group required")
    return out


def d_intra(groups) -> float:
    """Sum of per-feature population standard deviations over all groups."""
    total = 0.0
    for arr in _validate_groups(groups):
        for sigma in arr.std(axis=0):
            total += float(sigma)
    return total


def d_inter(groups) -> float:
    """Sum of absolute feature-mean differences over all group pairs.

    Exactly 0 for a single group (empty pair sum).
    """
    arrs = _validate_groups(groups)
    means = [arr.mean(axis=0) for arr in arrs]
    total = 0.0
    for i in range(len(means)):
        for j in range(i + 1, len(means)):
            for diff in np.abs(means[i] - means[j]):
                total += float(diff)
    return total


def smi(d_intra_value: float, d_inter_value: float, cfg: SMIConfig = SMIConfig()) -> float:
    """Matching index in [0, 1]; exactly 1 when the intra distance is 0."""
    if d_intra_value < 0 or d_inter_value < 0:
        raise ValidationError(
            f"distances must be non-negative, got d_intra={d_intra_value}, d_inter={d_inter_value}"
        )
    if d_intra_value == 0.0:
        return 1.0
    return 1.0 - math.exp(-cfg.b * (cfg.a * d_inter_value / d_intra_value))


def groups_from_labels(values: np.ndarray, labels) -> tuple[list, list[np.ndarray]]:
    """Split rows of ``values`` by label, keys ordered by first occurrence."""
    labels = list(labels)
    if len(labels) != values.shape[0]:
        raise ValidationError(
            f"{len(labels)} labels for {values.shape[0]} rows"
        )
    keys: list = []
    members: dict = {}
    for i, lab in enumerate(labels):
        if lab not in members:
            members[lab] = []
            keys.append(lab)
        members[lab].append(i)
    return keys, [values[np.array(members[k], dtype=int)] for k in keys]


def smi_report(features: FeatureTable, labels, cfg: SMIConfig = SMIConfig()) -> SMIReport:
    """Full matching-index report for a labeled feature table."""
    keys, groups = groups_from_labels(features.values, labels)
    di = d_intra(groups)
    dj = d_inter(groups)
    value = smi(di, dj, cfg)
    notes = []
    if len(groups) == 1:
        notes.append("single group: d_inter is 0 by the empty pair sum")
    notes.append("feature set is the builtin 7-feature vector (see feature_names)")
    per_group = tuple(
        GroupDiagnostics(str(k), g.shape[0], tuple(float(s) for s in g.std(axis=0)))
        for k, g in zip(keys, groups)
    )
    return SMIReport(
        d_intra=di,
        d_inter=dj,
        smi=value,
        n_groups=len(groups),
        per_group=per_group,
        config=cfg,
        feature_names=features.names,
        warnings=tuple(notes),
    )


def silhouette(features: FeatureTable, labels) -> float:
    """Mean silhouette value of the grouping, on feature vectors.

    Euclidean distances; per-point value is (b - a) / max(a, b) with a the
    mean intra-cluster distance (self excluded) and b the smallest mean
    distance to another cluster.  Points in singleton clusters contribute 0,
    and a 0/0 (all points identical) is guarded to 0.
    """
    x = features.values if isinstance(features, FeatureTable) else np.asarray(features, dtype=np.float64)
    keys, _ = groups_from_labels(x, labels)
    if len(keys) < 2:
        raise ValidationError(f"silhouette needs >= 2 clusters, got {len(keys)}")
    labels = list(labels)
    codes = np.array([keys.index(lab) for lab in labels], dtype=int)
    n = x.shape[0]

    diff = x[:, None, :] - x[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))

    n_clusters = len(keys)
    sizes = np.bincount(codes, minlength=n_clusters)
    # column c of sums holds each point's total distance to cluster c
    sums = np.zeros((n, n_clusters))
    for c in range(n_clusters):
        sums[:, c] = dist[:, codes == c].sum(axis=1)

    scores = np.zeros(n)
    for i in range(n):
        c = codes[i]
        if sizes[c] == 1:
            continue  # singleton contributes 0
        a = sums[i, c] / (sizes[c] - 1)
        b = min(sums[i, other] / sizes[other] for other in range(n_clusters) if other != c)
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())


def mse(y, yhat) -> float:
    y = np.asarray(y, dtype=np.float64).ravel()
    yhat = np.asarray(yhat, dtype=np.float64).ravel()
    if y.shape != yhat.shape:
        raise ValidationError(f"length mismatch: {y.shape[0]} vs {yhat.shape[0]}")
    if y.size == 0:
        raise ValidationError("empty input")
    d = y - yhat
    return float((d * d).mean())


def mae(y, yhat) -> float:
    y = np.asarray(y, dtype=np.float64).ravel()
    yhat = np.asarray(yhat, dtype=np.float64).ravel()
    if y.shape != yhat.shape:
        raise ValidationError(f"length mismatch: {y.shape[0]} vs {yhat.shape[0]}")
    if y.size == 0:
        raise ValidationError("empty input")
    return float(np.abs(y - yhat).mean())
