"""Canonical per-patch statistical features.

Every patch is summarized by a fixed 7-feature vector; the fixed order and
definitions are what make matching-index values comparable across runs:

====================  =====================================================
mean                  arithmetic mean
std_population        population standard deviation (divide by L)
autocorr_lag1         sum((x_t - xbar)(x_{t+1} - xbar)) / sum((x_t - xbar)^2),
                      0 when the patch has zero variance
n_neg_turning         strict interior local minima: x_t < x_{t-1} and x_t < x_{t+1}
n_pos_turning         strict interior local maxima
mean_abs_diff         mean |x_{t+1} - x_t|
trend_slope           least-squares slope of x against t = 0..L-1
====================  =====================================================

Plateaus produce no turning point (strict inequalities).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .io import Matrix, ValidationError, as_array

FEATURE_NAMES = (
    "mean",
    "std_population",
    "autocorr_lag1",
    "n_neg_turning",
    "n_pos_turning",
    "mean_abs_diff",
    "trend_slope",
)

N_FEATURES = len(FEATURE_NAMES)


@dataclass(frozen=True)
class FeatureTable:
    """n_patches x 7 feature matrix in the canonical column order."""

    values: np.ndarray
    names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != N_FEATURES:
            raise ValidationError(
                f"feature table must be n x {N_FEATURES}, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise ValidationError("feature table contains non-finite values")
        if tuple(self.names) != FEATURE_NAMES:
            raise ValidationError(f"feature names must be {FEATURE_NAMES}")
        object.__setattr__(self, "values", arr)

    @property
    def n_patches(self) -> int:
        return self.values.shape[0]

    def to_matrix(self) -> Matrix:
        return Matrix(self.values, dtype="f64", col_names=self.names)


def extract_features(patches) -> FeatureTable:
    """Compute the 7 canonical features for every row of a patches matrix.

    Patch length must be at least 3 (turning points and autocorrelation need
    interior points).
    """
    x = as_array(patches, "patches")
    n, length = x.shape
    if length < 3:
        raise ValidationError(f"patch length must be >= 3, got {length}")

    mean = x.mean(axis=1)
    std = x.std(axis=1)  # population

    centered = x - mean[:, None]
    denom = (centered * centered).sum(axis=1)
    numer = (centered[:, :-1] * centered[:, 1:]).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        autocorr = np.where(denom == 0.0, 0.0, numer / np.where(denom == 0.0, 1.0, denom))

    interior = x[:, 1:-1]
    n_neg = ((interior < x[:, :-2]) & (interior < x[:, 2:])).sum(axis=1)
    n_pos = ((interior > x[:, :-2]) & (interior > x[:, 2:])).sum(axis=1)

    mad = np.abs(np.diff(x, axis=1)).mean(axis=1)

    t = np.arange(length, dtype=np.float64)
    tc = t - t.mean()
    slope = (x @ tc) / (tc @ tc)

    table = np.column_stack([
        mean,
        std,
        autocorr,
        n_neg.astype(np.float64),
        n_pos.astype(np.float64),
        mad,
        slope,
    ])
    return FeatureTable(table)


def patch_band_stats(patches) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise mean and population std across patches at each time index.

    This is the data behind mean-and-band plots of a patch group.
    """
    x = as_array(patches, "patches")
    return x.mean(axis=0), x.std(axis=0)
