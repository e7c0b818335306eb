"""Random replacement of a fraction of embedding values.

Positions are value-level: a ratio r on an n x d matrix selects exactly
round-half-up(r * n * d) scalar positions without replacement. Replacement
draws come from a normal fit to all original entries by default, or from the
uniform range of the original entries. Unselected positions are bit-exact
copies of the input. The PRNG stream order is fixed: position selection
first, then all replacement draws.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .io import Matrix, ValidationError, as_array
from .rng import Rng

MODES = ("gaussian_fit", "uniform_range")


@dataclass(frozen=True)
class PerturbConfig:
    ratio: float
    seed: int
    mode: str = "gaussian_fit"

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise ValidationError(f"ratio must be in [0, 1], got {self.ratio}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class PerturbReport:
    n_selected: int
    n_total: int
    mode: str
    mean: float
    std: float
    low: float
    high: float

    def to_dict(self) -> dict:
        return {
            "n_selected": self.n_selected,
            "n_total": self.n_total,
            "mode": self.mode,
            "mean": self.mean,
            "std": self.std,
            "low": self.low,
            "high": self.high,
        }


def selection_count(ratio: float, n_total: int) -> int:
    """Half-up rounding of ratio * n_total, pinned for cross-platform stability."""
    return int(math.floor(ratio * n_total + 0.5))


def replace_values(emb, cfg: PerturbConfig):
    """Replace a seeded random fraction of scalar positions.

    Returns (perturbed, report). The report carries the selected count and
    the fitted replacement distribution. A zero fitted sigma under
    gaussian_fit degrades to the uniform range of the data (a constant) with
    a warning.
    """
    x = as_array(emb, "emb").copy()
    n_total = x.size
    n_sel = selection_count(cfg.ratio, n_total)
    rng = Rng(cfg.seed)
    positions = rng.sample_indices(n_total, n_sel)

    mu = float(x.mean())
    sigma = float(x.std())
    lo = float(x.min())
    hi = float(x.max())

    mode = cfg.mode
    if mode == "gaussian_fit" and sigma == 0.0:
        warnings.warn(
            "all entries identical (fitted sigma is 0); falling back to the uniform range",
            stacklevel=2,
        )
        mode = "uniform_range"
    if n_sel > 0:
        if mode == "gaussian_fit":
            draws = np.array(rng.normals(n_sel)) * sigma + mu
        else:
            draws = lo + (hi - lo) * np.array(rng.uniforms(n_sel))
        flat = x.reshape(-1)
        flat[positions] = draws

    report = PerturbReport(
        n_selected=n_sel,
        n_total=n_total,
        mode=mode,
        mean=mu,
        std=sigma,
        low=lo,
        high=hi,
    )
    if isinstance(emb, Matrix):
        return Matrix(values=x, dtype=emb.dtype, col_names=emb.col_names), report
    return Matrix(values=x), report
