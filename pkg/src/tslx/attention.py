"""Top-k structure of attention matrices: per-row rankings, column dominance,
and prompt/patch modality linkage for self-attention over concatenated
prompt and patch tokens.

An AttentionView accepts any non-negative matrix. Row-stochasticity is
opt-in metadata: declared views are validated, undeclared views whose rows
do not sum to 1 only warn, since pre-softmax exports are legitimate inputs.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .io import ValidationError, as_array

ROW_SUM_TOL = 1e-4


@dataclass(frozen=True)
class AttentionView:
    weights: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    boundary: int | None = None
    row_stochastic: bool = False

    def __post_init__(self):
        w = as_array(self.weights, "weights")
        if np.any(w < 0.0):
            r, c = np.argwhere(w < 0.0)[0]
            raise ValidationError(f"attention weights must be non-negative; ({r},{c}) is {w[r, c]}")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        q, k = w.shape
        if len(self.row_labels) != q or len(self.col_labels) != k:
            raise ValidationError(
                f"labels ({len(self.row_labels)} rows, {len(self.col_labels)} cols) "
                f"do not match weights shape {w.shape}"
            )
        if self.boundary is not None and not 0 < self.boundary < k:
            raise ValidationError(f"boundary must split the columns, got {self.boundary} for K={k}")
        sums = w.sum(axis=1)
        off = np.abs(sums - 1.0)
        if self.row_stochastic:
            if np.any(off > ROW_SUM_TOL):
                r = int(np.argmax(off))
                raise ValidationError(
                    f"declared row-stochastic but row {r} sums to {sums[r]:.6g}"
                )
        elif np.any(off > ROW_SUM_TOL):
            warnings.warn(
                "attention rows do not sum to 1; treating as unnormalized weights",
                stacklevel=2,
            )

    @property
    def n_rows(self) -> int:
        return self.weights.shape[0]

    @property
    def n_cols(self) -> int:
        return self.weights.shape[1]


def _top_indices(weights: np.ndarray, k: int) -> np.ndarray:
    # Weight descending, column index ascending on ties.
    return np.argsort(-weights, axis=1, kind="stable")[:, :k]


def top_k_attended(v: AttentionView, k: int):
    """Per row, the k heaviest columns as (col_index, label, weight)."""
    if not 1 <= k <= v.n_cols:
        raise ValidationError(f"need 1 <= k <= K = {v.n_cols}, got k={k}")
    tops = _top_indices(v.weights, k)
    out = []
    for r in range(v.n_rows):
        out.append([(int(j), v.col_labels[int(j)], float(v.weights[r, j])) for j in tops[r]])
    return out


@dataclass(frozen=True)
class DominanceReport:
    counts: tuple[int, ...]
    never_fraction: float
    top_column: int
    top_column_share: float

    def to_dict(self) -> dict:
        return {
            "counts": list(self.counts),
            "never_fraction": self.never_fraction,
            "top_column": self.top_column,
            "top_column_share": self.top_column_share,
        }


def prototype_dominance(v: AttentionView, k: int) -> DominanceReport:
    """How concentrated the rows' top-k choices are across columns.

    counts[j] is the number of rows whose top-k contains column j. The share
    of the most frequent column is counts.max()/Q; never_fraction is the
    fraction of columns appearing in no row's top-k.
    """
    if not 1 <= k <= v.n_cols:
        raise ValidationError(f"need 1 <= k <= K = {v.n_cols}, got k={k}")
    tops = _top_indices(v.weights, k)
    counts = np.zeros(v.n_cols, dtype=np.int64)
    for r in range(v.n_rows):
        counts[tops[r]] += 1
    top_column = int(np.argmax(counts))
    return DominanceReport(
        counts=tuple(int(c) for c in counts),
        never_fraction=float(np.count_nonzero(counts == 0) / v.n_cols),
        top_column=top_column,
        top_column_share=float(counts[top_column] / v.n_rows),
    )


@dataclass(frozen=True)
class LinkageReport:
    prompt_rows_topk_in_prompt_frac: float
    patch_rows_topk_in_patch_frac: float
    first_column_mass_mean: float
    cross_modal_topk_frac: float

    def to_dict(self) -> dict:
        return {
            "prompt_rows_topk_in_prompt_frac": self.prompt_rows_topk_in_prompt_frac,
            "patch_rows_topk_in_patch_frac": self.patch_rows_topk_in_patch_frac,
            "first_column_mass_mean": self.first_column_mass_mean,
            "cross_modal_topk_frac": self.cross_modal_topk_frac,
        }


def modality_linkage(v: AttentionView, k: int) -> LinkageReport:
    """Where each modality's top-k attention lands relative to the boundary.

    Requires a square self-attention view: the column boundary is reused to
    split the rows into the prompt block [0, boundary) and the patch block.
    Fractions are pooled over each block's top-k entries, so each block's
    within fraction plus its share of cross_modal_topk_frac is exactly 1.
    """
    if v.boundary is None:
        raise ValidationError("modality_linkage needs a view with a boundary")
    if v.n_rows != v.n_cols:
        raise ValidationError(
            f"modality_linkage needs square self-attention, got {v.n_rows}x{v.n_cols}"
        )
    if not 1 <= k <= v.n_cols:
        raise ValidationError(f"need 1 <= k <= K = {v.n_cols}, got k={k}")
    b = v.boundary
    tops = _top_indices(v.weights, k)
    in_prompt = tops < b
    prompt_within = float(in_prompt[:b].mean())
    patch_within = float((~in_prompt[b:]).mean())
    cross = float(np.concatenate([~in_prompt[:b], in_prompt[b:]]).mean())
    return LinkageReport(
        prompt_rows_topk_in_prompt_frac=prompt_within,
        patch_rows_topk_in_patch_frac=patch_within,
        first_column_mass_mean=float(v.weights[:, 0].mean()),
        cross_modal_topk_frac=cross,
    )


def export_heatmap(v: AttentionView, path) -> None:
    """CSV with column labels on the first row and row labels in the first
    cell of each data row; values at full float64 precision."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["", *v.col_labels])
        for r in range(v.n_rows):
            writer.writerow([v.row_labels[r], *(f"{x:.17g}" for x in v.weights[r])])


def import_heatmap(path, boundary: int | None = None, row_stochastic: bool = False) -> AttentionView:
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:1] != [""]:
        raise ValidationError(f"{path}: not a heatmap CSV (missing label header)")
    col_labels = tuple(rows[0][1:])
    row_labels = []
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(col_labels) + 1:
            raise ValidationError(
                f"{path}:{lineno}: expected {len(col_labels) + 1} cells, got {len(row)}"
            )
        row_labels.append(row[0])
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: non-numeric cell ({exc})") from None
    if not values:
        raise ValidationError(f"{path}: heatmap has no data rows")
    return AttentionView(
        weights=np.array(values, dtype=np.float64),
        row_labels=tuple(row_labels),
        col_labels=col_labels,
        boundary=boundary,
        row_stochastic=row_stochastic,
    )
