"""Embedding-space alignment analyses: cosine similarity, nearest-token
labeling, selected-word heatmaps, ordered top-k token-set grouping, and the
SMI-versus-k sweep.

Every ranking in this module is a deterministic total order: similarity
descending, token index ascending on ties.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import extract_features
from .io import TokenVocab, ValidationError, as_array
from .metrics import SMIConfig, d_inter, d_intra, smi
from .prototypes import _token_index, _word_embedding, resolve_word
from .wordlists import RELATED_CATEGORY_NAMES


def cosine_matrix(a, b) -> np.ndarray:
    """Pairwise cosine similarity, rows of a against rows of b."""
    am = as_array(a, "A")
    bm = as_array(b, "B")
    if am.shape[1] != bm.shape[1]:
        raise ValidationError(f"dimension mismatch: A is {am.shape}, B is {bm.shape}")
    na = np.sqrt((am * am).sum(axis=1))
    nb = np.sqrt((bm * bm).sum(axis=1))
    for name, norms in (("A", na), ("B", nb)):
        if np.any(norms == 0.0):
            bad = np.flatnonzero(norms == 0.0).tolist()
            raise ValidationError(f"zero-norm rows in {name} at indices {bad}; cosine undefined")
    return (am / na[:, None]) @ (bm / nb[:, None]).T


def _rankings(emb, vocab_emb, vocab: TokenVocab):
    ve = as_array(vocab_emb, "vocab_emb")
    if ve.shape[0] != len(vocab):
        raise ValidationError(
            f"vocab_emb shape {ve.shape} does not pair with vocab of {len(vocab)} tokens"
        )
    sims = cosine_matrix(emb, ve)
    # argsort of the negated matrix: similarity descending, stable kind keeps
    # equal similarities in ascending token index order.
    order = np.argsort(-sims, axis=1, kind="stable")
    return sims, order


def nearest_tokens(emb, vocab_emb, vocab: TokenVocab, k: int):
    """Per input row, the k most cosine-similar vocabulary tokens.

    Returns a list of rows, each a list of (token_index, token, similarity)
    in rank order.
    """
    if not 1 <= k <= len(vocab):
        raise ValidationError(f"need 1 <= k <= V = {len(vocab)}, got k={k}")
    sims, order = _rankings(emb, vocab_emb, vocab)
    out = []
    for r in range(sims.shape[0]):
        picks = order[r, :k]
        out.append([(int(j), vocab[int(j)], float(sims[r, j])) for j in picks])
    return out


@dataclass(frozen=True)
class SimilaritySummary:
    group_names: tuple[str, ...]
    word_labels: tuple[str, ...]
    word_groups: tuple[str, ...]
    group_means: np.ndarray
    related_mean: np.ndarray
    unrelated_mean: np.ndarray
    diff: np.ndarray
    mean_diff: float
    unresolved: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "similarity": "cosine",
            "group_names": list(self.group_names),
            "group_means": [[float(v) for v in row] for row in self.group_means],
            "related_mean": [float(v) for v in self.related_mean],
            "unrelated_mean": [float(v) for v in self.unrelated_mean],
            "diff": [float(v) for v in self.diff],
            "mean_diff": float(self.mean_diff),
            "unresolved": list(self.unresolved),
        }


def selected_words_similarity(emb, vocab: TokenVocab, vocab_emb, groups, related_names=None):
    """Cosine heatmap of embeddings against the selected-word lists.

    Columns follow the stored group order (for the bundled lists the related
    block comes first). The summary carries per-row means per category, the
    related and unrelated block means, and their difference. Words with no
    tokenization are reported, not dropped silently.
    """
    if related_names is None:
        related_names = RELATED_CATEGORY_NAMES
    related_set = set(related_names)
    ve = as_array(vocab_emb, "vocab_emb")
    if ve.shape[0] != len(vocab):
        raise ValidationError(
            f"vocab_emb shape {ve.shape} does not pair with vocab of {len(vocab)} tokens"
        )
    index = _token_index(vocab)
    cols = []
    labels: list[str] = []
    col_group: list[str] = []
    unresolved = []
    for name, words in groups.groups:
        for word in words:
            hit = resolve_word(vocab, word, index)
            if hit is None:
                unresolved.append(word)
                continue
            cols.append(_word_embedding(ve, hit[0]))
            labels.append(word)
            col_group.append(name)
    if not cols:
        raise ValidationError("no selected word resolvable against the vocabulary")
    word_emb = np.array(cols, dtype=np.float64)
    heatmap = cosine_matrix(emb, word_emb)

    names = tuple(groups.names)
    col_group_arr = np.array(col_group)
    group_means = np.column_stack([
        heatmap[:, col_group_arr == name].mean(axis=1) if (col_group_arr == name).any()
        else np.full(heatmap.shape[0], np.nan)
        for name in names
    ])
    related_cols = np.isin(col_group_arr, list(related_set))
    if not related_cols.any() or related_cols.all():
        raise ValidationError(
            "need at least one related and one unrelated column to form the contrast"
        )
    related_mean = heatmap[:, related_cols].mean(axis=1)
    unrelated_mean = heatmap[:, ~related_cols].mean(axis=1)
    diff = related_mean - unrelated_mean
    summary = SimilaritySummary(
        group_names=names,
        word_labels=tuple(labels),
        word_groups=tuple(col_group),
        group_means=group_means,
        related_mean=related_mean,
        unrelated_mean=unrelated_mean,
        diff=diff,
        mean_diff=float(diff.mean()),
        unresolved=tuple(unresolved),
    )
    return heatmap, summary


@dataclass(frozen=True)
class TokenSetGrouping:
    k: int
    keys: tuple[tuple[int, ...], ...]
    membership: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.keys) != len(self.membership):
            raise ValidationError("keys and membership must align")
        seen: list[int] = []
        for key, members in zip(self.keys, self.membership):
            if len(key) != self.k or len(set(key)) != self.k:
                raise ValidationError(f"key {key} is not an ordered {self.k}-tuple of distinct tokens")
            if not members:
                raise ValidationError("empty group")
            seen.extend(members)
        if sorted(seen) != list(range(len(seen))):
            raise ValidationError("membership does not partition the patch indices")

    @property
    def n_groups(self) -> int:
        return len(self.keys)

    def labels(self) -> list[int]:
        out = [0] * sum(len(m) for m in self.membership)
        for g, members in enumerate(self.membership):
            for i in members:
                out[i] = g
        return out


def _grouping_from_order(order: np.ndarray, k: int) -> TokenSetGrouping:
    keys: list[tuple[int, ...]] = []
    members: list[list[int]] = []
    where: dict[tuple[int, ...], int] = {}
    for i in range(order.shape[0]):
        key = tuple(int(j) for j in order[i, :k])
        g = where.get(key)
        if g is None:
            g = len(keys)
            where[key] = g
            keys.append(key)
            members.append([])
        members[g].append(i)
    return TokenSetGrouping(k=k, keys=tuple(keys), membership=tuple(tuple(m) for m in members))


def group_by_token_sets(aligned_emb, vocab_emb, vocab: TokenVocab, k: int) -> TokenSetGrouping:
    """Group patches by their ordered nearest-token k-tuple.

    Groups appear in first-occurrence order over patch index, so the result
    is deterministic and the k+1 grouping always refines the k grouping.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if k > len(vocab):
        raise ValidationError(f"k={k} exceeds vocabulary size {len(vocab)}")
    _, order = _rankings(aligned_emb, vocab_emb, vocab)
    return _grouping_from_order(order, k)


@dataclass(frozen=True)
class SmiKRow:
    k: int
    n_groups: int
    smi: float


@dataclass(frozen=True)
class SmiKSweep:
    rows: tuple[SmiKRow, ...]
    first_k_full: int | None

    def table(self) -> list[list[str]]:
        out = [["k", "n_groups", "smi"]]
        for r in self.rows:
            out.append([str(r.k), str(r.n_groups), f"{r.smi:.17g}"])
        return out


def smi_vs_k_sweep(aligned_emb, vocab_emb, vocab: TokenVocab, raw_patches, k_max: int,
                   cfg: SMIConfig = SMIConfig()) -> SmiKSweep:
    """SMI of the token-set grouping for every k up to k_max.

    Features of the raw patches are extracted once and sliced per grouping;
    the token ranking is computed once at k_max and prefix-sliced, which is
    what makes the refinement property structural. first_k_full is the
    smallest k whose SMI is exactly 1, if any.
    """
    patches = as_array(raw_patches, "raw_patches")
    emb = as_array(aligned_emb, "aligned_emb")
    if patches.shape[0] != emb.shape[0]:
        raise ValidationError(
            f"raw_patches has {patches.shape[0]} rows but aligned_emb has {emb.shape[0]}"
        )
    if k_max < 1:
        raise ValidationError(f"k_max must be >= 1, got {k_max}")
    if k_max > len(vocab):
        raise ValidationError(f"k_max={k_max} exceeds vocabulary size {len(vocab)}")
    feats = extract_features(patches).values
    _, order = _rankings(emb, vocab_emb, vocab)

    rows = []
    first_k_full = None
    for k in range(1, k_max + 1):
        grouping = _grouping_from_order(order, k)
        parts = [feats[list(m)] for m in grouping.membership]
        value = smi(d_intra(parts), d_inter(parts), cfg)
        if value == 1.0 and first_k_full is None:
            first_k_full = k
        rows.append(SmiKRow(k=k, n_groups=grouping.n_groups, smi=value))
    return SmiKSweep(rows=tuple(rows), first_k_full=first_k_full)
