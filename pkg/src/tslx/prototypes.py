"""Text-prototype extraction: PCA directions, k-means centroids, random rows,
provided words, and similarity expansion around provided words.

All methods return a PrototypeSet whose rows live in the vocabulary embedding
space, so any of them can feed the alignment analyses interchangeably. Every
method is deterministic given its seed; the PRNG stream order is part of each
method's contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .io import Matrix, TokenVocab, ValidationError, as_array, read_matrix
from .rng import Rng

METHODS = (
    "pca",
    "kmeans",
    "random",
    "provided_text",
    "similarity_expansion",
    "loaded_linear",
)

# Leading-space markers used by the common subword tokenizers. A word looked
# up against a real vocabulary usually exists only in its marked form.
_MARKERS = ("Ġ", "▁")


@dataclass(frozen=True)
class PrototypeSet:
    method: str
    prototypes: np.ndarray
    provenance: tuple[str, ...]
    unresolved: tuple[str, ...] = ()
    explained_variance: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown prototype method {self.method!r}")
        p = as_array(self.prototypes, "prototypes")
        if p.shape[0] < 1:
            raise ValidationError(f"prototypes must have K >= 1 rows, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValidationError("prototypes contain non-finite values")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "prototypes", p)
        object.__setattr__(self, "provenance", tuple(self.provenance))
        object.__setattr__(self, "unresolved", tuple(self.unresolved))
        if len(self.provenance) != p.shape[0]:
            raise ValidationError(
                f"provenance has {len(self.provenance)} entries for {p.shape[0]} prototypes"
            )
        if self.explained_variance is not None:
            object.__setattr__(self, "explained_variance", tuple(float(v) for v in self.explained_variance))

    @property
    def k(self) -> int:
        return self.prototypes.shape[0]

    @property
    def dim(self) -> int:
        return self.prototypes.shape[1]


def _token_index(vocab: TokenVocab) -> dict[str, int]:
    # Duplicate token strings keep the lowest index, matching the global
    # tie rule (ascending token index).
    index: dict[str, int] = {}
    for i, tok in enumerate(vocab.tokens):
        if tok not in index:
            index[tok] = i
    return index


def resolve_word(vocab: TokenVocab, word: str, index: dict[str, int] | None = None):
    """Map a word to vocabulary token indices.

    Returns (indices, note) or None when no tokenization exists. Tries the
    word verbatim, then its marker-prefixed variants, then a greedy
    longest-match split into sub-tokens (marker variants allowed only for
    the first piece). Matching is case-sensitive.
    """
    if index is None:
        index = _token_index(vocab)
    if word == "":
        return None
    for cand in (word, *(m + word for m in _MARKERS)):
        if cand in index:
            return (index[cand],), f"token {index[cand]} {cand!r}"

    pieces: list[int] = []
    names: list[str] = []
    pos = 0
    while pos < len(word):
        rest = word[pos:]
        hit = None
        for length in range(len(rest), 0, -1):
            prefix = rest[:length]
            cands = (prefix, *((m + prefix for m in _MARKERS) if pos == 0 else ()))
            for cand in cands:
                if cand in index:
                    hit = (cand, length)
                    break
            if hit:
                break
        if hit is None:
            return None
        pieces.append(index[hit[0]])
        names.append(hit[0])
        pos += hit[1]
    note = "mean of tokens " + ", ".join(f"{i} {n!r}" for i, n in zip(pieces, names))
    return tuple(pieces), note


def _word_embedding(emb: np.ndarray, indices: tuple[int, ...]) -> np.ndarray:
    if len(indices) == 1:
        return emb[indices[0]].copy()
    return emb[list(indices)].mean(axis=0)


def extract_pca(vocab_emb, k: int) -> PrototypeSet:
    """Top-k unit-norm principal directions of the row-centered embeddings.

    Directions are ordered by descending explained variance (population
    covariance convention). Each direction's sign is fixed so its
    largest-magnitude component is positive.
    """
    x = as_array(vocab_emb, "vocab_emb")
    v, d = x.shape
    if not 1 <= k <= min(v, d):
        raise ValidationError(f"need 1 <= k <= min(V, D) = {min(v, d)}, got k={k}")
    centered = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(s > s[0] * max(v, d) * np.finfo(np.float64).eps)) if s.size else 0
    if rank < k:
        raise ValidationError(f"rank deficiency: achievable rank {rank} < requested k={k}")
    directions = vt[:k].copy()
    for row in directions:
        if row[int(np.argmax(np.abs(row)))] < 0.0:
            row *= -1.0
    variance = (s[:k] ** 2) / v
    provenance = tuple(
        f"principal component {i}, explained variance {variance[i]:.6g}" for i in range(k)
    )
    return PrototypeSet(
        method="pca",
        prototypes=directions,
        provenance=provenance,
        explained_variance=tuple(float(t) for t in variance),
    )


def kmeans_objective(x: np.ndarray, centroids: np.ndarray) -> float:
    d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return float(d2.min(axis=1).sum())


def extract_kmeans(vocab_emb, k: int, seed: int, max_iter: int = 100, tol: float = 1e-6) -> PrototypeSet:
    """Lloyd k-means with squared-distance-weighted seeding.

    Stops when the largest centroid shift drops below tol or after max_iter
    rounds. An empty cluster is re-seeded to the point farthest from its
    assigned centroid; when several clusters empty in one round they take
    distinct points in ascending cluster order.
    """
    x = as_array(vocab_emb, "vocab_emb")
    v = x.shape[0]
    if not 1 <= k <= v:
        raise ValidationError(f"need 1 <= k <= V = {v}, got k={k}")

    rng = Rng(seed)
    chosen = [rng.randbelow(v)]
    d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        chosen.append(rng.choice_weighted(d2.tolist()))
        d2 = np.minimum(d2, ((x - x[chosen[-1]]) ** 2).sum(axis=1))
    centroids = x[chosen].astype(np.float64, copy=True)

    assign = np.zeros(v, dtype=np.int64)
    for _ in range(max_iter):
        dist2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = dist2.argmin(axis=1)
        own = dist2[np.arange(v), assign]
        new = centroids.copy()
        taken: set[int] = set()
        for c in range(k):
            members = assign == c
            if members.any():
                new[c] = x[members].mean(axis=0)
        for c in range(k):
            if not (assign == c).any():
                order = np.argsort(-own, kind="stable")
                pick = next(int(i) for i in order if int(i) not in taken)
                taken.add(pick)
                new[c] = x[pick]
        shift = float(np.sqrt(((new - centroids) ** 2).sum(axis=1)).max())
        centroids = new
        if shift < tol:
            break

    dist2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    assign = dist2.argmin(axis=1)
    sizes = np.bincount(assign, minlength=k)
    provenance = tuple(f"centroid {c} (n={int(sizes[c])})" for c in range(k))
    return PrototypeSet(method="kmeans", prototypes=centroids, provenance=provenance)


def extract_random(vocab_emb, k: int, seed: int) -> PrototypeSet:
    x = as_array(vocab_emb, "vocab_emb")
    v = x.shape[0]
    if not 1 <= k <= v:
        raise ValidationError(f"need 1 <= k <= V = {v}, got k={k}")
    indices = Rng(seed).sample_indices(v, k)
    provenance = tuple(f"vocabulary row {i}" for i in indices)
    return PrototypeSet(method="random", prototypes=x[indices], provenance=provenance)


def extract_provided(vocab: TokenVocab, vocab_emb, words) -> PrototypeSet:
    """One prototype per resolvable word; multi-token words are averaged.

    Words that no tokenization reaches are listed in the unresolved report
    rather than silently dropped. Raises only when nothing resolves.
    """
    words = list(words)
    if not words:
        raise ValidationError("words must be non-empty")
    emb = as_array(vocab_emb, "vocab_emb")
    if emb.shape[0] != len(vocab):
        raise ValidationError(
            f"vocab_emb shape {emb.shape} does not pair with vocab of {len(vocab)} tokens"
        )
    index = _token_index(vocab)
    rows = []
    provenance = []
    unresolved = []
    for word in words:
        hit = resolve_word(vocab, word, index)
        if hit is None:
            unresolved.append(word)
            continue
        indices, note = hit
        rows.append(_word_embedding(emb, indices))
        provenance.append(f"word {word!r}: {note}")
    if not rows:
        raise ValidationError(f"no word resolvable against the vocabulary: {words!r}")
    return PrototypeSet(
        method="provided_text",
        prototypes=np.array(rows, dtype=np.float64),
        provenance=tuple(provenance),
        unresolved=tuple(unresolved),
    )


def extract_similarity_expansion(vocab: TokenVocab, vocab_emb, words, k: int) -> PrototypeSet:
    """Provided-word prototypes expanded with each word's nearest tokens.

    Expansion is round-robin over the resolved words by descending cosine
    similarity, skipping token indices already used, until k prototypes are
    collected. Words that resolved to a single vocabulary token count as
    using that index from the start.
    """
    base = extract_provided(vocab, vocab_emb, words)
    if k < base.k:
        raise ValidationError(f"k={k} is smaller than the {base.k} resolved seed words")
    emb = as_array(vocab_emb, "vocab_emb")

    index = _token_index(vocab)
    taken: set[int] = set()
    for word in words:
        hit = resolve_word(vocab, word, index)
        if hit is not None and len(hit[0]) == 1:
            taken.add(hit[0][0])

    norms = np.sqrt((emb * emb).sum(axis=1))
    if np.any(norms == 0.0):
        bad = np.flatnonzero(norms == 0.0).tolist()
        raise ValidationError(f"vocab_emb has zero-norm rows at {bad}; cosine undefined")
    unit = emb / norms[:, None]
    seeds = base.prototypes
    seed_norms = np.sqrt((seeds * seeds).sum(axis=1))
    if np.any(seed_norms == 0.0):
        bad = np.flatnonzero(seed_norms == 0.0).tolist()
        raise ValidationError(f"resolved word embeddings have zero norm at rows {bad}")
    sims = (seeds / seed_norms[:, None]) @ unit.T
    rankings = np.argsort(-sims, axis=1, kind="stable")
    cursors = [0] * base.k

    rows = [seeds[i] for i in range(base.k)]
    provenance = list(base.provenance)
    while len(rows) < k:
        progressed = False
        for w in range(base.k):
            if len(rows) >= k:
                break
            while cursors[w] < len(vocab):
                cand = int(rankings[w, cursors[w]])
                cursors[w] += 1
                if cand in taken:
                    continue
                taken.add(cand)
                rows.append(emb[cand].copy())
                provenance.append(
                    f"expansion of {provenance[w].split(':')[0]}: token {cand} "
                    f"{vocab[cand]!r} (cosine {sims[w, cand]:.6g})"
                )
                progressed = True
                break
        if not progressed:
            raise ValidationError(
                f"vocabulary exhausted at {len(rows)} prototypes, cannot reach k={k}"
            )
    return PrototypeSet(
        method="similarity_expansion",
        prototypes=np.array(rows, dtype=np.float64),
        provenance=tuple(provenance),
        unresolved=base.unresolved,
    )


def load_linear(path) -> PrototypeSet:
    """A learned prototype matrix saved as TSLX, loaded verbatim."""
    m = read_matrix(path)
    provenance = tuple(f"loaded row {i}" for i in range(m.rows))
    return PrototypeSet(method="loaded_linear", prototypes=m.values, provenance=provenance)
