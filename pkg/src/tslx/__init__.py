"""Toolkit for quantifying how well time-series patch embeddings align with
language tokens: matching-index metrics, prototype extraction, similarity and
attention analytics, and bit-exact numerical file formats.
"""

from .io import (
    DatasetDescriptor,
    FormatError,
    Matrix,
    TokenVocab,
    TslxError,
    ValidationError,
    WordGroups,
    check_paired,
    read_grouping,
    read_matrix,
    read_matrix_csv,
    read_vocab,
    read_word_groups,
    write_grouping,
    write_matrix,
    write_matrix_csv,
    write_vocab,
    write_word_groups,
)
from .rng import Rng
from .features import FEATURE_NAMES, FeatureTable, extract_features, patch_band_stats
from .metrics import (
    SMIConfig,
    SMIReport,
    d_inter,
    d_intra,
    groups_from_labels,
    mae,
    mse,
    silhouette,
    smi,
    smi_report,
)
from .synthesis import (
    INTER_DELTA,
    INTRA_SIGMA,
    ScenarioSpec,
    SweepRow,
    generate_scenario,
    scenario_name,
    sweep_table,
    validation_sweep,
)
from .prototypes import (
    PrototypeSet,
    extract_kmeans,
    extract_pca,
    extract_provided,
    extract_random,
    extract_similarity_expansion,
    load_linear,
    resolve_word,
)
from .align import (
    SimilaritySummary,
    SmiKSweep,
    TokenSetGrouping,
    cosine_matrix,
    group_by_token_sets,
    nearest_tokens,
    selected_words_similarity,
    smi_vs_k_sweep,
)
from .attention import (
    AttentionView,
    DominanceReport,
    LinkageReport,
    export_heatmap,
    import_heatmap,
    modality_linkage,
    prototype_dominance,
    top_k_attended,
)
from .perturb import PerturbConfig, PerturbReport, replace_values, selection_count
from .wordlists import load_bundled, related_words, unrelated_words

__version__ = "0.1.0"
