"""Bundled selected-word lists: 80 time-series-related and 80 unrelated words.

The related side has five categories, the unrelated side seven. "from" and
"to" appear on both sides (Others and Prepositions); the duplication is part
of the published tables and is preserved, so downstream heatmaps carry
duplicate columns.
"""

from __future__ import annotations

from .io import WordGroups

RELATED_GROUPS: tuple[tuple[str, tuple[str, ...]], ...] = (
    (
        "Characteristics",
        (
            "autocorrelation", "seasonality", "stationarity", "lag",
            "decomposition", "anomaly", "cycle", "variance", "covariance",
            "frequency",
        ),
    ),
    (
        "Changes",
        (
            "increase", "decrease", "grow", "decline", "rise", "fall",
            "accumulate", "contraction", "up", "down",
        ),
    ),
    (
        "Degree of changes",
        ("rapid", "steady", "abrupt", "gradual", "slow"),
    ),
    (
        "Number",
        (
            "1", "one", "2", "two", "3", "three", "4", "four", "5", "five",
            "6", "six", "7", "seven", "8", "eight", "9", "nine", "0", "zero",
            "ten", "hundred", "thousand", "million", "billion",
        ),
    ),
    (
        "Others",
        (
            "trend", "exponential", "smoothing", "regression", "prediction",
            "forecast", "pattern", "measure", "analysis", "signal", "time",
            "sequence", "interval", "noise", "metrics", "statistics",
            "quantify", "variable", "process", "observation", "algorithm",
            "feature", "dataset", "parameter", "function", "series",
            "temporal", "step", "from", "to",
        ),
    ),
)

UNRELATED_GROUPS: tuple[tuple[str, tuple[str, ...]], ...] = (
    (
        "Pronouns",
        (
            "I", "you", "he", "she", "it", "we", "they", "me", "him", "her",
            "Those", "These", "His", "Yours", "Hers",
        ),
    ),
    (
        "Prepositions",
        ("of", "in", "for", "on", "at", "with", "by", "from", "about", "to"),
    ),
    (
        "Cities",
        (
            "London", "Beijing", "Tokyo", "Sydney", "Paris", "Seoul",
            "Washington", "Berlin", "Singapore", "Rome",
        ),
    ),
    (
        "Companies",
        ("Apple", "Google", "Amazon", "Microsoft", "Meta"),
    ),
    (
        "Common Names",
        (
            "John", "Mary", "David", "Sarah", "Michael", "Jessica", "James",
            "Emma", "Robert", "Olivia",
        ),
    ),
    (
        "Common Nouns",
        (
            "book", "phone", "city", "child", "game", "weather", "news",
            "people", "person", "house", "car", "school", "dog", "cat",
            "tree", "river", "mountain", "sun", "food", "water",
        ),
    ),
    (
        "Common Adjectives",
        (
            "good", "new", "first", "last", "long", "great", "little", "odd",
            "big", "angry",
        ),
    ),
)

RELATED_CATEGORY_NAMES: tuple[str, ...] = tuple(n for n, _ in RELATED_GROUPS)
UNRELATED_CATEGORY_NAMES: tuple[str, ...] = tuple(n for n, _ in UNRELATED_GROUPS)


def load_bundled() -> WordGroups:
    """All 12 categories as one WordGroups, related categories first."""
    return WordGroups(groups=RELATED_GROUPS + UNRELATED_GROUPS)


def related_words() -> tuple[str, ...]:
    return tuple(w for _, ws in RELATED_GROUPS for w in ws)


def unrelated_words() -> tuple[str, ...]:
    return tuple(w for _, ws in UNRELATED_GROUPS for w in ws)
