"""Synthetic scenario generation and the validation sweep."""

import numpy as np
import pytest

from tslx.io import ValidationError
from tslx.synthesis import (
    GRID_LEVELS,
    INTER_DELTA,
    INTRA_SIGMA,
    ScenarioSpec,
    generate_scenario,
    scenario_name,
    sweep_table,
    validation_sweep,
)


def test_knob_values_pinned():
    assert INTRA_SIGMA == {"small": 0.1, "median": 0.5, "large": 2.0, "zero": 0.0}
    assert INTER_DELTA == {"small": 0.5, "median": 2.0, "large": 8.0, "zero": 0.0}


def test_scenario_names():
    assert scenario_name("small", "large") == "sintra_linter"
    assert scenario_name("zero", "median") == "zintra_minter"
    assert scenario_name("median", "zero") == "mintra_zinter"


def test_spec_validation():
    with pytest.raises(ValidationError):
        ScenarioSpec(intra_level="huge")
    with pytest.raises(ValidationError):
        ScenarioSpec(intra_level="zero", inter_level="zero")
    with pytest.raises(ValidationError):
        ScenarioSpec(length=2)
    with pytest.raises(ValidationError):
        ScenarioSpec(n_groups=0)


def test_default_shapes_and_labels():
    patches, labels = generate_scenario(ScenarioSpec(seed=1))
    assert patches.shape == (100, 16)
    assert labels.tolist() == [g for g in range(5) for _ in range(20)]


def test_determinism():
    a, _ = generate_scenario(ScenarioSpec(seed=7))
    b, _ = generate_scenario(ScenarioSpec(seed=7))
    c, _ = generate_scenario(ScenarioSpec(seed=8))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_construction_is_level_plus_slope_plus_noise():
    # With zero noise the patch is exactly c_g + s_g * t.
    spec = ScenarioSpec(intra_level="zero", inter_level="median", seed=3)
    patches, labels = generate_scenario(spec)
    t = np.arange(spec.length)
    delta = INTER_DELTA["median"]
    for g in range(spec.n_groups):
        expect = g * delta + (g * delta / spec.length) * t
        for row in patches[labels == g]:
            assert np.array_equal(row, expect)


def test_zero_inter_clones_group_zero_patches():
    # The zero-inter extreme must make D_inter exactly 0, which the
    # generator achieves by giving every group the same patch multiset.
    patches, labels = generate_scenario(
        ScenarioSpec(intra_level="median", inter_level="zero", seed=9)
    )
    base = patches[labels == 0]
    for g in range(1, 5):
        assert np.array_equal(patches[labels == g], base)


def test_common_random_numbers_pair_the_grid():
    # Same seed, same group, same noise stream: scaling intra noise from
    # small to large multiplies deviations by exactly sigma_l / sigma_s.
    small, _ = generate_scenario(ScenarioSpec(intra_level="small", inter_level="median", seed=5))
    large, _ = generate_scenario(ScenarioSpec(intra_level="large", inter_level="median", seed=5))
    ratio = INTRA_SIGMA["large"] / INTRA_SIGMA["small"]
    base, _ = generate_scenario(ScenarioSpec(intra_level="zero", inter_level="median", seed=5))
    assert np.allclose((large - base), (small - base) * ratio, rtol=0.0, atol=1e-12)


def test_sweep_layout_and_extremes():
    rows = validation_sweep(ScenarioSpec(seed=42))
    names = [r.name for r in rows]
    assert len(rows) == 11
    assert names[:9] == [
        scenario_name(i, j) for i in GRID_LEVELS for j in GRID_LEVELS
    ]
    assert names[9:] == ["zintra_minter", "mintra_zinter"]
    by_name = {r.name: r for r in rows}
    assert by_name["zintra_minter"].smi == 1.0
    assert by_name["mintra_zinter"].smi == 0.0
    for r in rows:
        assert r.n_groups == 5
        assert -1.0 <= r.silhouette <= 1.0


def test_sweep_orderings_at_seed_42():
    rows = {(r.intra_level, r.inter_level): r for r in validation_sweep(ScenarioSpec(seed=42))}
    for inter in GRID_LEVELS:
        smis = [rows[(i, inter)].smi for i in GRID_LEVELS]
        sils = [rows[(i, inter)].silhouette for i in GRID_LEVELS]
        assert smis[0] > smis[1] > smis[2]
        assert sils[0] > sils[1] > sils[2]
    for intra in GRID_LEVELS:
        smis = [rows[(intra, j)].smi for j in GRID_LEVELS]
        sils = [rows[(intra, j)].silhouette for j in GRID_LEVELS]
        assert smis[0] < smis[1] < smis[2]
        assert sils[0] < sils[1] < sils[2]


def test_sweep_table_is_csv_ready():
    rows = validation_sweep(ScenarioSpec(seed=2))
    table = sweep_table(rows)
    assert table[0] == ["scenario", "intra_level", "inter_level", "smi", "silhouette", "n_groups"]
    assert len(table) == 12
    assert table[1][0] == "sintra_sinter"
    assert float(table[1][3]) == rows[0].smi
