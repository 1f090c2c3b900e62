import numpy as np
import pytest

from tastic.datagen import PRESETS, ClusterRecipe, GeneratorSpec, generate, preset

GRID_SIZES = {
    "G1_1": (30, 3), "G1_2": (45, 4), "G1_3": (75, 7),
    "G2_1": (30, 3), "G2_2": (50, 5), "G2_3": (90, 9),
    "G3_1": (90, 7), "G3_2": (60, 5), "G3_3": (40, 4),
}


@pytest.mark.parametrize("name", sorted(GRID_SIZES))
def test_grid_sizes(name):
    series, labels = generate(preset(name, seed=1))
    n, k = GRID_SIZES[name]
    assert len(series) == n and labels.k == k
    assert all(len(s.values) == 12 for s in series)


def test_application_preset():
    series, labels = generate(preset("APP"))
    assert len(series) == 202 and labels.k == 7
    assert [labels.assignments.count(g) for g in range(1, 8)] == [51, 62, 19, 30, 9, 26, 5]
    assert "APP" in PRESETS


def test_unknown_preset():
    with pytest.raises(KeyError):
        preset("G4_1")


def test_deterministic_and_seed_sensitive():
    a, la = generate(preset("G2_2", seed=5))
    b, lb = generate(preset("G2_2", seed=5))
    c, _ = generate(preset("G2_2", seed=6))
    assert la == lb
    assert all(np.array_equal(x.values, y.values) and x.id == y.id for x, y in zip(a, b))
    assert not all(np.array_equal(x.values, y.values) for x, y in zip(a, c))


def test_recipe_counts_and_ids():
    spec = GeneratorSpec((ClusterRecipe(3, level=1.0), ClusterRecipe(2, level=2.0)), T=6, shift_range=0)
    series, labels = generate(spec)
    assert labels.assignments == (1, 1, 1, 2, 2)
    assert [s.id for s in series] == ["s0001", "s0002", "s0003", "s0004", "s0005"]
    assert spec.n == 5 and spec.n_clusters == 2


def test_noiseless_members_are_shifted_windows():
    recipe = ClusterRecipe(20, level=3.0, trend=0.5, amplitude=1.0, period=5.0)
    spec = GeneratorSpec((recipe,), T=10, shift_range=3, seed=2)
    series, _ = generate(spec)
    u = np.arange(13.0)
    full = 3.0 + 0.5 * u + np.sin(2 * np.pi * u / 5.0)
    windows = [full[s:s + 10] for s in range(4)]
    for s in series:
        assert any(np.allclose(s.values, w, rtol=0, atol=1e-12) for w in windows)


def test_spec_validation():
    with pytest.raises(ValueError):
        ClusterRecipe(0, level=1.0)
    with pytest.raises(ValueError):
        ClusterRecipe(1, level=1.0, noise_sd=-1)
    with pytest.raises(ValueError):
        GeneratorSpec((), T=5)
    with pytest.raises(ValueError):
        GeneratorSpec((ClusterRecipe(1, level=0.0),), T=5, shift_range=5)


def test_from_dict_round_trip():
    d = {"recipes": [{"count": 2, "level": 7.0, "noise_sd": 0.1}], "T": 8, "seed": 4, "name": "toy"}
    spec = GeneratorSpec.from_dict(d)
    assert spec.T == 8 and spec.seed == 4 and spec.recipes[0].count == 2
    assert spec.with_seed(9).seed == 9
