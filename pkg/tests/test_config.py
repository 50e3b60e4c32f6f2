import json

import pytest

from uwbench.augment import AugmentationConfig
from uwbench.config import (
    DEFAULT_DELTA_THRESHOLDS,
    EvalConfig,
    SimulationConfig,
    load_config_file,
    merge_overrides,
)
from uwbench.errors import InvalidConfig, NonPositiveScale


def test_simulation_defaults(table):
    config = SimulationConfig()
    assert config.color_space == "srgb"
    assert config.depth_kind == "range"
    assert config.resolve_classes(table) == table.classes


def test_from_mapping_round_trip():
    config = SimulationConfig.from_mapping({
        "seed": 9,
        "water_classes": ["I", "3C"],
        "augment": {"enabled": True, "gain_min": 0.8, "gain_max": 1.2,
                    "grayscale_prob": 0.0, "order": "before"},
        "intrinsics": {"fx": 10.0, "fy": 10.0, "cx": 1.0, "cy": 1.0},
        "depth_kind": "planar",
    })
    assert config.seed == 9
    assert config.water_classes == ("I", "3C")
    assert config.augment == AugmentationConfig(0.8, 1.2, 0.0)
    assert config.augment_order == "before"
    assert config.intrinsics.fx == 10.0


def test_augment_disabled_block():
    config = SimulationConfig.from_mapping({"augment": {"enabled": False}})
    assert config.augment is None


@pytest.mark.parametrize("mapping", [
    {"bogus": 1},
    {"color_space": "cmyk"},
    {"depth_kind": "planar"},  # no intrinsics
    {"seed": -1},
    {"water_classes": []},
    {"meters_per_unit": 0.0},
    {"png_compress_level": 12},
    {"workers": 0},
    {"augment": {"nope": 1}},
    {"intrinsics": {"fx": 1.0}},
])
def test_invalid_simulation_config(mapping):
    with pytest.raises((InvalidConfig, TypeError)):
        SimulationConfig.from_mapping(mapping)


def test_digest_tracks_content_fields_only(table, tmp_path):
    base = SimulationConfig(seed=1)
    assert base.digest(table) == SimulationConfig(seed=1).digest(table)
    assert base.digest(table) != SimulationConfig(seed=2).digest(table)
    assert base.digest(table) != SimulationConfig(
        seed=1, water_classes=("I",)).digest(table)
    assert base.digest(table) != SimulationConfig(
        seed=1, augment=AugmentationConfig()).digest(table)
    assert base.digest(table) != SimulationConfig(
        seed=1, color_space="linear").digest(table)
    # workers do not change rendered content
    assert base.digest(table) == SimulationConfig(seed=1, workers=8).digest(table)
    # table content is part of the digest
    from uwbench.water import CoefficientTable, WaterCoefficients

    other = CoefficientTable(entries={
        "I": WaterCoefficients("I", beta=(0.9, 0.9, 0.9), veil=(0.1, 0.1, 0.1)),
    })
    assert SimulationConfig(seed=1, water_classes=("I",)).digest(table) != \
        SimulationConfig(seed=1, water_classes=("I",)).digest(other)


def test_resolve_classes_validates(table):
    from uwbench.errors import UnknownWaterClass

    config = SimulationConfig(water_classes=("I", "XZ"))
    with pytest.raises(UnknownWaterClass):
        config.resolve_classes(table)


def test_eval_defaults():
    config = EvalConfig()
    assert config.delta_thresholds == DEFAULT_DELTA_THRESHOLDS
    assert config.delta_thresholds == (1.25, 1.5625, 1.953125)
    assert config.silog_lambda == 0.5
    assert config.max_depth is None
    assert not config.median_align


@pytest.mark.parametrize("kwargs,err", [
    ({"unit_scale": 0.0}, NonPositiveScale),
    ({"unit_scale": -2.0}, NonPositiveScale),
    ({"max_depth": 0.0}, InvalidConfig),
    ({"delta_thresholds": (1.0,)}, InvalidConfig),
    ({"delta_thresholds": ()}, InvalidConfig),
    ({"silog_lambda": 1.5}, InvalidConfig),
    ({"pooling": "median"}, InvalidConfig),
])
def test_invalid_eval_config(kwargs, err):
    with pytest.raises(err):
        EvalConfig(**kwargs)


def test_load_config_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({
        "coefficients": "table.csv",
        "simulate": {"seed": 3},
        "eval": {"unit_scale": 0.001},
    }))
    doc = load_config_file(path)
    assert doc.coefficients == "table.csv"
    assert doc.simulate == {"seed": 3}
    assert doc.eval == {"unit_scale": 0.001}


def test_load_config_file_errors(tmp_path):
    with pytest.raises(InvalidConfig):
        load_config_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(InvalidConfig):
        load_config_file(bad)
    bad.write_text(json.dumps({"simulate": {}, "surprise": 1}))
    with pytest.raises(InvalidConfig):
        load_config_file(bad)
    bad.write_text(json.dumps([1, 2]))
    with pytest.raises(InvalidConfig):
        load_config_file(bad)


def test_merge_overrides():
    merged = merge_overrides({"seed": 1, "workers": 2}, {"seed": 5, "color_space": None})
    assert merged == {"seed": 5, "workers": 2}
