"""Configuration loading, validation, and content digests.

A config file is JSON with up to three sections::

    {
      "coefficients": "path/to/table.csv",     // optional, bundled table if absent
      "simulate": { ... SimulationConfig fields ... },
      "eval":     { ... EvalConfig fields ... }
    }

CLI flags override file values field by field. ``config_digest`` hashes
every field that can change rendered content (plus the resolved
coefficient table) and deliberately excludes storage locations and worker
count, so re-running the same build elsewhere or with more workers leaves
the manifest byte-identical.
"""

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .augment import AugmentationConfig
from .errors import InvalidConfig, NonPositiveScale
from .formation import CameraIntrinsics
from .water import format_coefficient_table

DEFAULT_DELTA_THRESHOLDS = (1.25, 1.25 ** 2, 1.25 ** 3)

_COLOR_SPACES = ("srgb", "linear")
_DEPTH_KINDS = ("range", "planar")
_ASSIGNMENTS = ("sampled", "all")
_AUGMENT_ORDERS = ("after", "before")
_POOLINGS = ("per-image", "per-pixel")


def _require_keys(mapping, allowed, section):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise InvalidConfig(
            f"unknown {section} config keys: {', '.join(sorted(unknown))}"
        )


def _choice(value, options, name):
    if value not in options:
        raise InvalidConfig(f"{name} must be one of {options}, got {value!r}")
    return value


@dataclass(frozen=True)
class SimulationConfig:
    """Everything that determines the content of a dataset build."""

    seed: int = 0
    water_classes: tuple[str, ...] | None = None  # None -> all classes in table
    color_space: str = "srgb"
    depth_kind: str = "range"
    intrinsics: CameraIntrinsics | None = None
    meters_per_unit: float = 0.001
    assignment: str = "sampled"
    augment: AugmentationConfig | None = None
    augment_order: str = "after"
    pairing_rule: str = "{stem}"
    png_compress_level: int = 1
    workers: int = 1  # excluded from the digest

    def __post_init__(self):
        if self.seed < 0:
            raise InvalidConfig(f"seed must be >= 0, got {self.seed}")
        _choice(self.color_space, _COLOR_SPACES, "color_space")
        _choice(self.depth_kind, _DEPTH_KINDS, "depth_kind")
        _choice(self.assignment, _ASSIGNMENTS, "assignment")
        _choice(self.augment_order, _AUGMENT_ORDERS, "augment_order")
        if self.water_classes is not None and not self.water_classes:
            raise InvalidConfig("water_classes must be non-empty when given")
        if not self.meters_per_unit > 0.0:
            raise InvalidConfig(
                f"meters_per_unit must be > 0, got {self.meters_per_unit}"
            )
        if not 0 <= self.png_compress_level <= 9:
            raise InvalidConfig(
                f"png_compress_level must be 0..9, got {self.png_compress_level}"
            )
        if self.workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {self.workers}")
        if self.depth_kind == "planar" and self.intrinsics is None:
            raise InvalidConfig("depth_kind 'planar' requires intrinsics")

    @classmethod
    def from_mapping(cls, mapping):
        allowed = {
            "seed", "water_classes", "color_space", "depth_kind", "intrinsics",
            "meters_per_unit", "assignment", "augment", "pairing_rule",
            "png_compress_level", "workers",
        }
        _require_keys(mapping, allowed, "simulate")
        kwargs = dict(mapping)
        if kwargs.get("water_classes") is not None:
            kwargs["water_classes"] = tuple(str(c) for c in kwargs["water_classes"])
        if kwargs.get("intrinsics") is not None:
            intr = kwargs["intrinsics"]
            _require_keys(intr, {"fx", "fy", "cx", "cy"}, "intrinsics")
            kwargs["intrinsics"] = CameraIntrinsics(**intr)
        if kwargs.get("augment") is not None:
            aug = dict(kwargs["augment"])
            _require_keys(
                aug,
                {"enabled", "gain_min", "gain_max", "grayscale_prob", "order"},
                "augment",
            )
            enabled = aug.pop("enabled", True)
            order = aug.pop("order", "after")
            kwargs["augment"] = AugmentationConfig(**aug) if enabled else None
            kwargs["augment_order"] = order
        return cls(**kwargs)

    def content_dict(self, table):
        """Fields that affect rendered bytes, for hashing and the manifest."""
        augment = None
        if self.augment is not None:
            augment = {
                "gain_min": self.augment.gain_min,
                "gain_max": self.augment.gain_max,
                "grayscale_prob": self.augment.grayscale_prob,
                "order": self.augment_order,
            }
        intrinsics = None
        if self.intrinsics is not None:
            k = self.intrinsics
            intrinsics = {"fx": k.fx, "fy": k.fy, "cx": k.cx, "cy": k.cy}
        return {
            "seed": self.seed,
            "water_classes": list(self.resolve_classes(table)),
            "color_space": self.color_space,
            "depth_kind": self.depth_kind,
            "intrinsics": intrinsics,
            "meters_per_unit": self.meters_per_unit,
            "assignment": self.assignment,
            "augment": augment,
            "pairing_rule": self.pairing_rule,
            "png_compress_level": self.png_compress_level,
            "coefficient_table": format_coefficient_table(table),
        }

    def digest(self, table):
        canonical = json.dumps(self.content_dict(table), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def resolve_classes(self, table):
        """The class list this build draws from, in table order when unset."""
        if self.water_classes is None:
            return table.classes
        for class_id in self.water_classes:
            table.lookup(class_id)
        return self.water_classes


@dataclass(frozen=True)
class EvalConfig:
    """Protocol knobs for metric depth evaluation."""

    unit_scale: float = 1.0
    max_depth: float | None = None
    delta_thresholds: tuple[float, ...] = DEFAULT_DELTA_THRESHOLDS
    silog_lambda: float = 0.5
    median_align: bool = False
    pooling: str = "per-image"
    meters_per_unit: float = 0.001

    def __post_init__(self):
        if not self.unit_scale > 0.0:
            raise NonPositiveScale(
                f"unit_scale must be > 0, got {self.unit_scale}"
            )
        if self.max_depth is not None and not self.max_depth > 0.0:
            raise InvalidConfig(f"max_depth must be > 0, got {self.max_depth}")
        if not self.delta_thresholds or any(t <= 1.0 for t in self.delta_thresholds):
            raise InvalidConfig("delta_thresholds must all be > 1")
        if not 0.0 <= self.silog_lambda <= 1.0:
            raise InvalidConfig(
                f"silog_lambda must be in [0, 1], got {self.silog_lambda}"
            )
        _choice(self.pooling, _POOLINGS, "pooling")
        if not self.meters_per_unit > 0.0:
            raise InvalidConfig(
                f"meters_per_unit must be > 0, got {self.meters_per_unit}"
            )

    @classmethod
    def from_mapping(cls, mapping):
        allowed = {
            "unit_scale", "max_depth", "delta_thresholds", "silog_lambda",
            "median_align", "pooling", "meters_per_unit",
        }
        _require_keys(mapping, allowed, "eval")
        kwargs = dict(mapping)
        if kwargs.get("delta_thresholds") is not None:
            kwargs["delta_thresholds"] = tuple(float(t)
                                               for t in kwargs["delta_thresholds"])
        return cls(**kwargs)


@dataclass(frozen=True)
class ConfigFile:
    """Parsed top-level config document."""

    coefficients: str | None = None
    simulate: dict = field(default_factory=dict)
    eval: dict = field(default_factory=dict)


def load_config_file(path):
    path = Path(path)
    if not path.is_file():
        raise InvalidConfig(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidConfig(f"config file {path}: top level must be an object")
    _require_keys(doc, {"coefficients", "simulate", "eval"}, "top-level")
    return ConfigFile(
        coefficients=doc.get("coefficients"),
        simulate=doc.get("simulate", {}),
        eval=doc.get("eval", {}),
    )


def merge_overrides(base_mapping, overrides):
    """Overlay non-None override values onto a config section mapping."""
    merged = dict(base_mapping)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    return merged
