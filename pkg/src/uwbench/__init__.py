"""uwbench: underwater RGB-D dataset synthesis and metric depth evaluation."""

__version__ = "0.1.0"

from .augment import (
    AugmentationConfig,
    AugmentationSpec,
    apply_exposure,
    sample_augmentation,
    to_grayscale,
)
from .color import linear_to_srgb, srgb_to_linear
from .config import EvalConfig, SimulationConfig
from .formation import CameraIntrinsics, planar_depth_to_range, render_underwater
from .manifest import DatasetManifest, ManifestRecord, build_manifest
from .metrics import (
    MetricsReport,
    abs_rel,
    aggregate,
    delta_accuracy,
    evaluate_pair,
    median_scale_align,
    rescale_prediction,
    silog,
    valid_mask,
)
from .pipeline import render_condition_grid, run_simulation, simulate_dataset
from .report import BenchmarkRow, emit_table
from .water import (
    JERLOV_CLASSES,
    CoefficientTable,
    WaterCoefficients,
    default_table,
    load_coefficient_table,
)

__all__ = [
    "AugmentationConfig",
    "AugmentationSpec",
    "BenchmarkRow",
    "CameraIntrinsics",
    "CoefficientTable",
    "DatasetManifest",
    "EvalConfig",
    "JERLOV_CLASSES",
    "ManifestRecord",
    "MetricsReport",
    "SimulationConfig",
    "WaterCoefficients",
    "abs_rel",
    "aggregate",
    "apply_exposure",
    "build_manifest",
    "default_table",
    "delta_accuracy",
    "emit_table",
    "evaluate_pair",
    "linear_to_srgb",
    "load_coefficient_table",
    "median_scale_align",
    "planar_depth_to_range",
    "render_condition_grid",
    "render_underwater",
    "rescale_prediction",
    "run_simulation",
    "sample_augmentation",
    "silog",
    "simulate_dataset",
    "srgb_to_linear",
    "to_grayscale",
    "valid_mask",
]
