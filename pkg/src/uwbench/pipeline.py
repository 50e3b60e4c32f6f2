"""Dataset simulation: render manifests into underwater RGB-D trees.

Each record is an independent work item, so the run can shard across a
process pool; all randomness is pre-sampled into the manifest, which makes
output bytes independent of the worker count. Depth maps pass through as
byte-identical file copies. Per-record failures are collected and reported
at the end; only a run where every record fails raises.
"""

import logging
import shutil
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from PIL import Image

from .augment import apply_augmentation
from .color import decode_srgb_u8, encode_srgb_u8, quantize_u8
from .depthio import read_depth
from .errors import DataError, DimensionMismatch, UwbenchError
from .formation import planar_depth_to_range, render_underwater
from .manifest import (
    assign_augmentations,
    assign_water_types,
    build_manifest,
    save_manifest,
)

logger = logging.getLogger(__name__)

MANIFEST_FILENAME = "manifest.jsonl"


@dataclass
class RunSummary:
    total: int
    rendered: int
    failed: list = field(default_factory=list)  # [{"rgb_path":…, "error":…}]
    wall_time_s: float = 0.0
    workers: int = 1
    output_dir: str = ""
    manifest_path: str = ""

    def to_dict(self):
        return {
            "total": self.total,
            "rendered": self.rendered,
            "failed": self.failed,
            "wall_time_s": self.wall_time_s,
            "workers": self.workers,
            "output_dir": self.output_dir,
            "manifest_path": self.manifest_path,
        }


def prepare_manifest(rgb_root, depth_root, table, config):
    """Build, assign, and finalize a manifest for one simulation run."""
    manifest = build_manifest(rgb_root, depth_root, config.pairing_rule)
    classes = config.resolve_classes(table)

    if config.assignment == "all":
        # One record per (input pair, class), class label in the filename.
        expanded = []
        for record in manifest.records:
            for class_id in classes:
                expanded.append(replace(record, assigned_class=class_id))
        manifest = replace(manifest, records=tuple(expanded),
                           global_seed=int(config.seed))
    else:
        manifest = assign_water_types(manifest, classes, config.seed, table=table)

    manifest = assign_augmentations(manifest, config.augment, config.seed)

    records = []
    for record in manifest.records:
        stem = record.rgb_path.rsplit(".", 1)[0]
        if config.assignment == "all":
            stem = f"{stem}__{record.assigned_class}"
        depth_name = Path(record.depth_path).name
        depth_stem, depth_ext = depth_name.rsplit(".", 1)
        depth_dir = Path(record.depth_path).parent.as_posix()
        depth_prefix = "" if depth_dir == "." else depth_dir + "/"
        if config.assignment == "all":
            out_depth = f"depth/{depth_prefix}{depth_stem}__{record.assigned_class}.{depth_ext}"
        else:
            out_depth = f"depth/{record.depth_path}"
        intrinsics = config.intrinsics if config.depth_kind == "planar" else None
        records.append(replace(
            record,
            intrinsics=intrinsics,
            output_rgb_path=f"rgb/{stem}.png",
            output_depth_path=out_depth,
        ))
    return replace(manifest, records=tuple(records),
                   config_digest=config.digest(table))


def _load_rgb_u8(path):
    with Image.open(path) as img:
        if img.mode != "RGB":
            img = img.convert("RGB")
        return np.asarray(img)


def _render_record(record, rgb_root, depth_root, output_dir, coeffs, config):
    rgb_u8 = _load_rgb_u8(Path(rgb_root) / record.rgb_path)
    depth = read_depth(Path(depth_root) / record.depth_path,
                       meters_per_unit=config.meters_per_unit,
                       dtype=np.float32)
    if depth.shape != rgb_u8.shape[:2]:
        raise DimensionMismatch(
            f"{record.rgb_path}: RGB {rgb_u8.shape[:2]} vs depth {depth.shape}"
        )
    if config.depth_kind == "planar":
        depth = planar_depth_to_range(depth, record.intrinsics or config.intrinsics)
    z = depth.astype(np.float32, copy=False)

    if config.color_space == "srgb":
        linear = decode_srgb_u8(rgb_u8)
    else:
        linear = rgb_u8.astype(np.float32) / np.float32(255.0)

    if record.augmentation is not None and config.augment_order == "before":
        linear = apply_augmentation(linear, record.augmentation)
    out = render_underwater(linear, z, coeffs)
    if record.augmentation is not None and config.augment_order == "after":
        out = apply_augmentation(out, record.augmentation)

    out_u8 = encode_srgb_u8(out) if config.color_space == "srgb" else quantize_u8(out)

    rgb_out = Path(output_dir) / record.output_rgb_path
    rgb_out.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(out_u8).save(rgb_out, format="PNG",
                                 compress_level=config.png_compress_level)

    depth_out = Path(output_dir) / record.output_depth_path
    depth_out.parent.mkdir(parents=True, exist_ok=True)
    shutil.copyfile(Path(depth_root) / record.depth_path, depth_out)


def _worker(task):
    """Top-level task wrapper so the pool can pickle it."""
    record, rgb_root, depth_root, output_dir, coeffs, config = task
    try:
        _render_record(record, rgb_root, depth_root, output_dir, coeffs, config)
        return None
    except (UwbenchError, OSError, ValueError) as exc:
        return {"rgb_path": record.rgb_path, "error": f"{type(exc).__name__}: {exc}"}


def simulate_dataset(manifest, table, config, rgb_root, depth_root, output_dir):
    """Render every manifest record; returns a RunSummary.

    Raises DataError only if every record fails.
    """
    start = time.perf_counter()
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    manifest_path = output_dir / MANIFEST_FILENAME
    save_manifest(manifest, manifest_path)

    tasks = [
        (record, str(rgb_root), str(depth_root), str(output_dir),
         table.lookup(record.assigned_class), config)
        for record in manifest.records
    ]
    failures = []
    if config.workers > 1 and len(tasks) > 1:
        chunksize = max(1, len(tasks) // (config.workers * 4))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for outcome in pool.map(_worker, tasks, chunksize=chunksize):
                if outcome is not None:
                    failures.append(outcome)
    else:
        for task in tasks:
            outcome = _worker(task)
            if outcome is not None:
                failures.append(outcome)

    for failure in failures:
        logger.warning("record failed: %s (%s)", failure["rgb_path"], failure["error"])
    if tasks and len(failures) == len(tasks):
        raise DataError(
            f"all {len(tasks)} records failed; first error: {failures[0]['error']}"
        )
    return RunSummary(
        total=len(tasks),
        rendered=len(tasks) - len(failures),
        failed=failures,
        wall_time_s=time.perf_counter() - start,
        workers=config.workers,
        output_dir=str(output_dir),
        manifest_path=str(manifest_path),
    )


def run_simulation(rgb_root, depth_root, output_dir, table, config):
    """prepare_manifest + simulate_dataset in one call."""
    manifest = prepare_manifest(rgb_root, depth_root, table, config)
    return simulate_dataset(manifest, table, config, rgb_root, depth_root, output_dir)


def depth_visualization(depth):
    """Gray visualization tile: valid depths min-max normalized, far = bright."""
    depth = np.asarray(depth, dtype=np.float64)
    valid = np.isfinite(depth) & (depth > 0.0)
    vis = np.zeros(depth.shape, dtype=np.float32)
    if valid.any():
        lo, hi = depth[valid].min(), depth[valid].max()
        if hi > lo:
            vis[valid] = ((depth[valid] - lo) / (hi - lo)).astype(np.float32)
        else:
            vis[valid] = 0.5
    u8 = quantize_u8(vis)
    return np.repeat(u8[..., None], 3, axis=-1)


def render_condition_grid(rgb_u8, depth_m, table, color_space="srgb",
                          max_columns=5):
    """Compose [clean RGB, depth, one tile per water class] into one image.

    Class tiles are exactly the pipeline's render of the input under each
    class in table order; tiles are packed row-major, up to ``max_columns``
    per row, with black padding tiles at the end of the last row.

    Returns (grid_u8, labels).
    """
    rgb_u8 = np.asarray(rgb_u8)
    depth_m = np.asarray(depth_m, dtype=np.float64)
    if rgb_u8.shape[:2] != depth_m.shape:
        raise DimensionMismatch(
            f"RGB {rgb_u8.shape[:2]} and depth {depth_m.shape} dimensions differ"
        )
    z = depth_m.astype(np.float32)
    if color_space == "srgb":
        linear = decode_srgb_u8(rgb_u8)
    else:
        linear = rgb_u8.astype(np.float32) / np.float32(255.0)

    tiles = [rgb_u8, depth_visualization(depth_m)]
    labels = ["rgb", "depth"]
    for class_id in table.classes:
        rendered = render_underwater(linear, z, table.lookup(class_id))
        tile = encode_srgb_u8(rendered) if color_space == "srgb" else quantize_u8(rendered)
        tiles.append(tile)
        labels.append(class_id)

    h, w = rgb_u8.shape[:2]
    ncols = min(max_columns, len(tiles))
    nrows = -(-len(tiles) // ncols)
    grid = np.zeros((nrows * h, ncols * w, 3), dtype=np.uint8)
    for i, tile in enumerate(tiles):
        r, c = divmod(i, ncols)
        grid[r * h:(r + 1) * h, c * w:(c + 1) * w] = tile
    return grid, labels
