"""Dataset manifests: pairing, water-class assignment, persistence.

A manifest is the seeded, replayable record of a dataset build. On disk it
is line-delimited JSON: the first line is a header object

    {"format": "uwbench-manifest", "version": 1,
     "global_seed": <int>, "config_digest": "<sha256>"}

followed by one object per record with keys ``rgb_path``, ``depth_path``,
``assigned_class``, ``augmentation`` (``{exposure_gain, grayscale, seed}``
or null), ``intrinsics`` (``{fx, fy, cx, cy}`` or null), ``output_rgb_path``
and ``output_depth_path``. All paths are POSIX-relative (inputs to their
roots, outputs to the run's output directory), so identical builds produce
byte-identical manifests wherever they are stored.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .augment import AugmentationSpec, derive_record_seed, sample_augmentation
from .depthio import DEPTH_SUFFIXES
from .errors import EmptyDataset, ParseError, UnpairedFile
from .formation import CameraIntrinsics

MANIFEST_FORMAT = "uwbench-manifest"
MANIFEST_VERSION = 1

RGB_SUFFIXES = (".png", ".jpg", ".jpeg")

# Independent sampling streams per record, so class assignment and
# augmentation draws never alias.
_CLASS_STREAM = 1
_AUGMENT_STREAM = 2


@dataclass(frozen=True)
class ManifestRecord:
    rgb_path: str
    depth_path: str
    assigned_class: str | None = None
    augmentation: AugmentationSpec | None = None
    intrinsics: CameraIntrinsics | None = None
    output_rgb_path: str | None = None
    output_depth_path: str | None = None


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple[ManifestRecord, ...]
    global_seed: int = 0
    config_digest: str = ""


def _relative_files(root, suffixes):
    root = Path(root)
    if not root.is_dir():
        raise EmptyDataset(f"directory not found: {root}")
    found = [
        p.relative_to(root).as_posix()
        for p in root.rglob("*")
        if p.is_file() and p.suffix.lower() in suffixes
    ]
    return sorted(found)


def build_manifest(rgb_root, depth_root, pairing_rule="{stem}"):
    """Pair RGB files under ``rgb_root`` with depth files under ``depth_root``.

    The pairing rule is a format string over ``{stem}`` (the RGB path
    relative to its root, without extension) giving the depth file's
    relative path without extension; ``.pfm`` and ``.png`` are tried in
    that order. Every file on either side must pair up, otherwise
    UnpairedFile lists the orphans.
    """
    rgb_files = _relative_files(rgb_root, RGB_SUFFIXES)
    depth_files = set(_relative_files(depth_root, DEPTH_SUFFIXES))
    if not rgb_files:
        raise EmptyDataset(f"no RGB images ({', '.join(RGB_SUFFIXES)}) under {rgb_root}")

    records = []
    rgb_orphans = []
    ambiguous = []
    claimed = set()
    for rgb_rel in rgb_files:
        stem = rgb_rel.rsplit(".", 1)[0]
        depth_stem = pairing_rule.format(stem=stem)
        candidates = [depth_stem + ext for ext in DEPTH_SUFFIXES
                      if depth_stem + ext in depth_files]
        if not candidates:
            rgb_orphans.append(rgb_rel)
        elif len(candidates) > 1:
            ambiguous.append(rgb_rel)
        else:
            claimed.add(candidates[0])
            records.append(ManifestRecord(rgb_path=rgb_rel, depth_path=candidates[0]))

    depth_orphans = sorted(depth_files - claimed)
    if rgb_orphans or depth_orphans or ambiguous:
        parts = []
        if rgb_orphans:
            parts.append(f"RGB without depth: {', '.join(rgb_orphans)}")
        if ambiguous:
            parts.append(f"ambiguous depth match: {', '.join(ambiguous)}")
        if depth_orphans:
            parts.append(f"depth without RGB: {', '.join(depth_orphans)}")
        raise UnpairedFile("; ".join(parts),
                           rgb_orphans=rgb_orphans + ambiguous,
                           depth_orphans=depth_orphans)
    return DatasetManifest(records=tuple(records))


def assign_water_types(manifest, classes, seed, table=None):
    """Assign each record a class drawn uniformly from (seed, record index)."""
    classes = tuple(classes)
    if not classes:
        raise EmptyDataset("water class list is empty")
    if table is not None:
        for class_id in classes:
            table.lookup(class_id)
    records = []
    for index, record in enumerate(manifest.records):
        rng = np.random.default_rng(
            np.random.SeedSequence(derive_record_seed(seed, index, _CLASS_STREAM))
        )
        choice = classes[int(rng.integers(len(classes)))]
        records.append(replace(record, assigned_class=choice))
    return replace(manifest, records=tuple(records), global_seed=int(seed))


def assign_augmentations(manifest, augment_config, seed):
    """Sample one AugmentationSpec per record from (seed, record index)."""
    if augment_config is None:
        return manifest
    records = []
    for index, record in enumerate(manifest.records):
        record_seed = derive_record_seed(seed, index, _AUGMENT_STREAM)
        spec = sample_augmentation(record_seed, augment_config)
        records.append(replace(record, augmentation=spec))
    return replace(manifest, records=tuple(records))


def _record_to_dict(record):
    aug = None
    if record.augmentation is not None:
        aug = {
            "exposure_gain": record.augmentation.exposure_gain,
            "grayscale": record.augmentation.grayscale,
            "seed": record.augmentation.seed,
        }
    intr = None
    if record.intrinsics is not None:
        k = record.intrinsics
        intr = {"fx": k.fx, "fy": k.fy, "cx": k.cx, "cy": k.cy}
    return {
        "rgb_path": record.rgb_path,
        "depth_path": record.depth_path,
        "assigned_class": record.assigned_class,
        "augmentation": aug,
        "intrinsics": intr,
        "output_rgb_path": record.output_rgb_path,
        "output_depth_path": record.output_depth_path,
    }


def _record_from_dict(data):
    aug = data.get("augmentation")
    intr = data.get("intrinsics")
    return ManifestRecord(
        rgb_path=data["rgb_path"],
        depth_path=data["depth_path"],
        assigned_class=data.get("assigned_class"),
        augmentation=AugmentationSpec(**aug) if aug else None,
        intrinsics=CameraIntrinsics(**intr) if intr else None,
        output_rgb_path=data.get("output_rgb_path"),
        output_depth_path=data.get("output_depth_path"),
    )


def manifest_to_text(manifest):
    header = {
        "format": MANIFEST_FORMAT,
        "version": MANIFEST_VERSION,
        "global_seed": manifest.global_seed,
        "config_digest": manifest.config_digest,
    }
    lines = [json.dumps(header, sort_keys=True, separators=(",", ":"))]
    lines.extend(
        json.dumps(_record_to_dict(r), sort_keys=True, separators=(",", ":"))
        for r in manifest.records
    )
    return "\n".join(lines) + "\n"


def save_manifest(manifest, path):
    Path(path).write_text(manifest_to_text(manifest))


def load_manifest(path):
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty manifest")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: bad header: {exc}") from None
    if header.get("format") != MANIFEST_FORMAT:
        raise ParseError(f"{path}: not a {MANIFEST_FORMAT} file")
    if header.get("version") != MANIFEST_VERSION:
        raise ParseError(f"{path}: unsupported manifest version {header.get('version')}")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            records.append(_record_from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad record: {exc}", line=lineno) from None
    return DatasetManifest(
        records=tuple(records),
        global_seed=int(header.get("global_seed", 0)),
        config_digest=str(header.get("config_digest", "")),
    )
