"""Metric depth evaluation: masking, rescaling, AbsRel, delta, SiLog.

Conventions:

* metrics are computed only over valid ground-truth pixels (finite, > 0,
  and <= the optional depth cap),
* the delta threshold test is strict: a pixel whose worse-direction ratio
  equals the threshold exactly never counts as correct. IEEE division can
  round a ratio that is truly below the threshold onto it (e.g.
  1 / float(0.8) rounds to exactly 1.25), so pixels landing on the
  threshold are re-checked with exact rational arithmetic,
* scalar reductions use math.fsum, which is correctly rounded and
  independent of summation order, keeping results bit-stable across
  worker counts and array layouts,
* predictions that are zero/negative on the valid mask are dropped from
  delta and SiLog (they are undefined there) and surfaced in a
  diagnostics count; AbsRel keeps the full mask.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .depthio import DEPTH_SUFFIXES, read_depth
from .errors import (
    DimensionMismatch,
    EmptyDataset,
    EmptyMask,
    NonPositiveDepth,
    NonPositivePrediction,
    NonPositiveScale,
    NoValidImages,
    UnpairedFile,
    ZeroMedian,
)

logger = logging.getLogger(__name__)


def _fsum(values):
    return math.fsum(np.asarray(values, dtype=np.float64).tolist())


def valid_mask(gt, cap=None):
    """Boolean mask of usable ground-truth pixels."""
    gt = np.asarray(gt)
    mask = np.isfinite(gt) & (gt > 0.0)
    if cap is not None:
        mask &= gt <= cap
    return mask


def rescale_prediction(pred, unit_scale):
    """Multiply predictions by a unit conversion factor (> 0)."""
    if not unit_scale > 0.0:
        raise NonPositiveScale(f"unit_scale must be > 0, got {unit_scale}")
    return np.asarray(pred, dtype=np.float64) * float(unit_scale)


def _masked(pred, gt, mask):
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise DimensionMismatch(
            f"prediction {pred.shape} and ground truth {gt.shape} differ"
        )
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != gt.shape:
        raise DimensionMismatch(f"mask {mask.shape} does not match {gt.shape}")
    if not mask.any():
        raise EmptyMask("no valid pixels under the mask")
    return pred[mask], gt[mask]


def abs_rel(pred, gt, mask):
    """Mean over masked pixels of |gt - pred| / gt."""
    p, d = _masked(pred, gt, mask)
    return _fsum(np.abs(d - p) / d) / p.size


def _exact_strictly_below(d, p, threshold):
    # max(d/p, p/d) < t  <=>  d < t*p and p < t*d, evaluated exactly on
    # the stored binary values.
    t = Fraction(threshold)
    fd, fp = Fraction(d), Fraction(p)
    return fd < t * fp and fp < t * fd


def delta_accuracy(pred, gt, mask, threshold):
    """Fraction of masked pixels with max(gt/pred, pred/gt) strictly below
    ``threshold``."""
    if not threshold > 1.0:
        raise NonPositiveScale(f"threshold must be > 1, got {threshold}")
    p, d = _masked(pred, gt, mask)
    if not np.all(p > 0.0):
        raise NonPositivePrediction(
            "delta accuracy needs positive predictions on the mask"
        )
    ratio = np.maximum(d / p, p / d)
    below = int(np.count_nonzero(ratio < threshold))
    # Division can round a just-below ratio onto the threshold; settle
    # those pixels exactly.
    for idx in np.flatnonzero(ratio == threshold):
        if _exact_strictly_below(d[idx], p[idx], threshold):
            below += 1
    return below / p.size


def silog(pred, gt, mask, lam):
    """Scale-invariant log error: mean(g^2) - lam * mean(g)^2 over the mask,
    with g = ln(pred) - ln(gt)."""
    p, d = _masked(pred, gt, mask)
    if not np.all(d > 0.0):
        raise NonPositiveDepth("SiLog needs positive ground truth on the mask")
    if not np.all(p > 0.0):
        raise NonPositivePrediction("SiLog needs positive predictions on the mask")
    g = np.log(p) - np.log(d)
    n = g.size
    mean_sq = _fsum(g * g) / n
    mean = _fsum(g) / n
    return mean_sq - lam * mean * mean


def median_scale_align(pred, gt, mask):
    """Scale predictions so masked medians match; returns (aligned, factor)."""
    p, d = _masked(pred, gt, mask)
    pred_median = float(np.median(p))
    if pred_median == 0.0:
        raise ZeroMedian("prediction median over the mask is zero")
    factor = float(np.median(d)) / pred_median
    return np.asarray(pred, dtype=np.float64) * factor, factor


@dataclass(frozen=True)
class MetricsReport:
    """Metrics for one prediction / ground-truth pair."""

    abs_rel: float
    delta: tuple[float, ...]
    silog: float
    valid_pixels: int
    dropped_nonpositive_pred: int = 0

    def to_dict(self):
        return {
            "abs_rel": self.abs_rel,
            "delta": list(self.delta),
            "silog": self.silog,
            "valid_pixels": self.valid_pixels,
            "dropped_nonpositive_pred": self.dropped_nonpositive_pred,
        }


def evaluate_pair(pred, gt, config):
    """Full per-pair protocol: rescale -> optional alignment -> mask -> metrics."""
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise DimensionMismatch(
            f"prediction {pred.shape} and ground truth {gt.shape} differ"
        )
    pred = rescale_prediction(pred, config.unit_scale)
    mask = valid_mask(gt, config.max_depth)
    if not mask.any():
        raise EmptyMask("ground truth has no valid pixels")
    if config.median_align:
        pred, _ = median_scale_align(pred, gt, mask)

    pos_mask = mask & np.isfinite(pred) & (pred > 0.0)
    dropped = int(mask.sum()) - int(pos_mask.sum())

    rel = abs_rel(pred, gt, mask)
    if pos_mask.any():
        delta = tuple(delta_accuracy(pred, gt, pos_mask, t)
                      for t in config.delta_thresholds)
        si = silog(pred, gt, pos_mask, config.silog_lambda)
    else:
        delta = tuple(math.nan for _ in config.delta_thresholds)
        si = math.nan
    return MetricsReport(
        abs_rel=rel,
        delta=delta,
        silog=si,
        valid_pixels=int(mask.sum()),
        dropped_nonpositive_pred=dropped,
    )


@dataclass(frozen=True)
class EvalSummary:
    """Dataset-level pooling of per-image reports."""

    abs_rel: float
    delta: tuple[float, ...]
    silog: float
    images: int
    pooling: str
    total_valid_pixels: int
    delta_thresholds: tuple[float, ...]

    def to_dict(self):
        return {
            "abs_rel": self.abs_rel,
            "delta": list(self.delta),
            "silog": self.silog,
            "images": self.images,
            "pooling": self.pooling,
            "total_valid_pixels": self.total_valid_pixels,
            "delta_thresholds": list(self.delta_thresholds),
        }


def _pooled(values, weights):
    """Weighted mean over entries with finite values and positive weight."""
    pairs = [(v, w) for v, w in zip(values, weights)
             if math.isfinite(v) and w > 0]
    if not pairs:
        return math.nan
    total = math.fsum(w for _, w in pairs)
    return math.fsum(v * w for v, w in pairs) / total


def aggregate(reports, pooling="per-image", delta_thresholds=None):
    """Pool per-image reports; default is the unweighted per-image mean,
    ``per-pixel`` weights each image by its contributing pixel count."""
    reports = list(reports)
    if not reports:
        raise NoValidImages("no image reports to aggregate")
    n_delta = len(reports[0].delta)

    if pooling == "per-image":
        rel_w = [1.0] * len(reports)
        pos_w = [1.0 if r.valid_pixels - r.dropped_nonpositive_pred > 0 else 0.0
                 for r in reports]
    elif pooling == "per-pixel":
        rel_w = [r.valid_pixels for r in reports]
        pos_w = [r.valid_pixels - r.dropped_nonpositive_pred for r in reports]
    else:
        raise NoValidImages(f"unknown pooling rule {pooling!r}")

    delta = tuple(
        _pooled([r.delta[i] for r in reports], pos_w) for i in range(n_delta)
    )
    return EvalSummary(
        abs_rel=_pooled([r.abs_rel for r in reports], rel_w),
        delta=delta,
        silog=_pooled([r.silog for r in reports], pos_w),
        images=len(reports),
        pooling=pooling,
        total_valid_pixels=sum(r.valid_pixels for r in reports),
        delta_thresholds=tuple(delta_thresholds) if delta_thresholds else (),
    )


def _depth_tree(root):
    root = Path(root)
    if not root.is_dir():
        raise EmptyDataset(f"directory not found: {root}")
    files = {
        p.relative_to(root).as_posix().rsplit(".", 1)[0]: p
        for p in sorted(root.rglob("*"))
        if p.is_file() and p.suffix.lower() in DEPTH_SUFFIXES
    }
    return files


def evaluate_tree(pred_root, gt_root, config):
    """Evaluate matching depth files under two roots.

    Files pair by relative path without extension. Returns
    (per_image_records, EvalSummary); images with an empty valid mask are
    skipped with a warning and noted in their record.
    """
    preds = _depth_tree(pred_root)
    gts = _depth_tree(gt_root)
    if not gts:
        raise EmptyDataset(f"no depth files under {gt_root}")
    missing_pred = sorted(set(gts) - set(preds))
    missing_gt = sorted(set(preds) - set(gts))
    if missing_pred or missing_gt:
        parts = []
        if missing_pred:
            parts.append(f"ground truth without prediction: {', '.join(missing_pred)}")
        if missing_gt:
            parts.append(f"prediction without ground truth: {', '.join(missing_gt)}")
        raise UnpairedFile("; ".join(parts),
                           rgb_orphans=missing_gt, depth_orphans=missing_pred)

    records = []
    reports = []
    for stem in sorted(gts):
        pred = read_depth(preds[stem], meters_per_unit=config.meters_per_unit)
        gt = read_depth(gts[stem], meters_per_unit=config.meters_per_unit)
        try:
            report = evaluate_pair(pred, gt, config)
        except EmptyMask:
            logger.warning("skipping %s: no valid ground-truth pixels", stem)
            records.append({"name": stem, "skipped": "empty mask"})
            continue
        reports.append(report)
        records.append({"name": stem, **report.to_dict()})
    if not reports:
        raise NoValidImages("every image was skipped (empty valid masks)")
    summary = aggregate(reports, pooling=config.pooling,
                        delta_thresholds=config.delta_thresholds)
    return records, summary
