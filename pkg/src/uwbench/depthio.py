"""Depth map file I/O.

Two on-disk conventions are supported:

* ``.pfm`` -- grayscale portable float map (header ``Pf``), float32,
  rows stored bottom-up, negative scale for little-endian. Values are
  meters as stored; a 0.0 is a literal zero range.
* ``.png`` -- single-channel 16-bit integer map. Stored values are
  multiplied by ``meters_per_unit`` (e.g. 0.001 for millimeter files);
  the value 0 is the conventional no-data sentinel and reads as NaN.

Both round-trip bit-exactly, which the dataset pipeline relies on when
passing ground-truth depth through unmodified.
"""

import re
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DataError, ParseError

DEPTH_SUFFIXES = (".pfm", ".png")


def read_pfm(path):
    """Read a grayscale PFM into a float32 H x W array (top-down rows)."""
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        match = re.compile(rb"\S+").search(data, pos)
        if match is None:
            raise ParseError(f"{path}: truncated PFM header")
        tokens.append(match.group())
        pos = match.end()
    if tokens[0] == b"PF":
        raise ParseError(f"{path}: color PFM not supported, expected grayscale 'Pf'")
    if tokens[0] != b"Pf":
        raise ParseError(f"{path}: not a PFM file (magic {tokens[0]!r})")
    try:
        width, height = int(tokens[1]), int(tokens[2])
        scale = float(tokens[3])
    except ValueError as exc:
        raise ParseError(f"{path}: bad PFM header: {exc}") from None
    if width <= 0 or height <= 0 or scale == 0.0:
        raise ParseError(f"{path}: bad PFM dimensions or scale")
    # Header ends with exactly one whitespace byte after the scale token.
    offset = pos + 1
    count = width * height
    endian = "<f4" if scale < 0 else ">f4"
    raw = data[offset:offset + 4 * count]
    if len(raw) != 4 * count:
        raise ParseError(f"{path}: PFM payload truncated")
    values = np.frombuffer(raw, dtype=endian).astype(np.float32, copy=False)
    arr = values.reshape(height, width)[::-1]  # PFM rows are bottom-up
    if abs(scale) != 1.0:
        arr = arr * np.float32(abs(scale))
    return np.ascontiguousarray(arr)


def write_pfm(depth, path):
    """Write an H x W float array as a little-endian grayscale PFM."""
    arr = np.asarray(depth, dtype=np.float32)
    if arr.ndim != 2:
        raise DataError(f"PFM writer expects an HxW array, got shape {arr.shape}")
    h, w = arr.shape
    header = f"Pf\n{w} {h}\n-1.0\n".encode("ascii")
    payload = arr[::-1].astype("<f4", copy=False).tobytes()
    Path(path).write_bytes(header + payload)


def read_png16(path, meters_per_unit, dtype=np.float64):
    """Read a 16-bit integer depth PNG into meters (0 -> NaN)."""
    with Image.open(path) as img:
        if img.mode not in ("I;16", "I;16B", "I"):
            raise ParseError(
                f"{path}: expected a 16-bit single-channel PNG, got mode {img.mode}"
            )
        raw = np.asarray(img)
    depth = raw.astype(dtype) * dtype(meters_per_unit)
    depth[raw == 0] = np.nan
    return depth


def write_png16(depth_m, path, meters_per_unit):
    """Write meters as a 16-bit PNG; invalid values become the 0 sentinel."""
    arr = np.asarray(depth_m, dtype=np.float64)
    if arr.ndim != 2:
        raise DataError(f"PNG16 writer expects an HxW array, got shape {arr.shape}")
    units = np.zeros(arr.shape, dtype=np.uint16)
    valid = np.isfinite(arr) & (arr > 0.0)
    scaled = np.round(arr[valid] / float(meters_per_unit))
    units[valid] = np.clip(scaled, 0, 65535).astype(np.uint16)
    Image.fromarray(units).save(path, format="PNG")


def read_depth(path, meters_per_unit=0.001, dtype=np.float64):
    """Read a depth file by extension; returns meters (float64 by default)."""
    path = Path(path)
    dtype = np.dtype(dtype).type
    suffix = path.suffix.lower()
    if suffix == ".pfm":
        return read_pfm(path).astype(dtype, copy=False)
    if suffix == ".png":
        return read_png16(path, meters_per_unit, dtype=dtype)
    raise DataError(f"unsupported depth format {suffix!r}: {path}")
