"""Wideband underwater image formation.

Implements the per-pixel blend of attenuated scene radiance and
accumulated backscatter,

    out_c = J_c * exp(-beta_c * z) + veil_c * (1 - exp(-beta_c * z)),

applied in linear light with range ``z`` in meters. Range 0 is the exact
identity (transmission 1); non-finite or negative ranges are treated as
missing data and render as pure veiling light, the z -> infinity limit.
All operations are pure and dtype-preserving: float64 inputs are computed
in float64, the batch pipeline feeds float32.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidConfig


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        if not (self.fx > 0.0 and self.fy > 0.0):
            raise InvalidConfig(
                f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}"
            )


def validate_image(img, name="image"):
    """Check an H x W x 3 linear image; returns it as a float ndarray."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionMismatch(f"{name} must be HxWx3, got shape {arr.shape}")
    if arr.shape[0] <= 0 or arr.shape[1] <= 0:
        raise DimensionMismatch(f"{name} has empty dimensions: {arr.shape}")
    if not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(np.float64)
    return arr


def validate_depth(depth, name="depth"):
    arr = np.asarray(depth)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be HxW, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.floating):
        arr = arr.astype(np.float64)
    return arr


def render_underwater(clean, range_m, coeffs):
    """Render a clean linear image through a water column.

    Args:
        clean: H x W x 3 linear radiance in [0, 1].
        range_m: H x W range from the camera in meters.
        coeffs: WaterCoefficients for the simulated class.

    Returns:
        H x W x 3 array of the same dtype as ``clean``, clamped to [0, 1]
        once after the blend. Pixels whose range is non-finite or negative
        come out as the veiling light color.
    """
    clean = validate_image(clean, "clean")
    z = validate_depth(range_m, "range")
    if clean.shape[:2] != z.shape:
        raise DimensionMismatch(
            f"image {clean.shape[:2]} and range {z.shape} dimensions differ"
        )
    dtype = clean.dtype
    beta = coeffs.beta_array(dtype)
    veil = coeffs.veil_array(dtype)

    # Missing range -> +inf so transmission underflows to exactly 0
    # and the two-term blend returns the veil color.
    usable = np.isfinite(z) & (z >= 0.0)
    if not usable.all():
        z = np.where(usable, z, np.asarray(np.inf, z.dtype))

    # Two-term form: at z = 0 the output is bit-for-bit the input.
    t = np.multiply(z[..., None].astype(dtype, copy=False), -beta)
    np.exp(t, out=t)
    out = clean * t
    np.subtract(1.0, t, out=t)
    t *= veil
    out += t
    return np.clip(out, 0.0, 1.0, out=out)


def planar_depth_to_range(depth, intrinsics):
    """Convert planar z-depth to Euclidean ray range.

    Per pixel (u, v), counting pixel centers at half-integer coordinates:

        range = z * sqrt(1 + ((u + 0.5 - cx) / fx)^2 + ((v + 0.5 - cy) / fy)^2)

    Invalid pixels (non-finite or <= 0) stay invalid: the scale factor is
    >= 1 everywhere, so sign and finiteness are preserved.
    """
    z = validate_depth(depth)
    h, w = z.shape
    x = ((np.arange(w, dtype=np.float64) + 0.5) - intrinsics.cx) / intrinsics.fx
    y = ((np.arange(h, dtype=np.float64) + 0.5) - intrinsics.cy) / intrinsics.fy
    factor = np.sqrt(1.0 + x[None, :] ** 2 + y[:, None] ** 2)
    return z * factor.astype(z.dtype, copy=False)
