"""sRGB transfer functions and 8-bit codecs.

The rendering core works on linear-light values in [0, 1].  The strict
transforms (`srgb_to_linear` / `linear_to_srgb`) validate their input and
compute in the array's own dtype; the `decode_srgb_u8` / `encode_srgb_u8`
pair is the canonical 8-bit path used by the batch pipeline (LUT decode,
float32 encode) and is what determines output bytes.
"""

import numpy as np

from .errors import OutOfRangeInput

# IEC 61966-2-1 constants
_SRGB_LINEAR_KNEE = 0.04045
_LINEAR_SRGB_KNEE = 0.0031308
_SRGB_SLOPE = 12.92
_SRGB_A = 0.055
_SRGB_GAMMA = 2.4


def _check_unit_range(values, name):
    values = np.asarray(values)
    if values.size and (not np.all(np.isfinite(values))
                        or values.min() < 0.0 or values.max() > 1.0):
        raise OutOfRangeInput(f"{name} values must be finite and within [0, 1]")
    return values


def srgb_to_linear(encoded):
    """Invert the sRGB transfer function (encoded [0,1] -> linear [0,1])."""
    s = _check_unit_range(encoded, "sRGB")
    if not np.issubdtype(s.dtype, np.floating):
        s = s.astype(np.float64)
    low = s <= _SRGB_LINEAR_KNEE
    return np.where(low, s / _SRGB_SLOPE,
                    ((s + _SRGB_A) / (1.0 + _SRGB_A)) ** _SRGB_GAMMA)


def linear_to_srgb(linear):
    """Apply the sRGB transfer function (linear [0,1] -> encoded [0,1])."""
    x = _check_unit_range(linear, "linear")
    if not np.issubdtype(x.dtype, np.floating):
        x = x.astype(np.float64)
    low = x <= _LINEAR_SRGB_KNEE
    return np.where(low, x * _SRGB_SLOPE,
                    (1.0 + _SRGB_A) * x ** (1.0 / _SRGB_GAMMA) - _SRGB_A)


# 8-bit decode LUT, float32: cheap and exact for every representable input
_U8_LUT = srgb_to_linear(np.arange(256, dtype=np.float64) / 255.0).astype(np.float32)


def decode_srgb_u8(u8):
    """Decode an 8-bit sRGB image into float32 linear light."""
    u8 = np.asarray(u8)
    if u8.dtype != np.uint8:
        raise OutOfRangeInput("decode_srgb_u8 expects uint8 input")
    return _U8_LUT[u8]


def encode_srgb_u8(linear):
    """Encode linear-light values into an 8-bit sRGB image.

    Values are clipped to [0, 1] and quantized with round-half-up; this is
    the single encode path used by the pipeline, so simulated outputs are
    reproducible byte-for-byte.
    """
    x = np.clip(np.asarray(linear, dtype=np.float32), 0.0, 1.0)
    low = x <= np.float32(_LINEAR_SRGB_KNEE)
    enc = x ** np.float32(1.0 / _SRGB_GAMMA)
    enc *= np.float32(1.0 + _SRGB_A)
    enc -= np.float32(_SRGB_A)
    enc[low] = x[low] * np.float32(_SRGB_SLOPE)
    np.clip(enc, 0.0, 1.0, out=enc)
    enc *= np.float32(255.0)
    enc += np.float32(0.5)
    return enc.astype(np.uint8)


def quantize_u8(values):
    """Quantize [0,1] values to uint8 without a transfer function."""
    x = np.clip(np.asarray(values, dtype=np.float32), 0.0, 1.0)
    return (x * 255.0 + 0.5).astype(np.uint8)
