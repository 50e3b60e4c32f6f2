import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uwbench.color import (
    decode_srgb_u8,
    encode_srgb_u8,
    linear_to_srgb,
    quantize_u8,
    srgb_to_linear,
)
from uwbench.errors import OutOfRangeInput

# Independently computed: ((0.5 + 0.055) / 1.055) ** 2.4 at high precision.
SRGB_HALF_LINEAR = 0.2140411404822324


def scalar_srgb_to_linear(s):
    if s <= 0.04045:
        return s / 12.92
    return ((s + 0.055) / 1.055) ** 2.4


def test_endpoints():
    assert srgb_to_linear(np.array([0.0]))[0] == 0.0
    assert srgb_to_linear(np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-12)
    assert linear_to_srgb(np.array([0.0]))[0] == 0.0
    assert linear_to_srgb(np.array([1.0]))[0] == pytest.approx(1.0, abs=1e-12)


def test_half_matches_scalar_reference():
    value = srgb_to_linear(np.array([0.5]))[0]
    assert value == pytest.approx(SRGB_HALF_LINEAR, abs=1e-12)


def test_round_trip_on_grid():
    x = np.linspace(0.0, 1.0, 1001)
    back = linear_to_srgb(srgb_to_linear(x))
    assert np.max(np.abs(back - x)) < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_round_trip_property(x):
    arr = np.array([x])
    assert abs(linear_to_srgb(srgb_to_linear(arr))[0] - x) < 1e-6
    assert abs(srgb_to_linear(linear_to_srgb(arr))[0] - x) < 1e-6


def test_matches_per_value_scalar_formula():
    x = np.linspace(0.0, 1.0, 257)
    vec = srgb_to_linear(x)
    for xi, vi in zip(x, vec):
        assert vi == pytest.approx(scalar_srgb_to_linear(xi), abs=1e-15)


@pytest.mark.parametrize("bad", [[-0.1], [1.1], [float("nan")], [float("inf")]])
def test_out_of_range_rejected(bad):
    with pytest.raises(OutOfRangeInput):
        srgb_to_linear(np.array(bad))
    with pytest.raises(OutOfRangeInput):
        linear_to_srgb(np.array(bad))


def test_decode_u8_matches_strict_transform():
    u8 = np.arange(256, dtype=np.uint8)
    fast = decode_srgb_u8(u8)
    exact = srgb_to_linear(u8.astype(np.float64) / 255.0)
    assert fast.dtype == np.float32
    assert np.max(np.abs(fast - exact)) < 1e-7


def test_decode_u8_rejects_other_dtypes():
    with pytest.raises(OutOfRangeInput):
        decode_srgb_u8(np.zeros((2, 2), dtype=np.float32))


def test_u8_codec_round_trips_every_level():
    u8 = np.arange(256, dtype=np.uint8).reshape(16, 16)
    assert np.array_equal(encode_srgb_u8(decode_srgb_u8(u8)), u8)


def test_encode_clips_out_of_range():
    out = encode_srgb_u8(np.array([-0.5, 0.0, 1.0, 2.0], dtype=np.float32))
    assert out[0] == 0 and out[1] == 0 and out[2] == 255 and out[3] == 255


def test_quantize_u8():
    assert np.array_equal(quantize_u8(np.array([0.0, 0.5, 1.0])),
                          np.array([0, 128, 255], dtype=np.uint8))


def test_dtype_preserved():
    x32 = np.array([0.25], dtype=np.float32)
    x64 = np.array([0.25], dtype=np.float64)
    assert srgb_to_linear(x32).dtype == np.float32
    assert srgb_to_linear(x64).dtype == np.float64
    assert linear_to_srgb(x32).dtype == np.float32
