"""Photometric training augmentations, reproducible from a seed.

Two augmentations operate on linear-light images: an exposure gain to
mimic under-/overexposure, and grayscale conversion (Rec. 709 luma
weights in linear light) to push models toward structural cues. Sampling
is a pure function of (seed, config), so dataset builds replay exactly.
"""

from dataclasses import dataclass

import math

import numpy as np

from .errors import InvalidConfig, NonPositiveGain

#: Rec. 709 luma weights, applied to linear RGB.
LUMA_WEIGHTS = (0.2126, 0.7152, 0.0722)


@dataclass(frozen=True)
class AugmentationConfig:
    """Sampling ranges; gain is drawn log-uniformly over [gain_min, gain_max]."""

    gain_min: float = 0.5
    gain_max: float = 2.0
    grayscale_prob: float = 0.1

    def __post_init__(self):
        if not (math.isfinite(self.gain_min) and math.isfinite(self.gain_max)
                and 0.0 < self.gain_min <= self.gain_max):
            raise InvalidConfig(
                f"gain interval must satisfy 0 < min <= max, "
                f"got [{self.gain_min}, {self.gain_max}]"
            )
        if not 0.0 <= self.grayscale_prob <= 1.0:
            raise InvalidConfig(
                f"grayscale_prob must be in [0, 1], got {self.grayscale_prob}"
            )


@dataclass(frozen=True)
class AugmentationSpec:
    """One sampled augmentation: exposure multiplier, grayscale flag, seed."""

    exposure_gain: float
    grayscale: bool
    seed: int


def apply_exposure(img, gain):
    """Multiply every channel by ``gain`` and clamp to [0, 1]."""
    if not gain > 0.0:
        raise NonPositiveGain(f"exposure gain must be > 0, got {gain}")
    img = np.asarray(img)
    return np.clip(img * img.dtype.type(gain), 0.0, 1.0)


def to_grayscale(img):
    """Replace all three channels with Rec. 709 linear luminance."""
    img = np.asarray(img)
    weights = np.asarray(LUMA_WEIGHTS, dtype=img.dtype)
    luma = img @ weights
    return np.repeat(luma[..., None], 3, axis=-1)


def sample_augmentation(seed, config):
    """Draw a deterministic AugmentationSpec from (seed, config)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if config.gain_min == config.gain_max:
        gain = config.gain_min
        rng.uniform()  # keep the stream layout identical either way
    else:
        gain = math.exp(rng.uniform(math.log(config.gain_min),
                                    math.log(config.gain_max)))
    grayscale = bool(rng.random() < config.grayscale_prob)
    return AugmentationSpec(exposure_gain=gain, grayscale=grayscale, seed=int(seed))


def apply_augmentation(img, spec):
    """Apply a sampled spec: exposure first, then optional grayscale."""
    out = apply_exposure(img, spec.exposure_gain)
    if spec.grayscale:
        out = to_grayscale(out)
    return out


def derive_record_seed(global_seed, index, stream=0):
    """Stable 64-bit seed for one manifest record and sampling stream."""
    ss = np.random.SeedSequence((int(global_seed), int(index), int(stream)))
    return int(ss.generate_state(1, np.uint64)[0])
