import numpy as np
import pytest
from PIL import Image

from uwbench.depthio import write_pfm, write_png16
from uwbench.water import default_table


@pytest.fixture(scope="session")
def table():
    return default_table()


def make_rgb_u8(rng, size=(12, 16)):
    h, w = size
    return (rng.random((h, w, 3)) * 255).astype(np.uint8)


def make_depth(rng, size=(12, 16), low=0.5, high=6.0):
    h, w = size
    return (rng.random((h, w)) * (high - low) + low).astype(np.float32)


@pytest.fixture
def rgbd_tree(tmp_path):
    """Build a paired RGB/depth tree; returns (rgb_root, depth_root, names)."""

    def build(n=3, size=(12, 16), seed=0, depth_fmt="pfm", depth=None,
              subdir="", stem="im{i:03d}"):
        rng = np.random.default_rng(seed)
        rgb_root = tmp_path / "rgb"
        depth_root = tmp_path / "depth"
        (rgb_root / subdir).mkdir(parents=True, exist_ok=True)
        (depth_root / subdir).mkdir(parents=True, exist_ok=True)
        names = []
        for i in range(n):
            name = stem.format(i=i)
            rel = f"{subdir}/{name}" if subdir else name
            Image.fromarray(make_rgb_u8(rng, size)).save(rgb_root / f"{rel}.png")
            d = depth if depth is not None else make_depth(rng, size)
            if depth_fmt == "pfm":
                write_pfm(d, depth_root / f"{rel}.pfm")
            else:
                write_png16(d, depth_root / f"{rel}.png", meters_per_unit=0.001)
            names.append(rel)
        return rgb_root, depth_root, names

    return build


def tree_bytes(root):
    """{relative posix path: bytes} for every file under root."""
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }
