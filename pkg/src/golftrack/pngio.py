"""PNG encode/decode for 8-bit grayscale and RGB image arrays."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image


def _check(arr: np.ndarray) -> np.ndarray:
    if arr.dtype != np.uint8:
        raise ValueError(f"expected uint8 image, got {arr.dtype}")
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
        raise ValueError(f"expected (h, w) or (h, w, 3) image, got shape {arr.shape}")
    return arr


def encode_png(arr: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(_check(arr)).save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        if im.mode not in ("L", "RGB"):
            im = im.convert("RGB" if im.mode in ("RGBA", "P") else "L")
        return np.asarray(im)


def save_png(path: str | Path, arr: np.ndarray) -> None:
    Image.fromarray(_check(arr)).save(str(path), format="PNG")


def load_png(path: str | Path) -> np.ndarray:
    with Image.open(str(path)) as im:
        if im.mode not in ("L", "RGB"):
            im = im.convert("RGB" if im.mode in ("RGBA", "P") else "L")
        return np.asarray(im)
