"""Reading and writing elevation maps: PGM (P2/P5), 8-bit PNG, JSON grids."""
from __future__ import annotations

import io
import json
import os
from typing import Optional, Union

import numpy as np

from .terrain import HeightField

__all__ = [
    "DEMFormatError",
    "load_dem",
    "parse_pgm",
    "write_pgm",
    "grid_to_json",
    "grid_from_json",
    "heightfield_to_json",
    "heightfield_from_json",
    "LUMA_WEIGHTS",
]

# ITU-R BT.601 luma
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class DEMFormatError(ValueError):
    """Malformed or unsupported elevation image."""


def _pgm_tokens(data: bytes, count: int, start: int):
    """Pull ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens = []
    i = start
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i >= n:
            raise DEMFormatError("truncated PGM header")
        if data[i:i + 1] == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < n and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
            j += 1
        tokens.append(data[i:j])
        i = j
    return tokens, i


def parse_pgm(data: bytes) -> np.ndarray:
    """Decode a P2 (ASCII) or P5 (binary) PGM with maxval <= 255."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise DEMFormatError(f"not a PGM file (magic {magic!r})")
    tokens, pos = _pgm_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise DEMFormatError(f"malformed PGM header {tokens!r}") from exc
    if width <= 0 or height <= 0:
        raise DEMFormatError(f"zero-size image ({width}x{height})")
    if maxval <= 0:
        raise DEMFormatError(f"invalid maxval {maxval}")
    if maxval > 255:
        raise DEMFormatError(f"unsupported bit depth: maxval {maxval} (8-bit only)")
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raw = data[pos + 1:pos + 1 + count]
        if len(raw) < count:
            raise DEMFormatError(f"truncated raster: {len(raw)} of {count} bytes")
        values = np.frombuffer(raw, dtype=np.uint8)
    else:
        body = data[pos:].split()
        if len(body) < count:
            raise DEMFormatError(f"truncated raster: {len(body)} of {count} samples")
        try:
            values = np.array([int(t) for t in body[:count]], dtype=np.int64)
        except ValueError as exc:
            raise DEMFormatError("non-integer sample in P2 raster") from exc
    if values.max(initial=0) > maxval or values.min(initial=0) < 0:
        raise DEMFormatError("sample outside [0, maxval]")
    return values.reshape(height, width).astype(float)


def _decode_png(data: bytes) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DEMFormatError(f"cannot decode PNG: {exc}") from exc
    if img.width == 0 or img.height == 0:
        raise DEMFormatError("zero-size image")
    mode = img.mode
    if mode in ("I", "I;16", "I;16B", "I;16L", "F"):
        raise DEMFormatError(f"unsupported bit depth (mode {mode}); 8-bit only")
    if mode == "L":
        return np.asarray(img, dtype=float)
    if mode == "LA":
        return np.asarray(img, dtype=float)[..., 0]
    if mode == "1":
        return np.asarray(img.convert("L"), dtype=float)
    rgb = np.asarray(img.convert("RGB"), dtype=float)
    w = np.array(LUMA_WEIGHTS)
    return rgb @ w


def load_dem(source: Union[bytes, str, os.PathLike], format: Optional[str] = None) -> HeightField:
    """Read an 8-bit grayscale elevation image into a unit-spaced heightfield.

    ``source`` is the raw payload or a path.  ``format`` is one of
    ``"pgm"``, ``"png"`` or ``None`` to sniff the magic bytes.  RGB images
    are reduced with BT.601 luma weights.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = bytes(source)
    if not data:
        raise DEMFormatError("empty payload")
    fmt = (format or "").lower()
    if not fmt:
        if data[:2] in (b"P2", b"P5"):
            fmt = "pgm"
        elif data.startswith(_PNG_MAGIC):
            fmt = "png"
        else:
            raise DEMFormatError("unrecognised image format")
    if fmt in ("pgm", "p2", "p5", "pgm-p2", "pgm-p5"):
        grid = parse_pgm(data)
    elif fmt in ("png", "png-8bit-gray"):
        grid = _decode_png(data)
    else:
        raise DEMFormatError(f"unsupported format {format!r}")
    if grid.shape[0] < 2 or grid.shape[1] < 2:
        raise DEMFormatError(f"image too small for a heightfield: {grid.shape}")
    return HeightField(grid)


def write_pgm(grid, binary: bool = True, maxval: Optional[int] = None) -> bytes:
    """Encode a grid as PGM.  Values are rounded and clamped to ``[0, maxval]``."""
    a = np.asarray(grid, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("PGM needs a non-empty 2D grid")
    if maxval is None:
        maxval = 255
    a = np.clip(np.rint(a), 0, maxval).astype(np.int64)
    h, w = a.shape
    header = f"P{5 if binary else 2}\n{w} {h}\n{maxval}\n".encode("ascii")
    if binary:
        dtype = ">u2" if maxval > 255 else np.uint8
        return header + a.astype(dtype).tobytes()
    lines = [" ".join(str(v) for v in row) for row in a]
    return header + ("\n".join(lines) + "\n").encode("ascii")


def grid_to_json(grid, spacing=(1.0, 1.0), origin=(0.0, 0.0), **extra) -> dict:
    a = np.asarray(grid)
    dx, dy = spacing
    out = {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "spacing": float(dx) if dx == dy else [float(dx), float(dy)],
        "origin": [float(origin[0]), float(origin[1])],
        "data": [float(v) for v in a.ravel()],
    }
    for key, value in extra.items():
        if isinstance(value, np.ndarray):
            value = [int(v) if value.dtype.kind in "bi" else float(v) for v in value.ravel()]
        out[key] = value
    return out


def grid_from_json(obj: dict):
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = np.asarray(obj["data"], dtype=float)
    if data.size != rows * cols:
        raise ValueError(f"grid JSON has {data.size} values for {rows}x{cols}")
    spacing = obj.get("spacing", 1.0)
    if np.ndim(spacing) == 0:
        spacing = (float(spacing), float(spacing))
    return data.reshape(rows, cols), tuple(spacing), tuple(obj.get("origin", (0.0, 0.0)))


def heightfield_to_json(hf: HeightField) -> dict:
    return grid_to_json(hf.elevations, hf.spacing, hf.origin)


def heightfield_from_json(obj: Union[dict, str]) -> HeightField:
    if isinstance(obj, str):
        obj = json.loads(obj)
    data, spacing, origin = grid_from_json(obj)
    return HeightField(data, spacing, origin)
