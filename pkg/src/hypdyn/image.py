"""Binary PGM (P5) images and the cat map acting on the pixel lattice."""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .errors import DomainError
from .toral import IntMat2, cat_matrix, mat_pow, order_mod

__all__ = ["read_pgm", "write_pgm", "encode_pgm", "decode_pgm", "cat_image", "image_order", "MAX_SIDE"]

MAX_SIDE = 4096


def _tokens(data: bytes, count: int):
    """First ``count`` whitespace-separated header tokens and the body offset."""
    out = []
    i = 0
    n = len(data)
    while len(out) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < n and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
            j += 1
        if j == i:
            raise ValueError("truncated PGM header")
        out.append(data[i:j])
        i = j
    # exactly one whitespace byte separates the header from the raster
    return out, i + 1


def decode_pgm(data: bytes) -> np.ndarray:
    (magic, w, h, maxval), offset = _tokens(data, 4)
    if magic != b"P5":
        raise ValueError("only binary PGM (P5) is supported")
    w, h, maxval = int(w), int(h), int(maxval)
    if not 0 < maxval < 65536:
        raise ValueError(f"bad PGM maxval {maxval}")
    dtype = np.dtype(np.uint8) if maxval < 256 else np.dtype(">u2")
    need = w * h * dtype.itemsize
    body = data[offset:offset + need]
    if len(body) != need:
        raise ValueError("truncated PGM raster")
    return np.frombuffer(body, dtype=dtype).reshape(h, w).astype(np.uint16 if maxval >= 256 else np.uint8)


def encode_pgm(img: np.ndarray, maxval: int | None = None) -> bytes:
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("PGM images are two-dimensional")
    if maxval is None:
        maxval = 255 if img.dtype == np.uint8 else max(255, int(img.max(initial=0)))
    if img.max(initial=0) > maxval:
        raise ValueError("pixel value exceeds maxval")
    h, w = img.shape
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    body = img.astype(np.uint8 if maxval < 256 else ">u2").tobytes()
    return header + body


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def write_pgm(path, img: np.ndarray, maxval: int | None = None) -> None:
    """Write atomically: a temp file in the target directory, then rename."""
    data = encode_pgm(img, maxval)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".pgm")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def cat_image(img: np.ndarray, n: int, m: IntMat2 | None = None) -> np.ndarray:
    """Pull the image back along ``m**n`` on the lattice ``(i/s, j/s)``.

    Output pixel ``(i, j)`` (row, column) takes the input value at
    ``m**-n (i, j) mod s``, so each application is a pixel permutation.
    """
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise DomainError(f"cat map images must be square, got shape {img.shape}")
    s = img.shape[0]
    if s > MAX_SIDE:
        raise DomainError(f"image side {s} exceeds {MAX_SIDE}")
    m = cat_matrix() if m is None else m
    back = mat_pow(m, -n).mod(s)
    i, j = np.indices((s, s), dtype=np.int64)
    src_i = (back.m11 * i + back.m12 * j) % s
    src_j = (back.m21 * i + back.m22 * j) % s
    return img[src_i, src_j]


def image_order(side: int, m: IntMat2 | None = None) -> int:
    """Number of iterations after which every ``side x side`` image recurs."""
    return order_mod(cat_matrix() if m is None else m, side)
