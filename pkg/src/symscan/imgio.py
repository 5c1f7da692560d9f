"""Image and dataset persistence: NetPBM (dependency-free), PNG, CSV."""

from __future__ import annotations

import csv
import io

import numpy as np

from symscan.imaging import TM_BACKGROUND, TM_CONTOUR, TM_GAP, PixelDataset, TriMask

_TRIMASK_GRAY = {TM_BACKGROUND: 0, TM_GAP: 128, TM_CONTOUR: 255}
_GRAY_TRIMASK = {v: k for k, v in _TRIMASK_GRAY.items()}


def write_pgm(path, arr: np.ndarray) -> None:
    """Raw (P5) 8-bit grayscale."""
    a = np.asarray(arr, dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{a.shape[1]} {a.shape[0]}\n255\n".encode())
        fh.write(a.tobytes())


def write_pbm(path, binary: np.ndarray) -> None:
    """Raw (P4) bitmap; 1 bits are foreground."""
    b = (np.asarray(binary) != 0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P4\n{b.shape[1]} {b.shape[0]}\n".encode())
        fh.write(np.packbits(b, axis=1).tobytes())


def _read_netpbm_header(fh) -> tuple[bytes, list[int]]:
    magic = fh.read(2)
    if magic not in (b"P4", b"P5"):
        raise ValueError(f"unsupported NetPBM magic {magic!r}")
    fields = []
    want = 2 if magic == b"P4" else 3
    while len(fields) < want:
        token = b""
        ch = fh.read(1)
        while ch.isspace():
            ch = fh.read(1)
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = fh.read(1)
            continue
        while ch and not ch.isspace():
            token += ch
            ch = fh.read(1)
        if not token:
            raise ValueError("truncated NetPBM header")
        fields.append(int(token))
    return magic, fields


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic, (w, h, maxval) = _read_netpbm_header(fh)
        if magic != b"P5" or maxval > 255:
            raise ValueError("expected 8-bit P5 PGM")
        data = fh.read(w * h)
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w).copy()


def read_pbm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic, (w, h) = _read_netpbm_header(fh)
        if magic != b"P4":
            raise ValueError("expected P4 PBM")
        row_bytes = (w + 7) // 8
        data = fh.read(row_bytes * h)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8).reshape(h, row_bytes),
                         axis=1)
    return bits[:, :w].astype(np.uint8)


def save_trimask(path, mask: TriMask) -> None:
    gray = np.zeros_like(mask.pixels)
    for code, g in _TRIMASK_GRAY.items():
        gray[mask.pixels == code] = g
    write_pgm(path, gray)


def load_trimask(path) -> TriMask:
    gray = read_pgm(path)
    pixels = np.zeros_like(gray)
    known = np.zeros(gray.shape, dtype=bool)
    for g, code in _GRAY_TRIMASK.items():
        sel = gray == g
        pixels[sel] = code
        known |= sel
    if not known.all():
        raise ValueError("PGM contains values other than 0/128/255")
    return TriMask(pixels)


def save_dataset_csv(path, ds: PixelDataset) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "class"])
        for (x, y), label in zip(ds.coords, ds.labels):
            writer.writerow([repr(float(x)), repr(float(y)), int(label)])


def load_dataset_csv(path) -> PixelDataset:
    coords = []
    labels = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "y", "class"]:
            raise ValueError(f"unexpected CSV header {header}")
        for x, y, label in reader:
            coords.append((float(x), float(y)))
            labels.append(int(label))
    return PixelDataset(np.asarray(coords, dtype=np.float64),
                        np.asarray(labels, dtype=np.uint8))


def save_png(path, arr: np.ndarray) -> None:
    """8-bit grayscale (H,W) or RGB (H,W,3) PNG."""
    from PIL import Image

    a = np.asarray(arr, dtype=np.uint8)
    Image.fromarray(a, mode="L" if a.ndim == 2 else "RGB").save(path, format="PNG")


def png_bytes(arr: np.ndarray) -> bytes:
    """Encode as PNG in memory (used for byte-stable golden checks)."""
    from PIL import Image

    a = np.asarray(arr, dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(a, mode="L" if a.ndim == 2 else "RGB").save(buf, format="PNG")
    return buf.getvalue()
