"""Feature-matrix serialization: self-describing binary, CSV, and PGM.

The binary layout is fixed little-endian:

    bytes 0..8    magic ``MTMELFT\\x00``
    bytes 8..12   format version (uint32)
    bytes 12..16  rows = n_mels (uint32)
    bytes 16..20  cols = frame_count (uint32)
    bytes 20..24  length of the config echo (uint32)
    then          config echo, canonical JSON, UTF-8
    then          rows*cols float64 values, row-major

The config echo is serialized with sorted keys and no whitespace, so a
given configuration always produces the same bytes and write -> read ->
write round-trips identically.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .config import FeatureConfig
from .errors import FeatureFileError
from .melfeat import MelFeatureMatrix

__all__ = [
    "FORMATS",
    "MAGIC",
    "VERSION",
    "read_feature_bin",
    "write_feature",
    "write_feature_bin",
    "write_feature_csv",
    "write_feature_pgm",
]

MAGIC = b"MTMELFT\x00"
VERSION = 1
FORMATS = ("bin", "csv", "pgm")

_HEADER = struct.Struct("<III")


def _config_json(config: FeatureConfig) -> bytes:
    return json.dumps(config.describe(), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def write_feature_bin(feat: MelFeatureMatrix, path) -> None:
    """Write the binary format described in the module docstring."""
    echo = _config_json(feat.config)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(VERSION, feat.n_mels, feat.frame_count))
        fh.write(struct.pack("<I", len(echo)))
        fh.write(echo)
        fh.write(np.ascontiguousarray(feat.values, dtype="<f8").tobytes())


def read_feature_bin(path) -> MelFeatureMatrix:
    """Read a binary feature file back into a :class:`MelFeatureMatrix`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:8] != MAGIC:
        raise FeatureFileError(f"bad magic: expected {MAGIC!r}, got {blob[:8]!r}")
    if len(blob) < 8 + _HEADER.size + 4:
        raise FeatureFileError("truncated header")
    version, rows, cols = _HEADER.unpack_from(blob, 8)
    if version != VERSION:
        raise FeatureFileError(f"version: expected {VERSION}, got {version}")
    (echo_len,) = struct.unpack_from("<I", blob, 8 + _HEADER.size)
    data_start = 8 + _HEADER.size + 4 + echo_len
    if len(blob) != data_start + rows * cols * 8:
        raise FeatureFileError(
            f"size mismatch: header promises {rows}x{cols} values, file has "
            f"{max(0, len(blob) - data_start) // 8}")
    try:
        echo = json.loads(blob[8 + _HEADER.size + 4:data_start].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FeatureFileError(f"unreadable config echo: {exc}") from exc
    try:
        config = FeatureConfig.from_describe(echo)
    except ValueError as exc:
        raise FeatureFileError(str(exc)) from exc
    if rows != config.n_mels:
        raise FeatureFileError(
            f"rows: header says {rows}, config says {config.n_mels}")
    values = np.frombuffer(blob, dtype="<f8", count=rows * cols,
                           offset=data_start).reshape(rows, cols)
    try:
        return MelFeatureMatrix(values=values, config=config,
                                transform_mode=config.transform)
    except ValueError as exc:
        raise FeatureFileError(f"invalid feature data: {exc}") from exc


def write_feature_csv(feat: MelFeatureMatrix, path) -> None:
    """Write one CSV row per mel band, config echoed as ``#`` comments.

    Values are formatted with ``repr``, the shortest decimal string that
    round-trips the exact float64.
    """
    lines = ["# mtmel feature matrix"]
    for key, value in sorted(feat.config.describe().items()):
        lines.append(f"# {key}={value}")
    lines.append(f"# rows={feat.n_mels} cols={feat.frame_count}")
    for row in feat.values:
        lines.append(",".join(repr(v) for v in row.tolist()))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_feature_pgm(feat: MelFeatureMatrix, path) -> None:
    """Render the matrix as an 8-bit binary PGM plus a text sidecar.

    Values are mapped affinely from their [p1, p99] percentiles onto
    0..255 and clipped; the percentiles (and the config echo) go into
    ``<path>.txt``. Rows are flipped so the lowest band is the bottom
    image row. A constant matrix renders as all zeros.
    """
    p1, p99 = (float(p) for p in np.percentile(feat.values, [1.0, 99.0]))
    if p99 > p1:
        unit = (feat.values - p1) / (p99 - p1)
    else:
        unit = np.zeros_like(feat.values)
    pixels = np.rint(np.clip(unit, 0.0, 1.0) * 255.0).astype(np.uint8)
    pixels = pixels[::-1, :]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{feat.frame_count} {feat.n_mels}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
    sidecar = [
        "scaling=affine [p1,p99] -> [0,255], clipped",
        f"p1={p1!r}",
        f"p99={p99!r}",
        "orientation=row 0 of the image is the highest mel band",
    ]
    sidecar += [f"{key}={value}"
                for key, value in sorted(feat.config.describe().items())]
    with open(f"{path}.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(sidecar) + "\n")


def write_feature(feat: MelFeatureMatrix, path, fmt: str) -> None:
    """Dispatch on ``fmt`` in {'bin', 'csv', 'pgm'}."""
    if fmt == "bin":
        write_feature_bin(feat, path)
    elif fmt == "csv":
        write_feature_csv(feat, path)
    elif fmt == "pgm":
        write_feature_pgm(feat, path)
    else:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")
