"""EMB v1 store writer.

The format is the external contract with the downstream pipeline:

    EMB v1 <dim> <count> <pooled|tokens>
    <id>\t<label>\t<rows>        (one manifest line per record)
    CRC <crc32 of payload, hex>
    <little-endian float32 payload, records in manifest order>
"""

from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

MAGIC = "EMB"
VERSION = "v1"
POOLED = "pooled"
TOKENS = "tokens"


def write_emb(path, dim: int, mode: str, records):
    """Write records of (review_id, label_index, (rows, dim) float array)."""
    if mode not in (POOLED, TOKENS):
        raise ValueError(f"unknown store mode: {mode!r}")
    path = Path(path)
    payload = bytearray()
    manifest = []
    for review_id, label_index, matrix in records:
        matrix = np.asarray(matrix, dtype="<f4")
        if matrix.ndim == 1:
            matrix = matrix.reshape(1, -1)
        if matrix.shape[1] != dim:
            raise ValueError(
                f"record {review_id!r} has dimension {matrix.shape[1]}, expected {dim}"
            )
        if not np.all(np.isfinite(matrix)):
            raise ValueError(f"non-finite values in record {review_id!r}")
        rows = 1 if mode == POOLED else matrix.shape[0]
        if mode == POOLED and matrix.shape[0] != 1:
            raise ValueError(f"pooled record {review_id!r} must have a single row")
        manifest.append((review_id, label_index, rows))
        payload.extend(matrix.tobytes())
    body = bytes(payload)
    with open(path, "wb") as f:
        f.write(f"{MAGIC} {VERSION} {dim} {len(manifest)} {mode}\n".encode())
        for review_id, label_index, rows in manifest:
            f.write(f"{review_id}\t{label_index}\t{rows}\n".encode())
        f.write(f"CRC {zlib.crc32(body):08x}\n".encode())
        f.write(body)
