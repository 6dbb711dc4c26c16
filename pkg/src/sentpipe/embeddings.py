"""Storage and transport of frozen-backbone review embeddings.

A store maps review ids to pooled vectors (optionally per-token
matrices). Files carry a text header and manifest followed by a
little-endian float32 payload; a pure-text payload variant exists for
fixtures. A small HTTP client fetches embeddings from an external
service with retry/backoff.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError

MAGIC = "EMB"
VERSION = "v1"
POOLED = "pooled"
TOKENS = "tokens"


@dataclass
class EmbeddingRecord:
    """One review's representation: pooled vector, optional token matrix."""

    review_id: str
    label_index: int
    pooled: np.ndarray
    tokens: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.pooled.shape[-1]


class EmbeddingStore:
    """Immutable-after-load collection of embedding records."""

    def __init__(self, dim: int, mode: str = POOLED, provenance: str = "memory"):
        if mode not in (POOLED, TOKENS):
            raise ConfigError(f"unknown store mode: {mode!r}")
        self.dim = dim
        self.mode = mode
        self.provenance = provenance
        self._records: dict[str, EmbeddingRecord] = {}

    def add(self, record: EmbeddingRecord):
        if record.review_id in self._records:
            raise DataError(f"duplicate review id: {record.review_id!r}")
        if record.dim != self.dim:
            raise DataError(
                f"record {record.review_id!r} has dimension {record.dim}, "
                f"store expects {self.dim}"
            )
        if not np.all(np.isfinite(record.pooled)):
            raise DataError(f"non-finite pooled vector for id {record.review_id!r}")
        if record.tokens is not None and not np.all(np.isfinite(record.tokens)):
            raise DataError(f"non-finite token matrix for id {record.review_id!r}")
        self._records[record.review_id] = record

    def __len__(self):
        return len(self._records)

    def __contains__(self, review_id):
        return review_id in self._records

    def get(self, review_id: str) -> EmbeddingRecord:
        try:
            return self._records[review_id]
        except KeyError:
            raise DataError(f"no record for review id {review_id!r}") from None

    def ids(self) -> list[str]:
        return list(self._records)

    def records(self) -> list[EmbeddingRecord]:
        return list(self._records.values())

    def sequence(self, review_id: str) -> np.ndarray:
        """The (n, d) input the head consumes; pooled mode yields n = 1."""
        rec = self.get(review_id)
        if self.mode == TOKENS and rec.tokens is not None:
            return rec.tokens
        return rec.pooled.reshape(1, -1)


def _format_floats(values: np.ndarray) -> str:
    return " ".join(repr(float(x)) for x in np.asarray(values, dtype=np.float32).ravel())


def write_store(store: EmbeddingStore, path, text: bool = False):
    """Serialize a store: header, manifest, CRC line, then the payload."""
    path = Path(path)
    records = store.records()
    payload = bytearray()
    text_lines = []
    for rec in records:
        if store.mode == TOKENS:
            data = np.asarray(rec.tokens, dtype="<f4")
        else:
            data = np.asarray(rec.pooled, dtype="<f4")
        if text:
            text_lines.append(_format_floats(data))
        else:
            payload.extend(data.tobytes())
    body = ("\n".join(text_lines) + "\n").encode() if text else bytes(payload)
    crc = zlib.crc32(body)
    variant = " text" if text else ""
    with open(path, "wb") as f:
        f.write(f"{MAGIC} {VERSION} {store.dim} {len(records)} {store.mode}{variant}\n".encode())
        for rec in records:
            n = rec.tokens.shape[0] if store.mode == TOKENS else 1
            f.write(f"{rec.review_id}\t{rec.label_index}\t{n}\n".encode())
        f.write(f"CRC {crc:08x}\n".encode())
        f.write(body)


def load_store(path) -> EmbeddingStore:
    """Parse a store file, validating header, counts, CRC, and finiteness."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"store file not found: {path}")
    with open(path, "rb") as f:
        header = f.readline().decode().split()
        if len(header) not in (5, 6) or header[0] != MAGIC or header[1] != VERSION:
            raise DataError(f"bad store header in {path}")
        dim, count, mode = int(header[2]), int(header[3]), header[4]
        is_text = len(header) == 6 and header[5] == "text"
        if mode not in (POOLED, TOKENS):
            raise DataError(f"unknown store mode in header: {mode!r}")
        manifest = []
        for i in range(count):
            line = f.readline().decode()
            if not line:
                raise DataError(f"manifest truncated at record {i} in {path}")
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise DataError(f"malformed manifest line {i} in {path}")
            manifest.append((parts[0], int(parts[1]), int(parts[2])))
        crc_line = f.readline().decode().split()
        if len(crc_line) != 2 or crc_line[0] != "CRC":
            raise DataError(f"missing CRC line in {path}")
        body = f.read()
    if zlib.crc32(body) != int(crc_line[1], 16):
        raise DataError(f"payload checksum mismatch in {path}")

    store = EmbeddingStore(dim, mode, provenance=str(path))
    if is_text:
        lines = body.decode().splitlines()
        if len(lines) != count:
            raise DataError(
                f"record-count mismatch in {path}: header says {count}, "
                f"payload has {len(lines)}"
            )
        for (rid, label, n), line in zip(manifest, lines):
            values = np.array([float(v) for v in line.split()], dtype=np.float32)
            store.add(_build_record(rid, label, n, values, dim, mode, path))
    else:
        floats = np.frombuffer(body, dtype="<f4")
        expected = sum(n * dim for _, _, n in manifest)
        if len(floats) != expected:
            raise DataError(
                f"payload size mismatch in {path}: expected {expected} floats, "
                f"found {len(floats)}"
            )
        offset = 0
        for rid, label, n in manifest:
            values = floats[offset : offset + n * dim]
            offset += n * dim
            store.add(_build_record(rid, label, n, values, dim, mode, path))
    return store


def _build_record(rid, label, n, values, dim, mode, path) -> EmbeddingRecord:
    if len(values) != n * dim:
        raise DataError(
            f"record {rid!r} in {path} has {len(values)} values, "
            f"expected {n}x{dim}"
        )
    if not np.all(np.isfinite(values)):
        raise DataError(f"non-finite values in record {rid!r} of {path}")
    if mode == TOKENS:
        tokens = values.reshape(n, dim).copy()
        return EmbeddingRecord(rid, label, tokens[0].copy(), tokens)
    return EmbeddingRecord(rid, label, values.reshape(dim).copy())


@dataclass(frozen=True)
class ClusterSpec:
    """Per-class Gaussian cluster: sample count, mean vector, spread."""

    count: int
    mean: np.ndarray
    spread: float

    def __post_init__(self):
        if self.count <= 0:
            raise ConfigError("cluster count must be positive")
        if self.spread < 0:
            raise ConfigError("cluster spread must be nonnegative")


def synthetic_store(seed: int, dim: int, clusters: list[ClusterSpec]) -> EmbeddingStore:
    """Deterministic per-class Gaussian clusters, labeled by cluster index."""
    if dim < 1:
        raise ConfigError("dimension must be at least 1")
    rng = np.random.default_rng(seed)
    store = EmbeddingStore(dim, POOLED, provenance=f"synthetic(seed={seed})")
    for label, spec in enumerate(clusters):
        mean = np.broadcast_to(np.asarray(spec.mean, dtype=np.float64), (dim,))
        draws = mean + spec.spread * rng.standard_normal((spec.count, dim))
        for j in range(spec.count):
            store.add(
                EmbeddingRecord(
                    f"syn-{label}-{j}", label, draws[j].astype(np.float32)
                )
            )
    return store


@dataclass(frozen=True)
class ServiceConfig:
    """Connection settings for a remote embedding service."""

    endpoint: str
    dim: int
    retries: int = 2
    backoff: float = 0.1
    timeout: float = 30.0
    path: str = "/v1/embed"


def fetch_remote(config: ServiceConfig, ids: list[str], texts: list[str]) -> list[EmbeddingRecord]:
    """Fetch one embedding per (id, text), order preserved.

    Transient failures are retried with exponential backoff up to
    config.retries extra attempts; a partial batch is never returned.
    """
    import requests

    if len(ids) != len(texts):
        raise ConfigError("ids and texts must have equal length")
    if not ids:
        return []
    url = config.endpoint.rstrip("/") + config.path
    body = {"items": [{"id": i, "text": t} for i, t in zip(ids, texts)]}
    last_error = None
    for attempt in range(config.retries + 1):
        if attempt:
            time.sleep(config.backoff * (2 ** (attempt - 1)))
        try:
            response = requests.post(url, json=body, timeout=config.timeout)
            if response.status_code >= 500:
                last_error = DataError(
                    f"embedding service returned {response.status_code}"
                )
                continue
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            last_error = DataError(f"embedding service request failed: {exc}")
            continue
        return _parse_service_response(payload, ids, config.dim)
    raise last_error


def _parse_service_response(payload, ids, dim) -> list[EmbeddingRecord]:
    entries = payload.get("embeddings")
    if entries is None or len(entries) != len(ids):
        raise DataError(
            f"service returned {0 if entries is None else len(entries)} embeddings "
            f"for {len(ids)} requests"
        )
    records = []
    for requested, entry in zip(ids, entries):
        if entry.get("id") != requested:
            raise DataError(
                f"service response out of order: expected {requested!r}, "
                f"got {entry.get('id')!r}"
            )
        vector = np.asarray(entry["vector"], dtype=np.float32)
        if vector.shape != (dim,):
            raise DataError(
                f"service returned dimension {vector.shape[-1]} for id "
                f"{requested!r}, configured dimension is {dim}"
            )
        if not np.all(np.isfinite(vector)):
            raise DataError(f"non-finite vector from service for id {requested!r}")
        records.append(EmbeddingRecord(requested, -1, vector))
    return records
