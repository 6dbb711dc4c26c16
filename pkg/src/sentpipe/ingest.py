"""Corpus loading, cleaning, label construction, and split statistics.

Two input layouts are supported and always declared, never sniffed:

* ``tsv``: one review per line, columns split / id / score / text.
* ``dirtree``: one file per review under <root>/<split>/<class>/<id>_<score>.txt,
  the usual distribution form of the IMDb corpus.

Empty reviews (zero length after whitespace trim) are removed; scores
the target scheme drops are counted, not errors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DataError
from .polarity import ClassCounts
from .schemes import (
    DROPPED,
    FIVE_STAR_SCALE,
    IMDB_SCALE,
    ClassLabel,
    RawScore,
    SentimentScheme,
    amazon_score_to_label,
    imdb_score_to_label,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledReview:
    review_id: str
    text: str
    label: ClassLabel
    score: RawScore | None = None


@dataclass
class IngestStats:
    """Conservation tally: raw = kept + dropped + empty_removed."""

    raw: int = 0
    kept: int = 0
    dropped: int = 0
    empty_removed: int = 0


@dataclass
class DatasetSplit:
    name: str
    scheme: SentimentScheme
    train: list[LabeledReview]
    test: list[LabeledReview]
    stats: IngestStats = field(default_factory=IngestStats)

    def counts(self, part: str) -> ClassCounts:
        return class_counts(getattr(self, part), self.scheme)


@dataclass(frozen=True)
class CorpusDescriptor:
    """Declares where a corpus lives and how to read it."""

    name: str
    path: Path
    layout: str = "tsv"
    scale: str = IMDB_SCALE

    def __post_init__(self):
        if self.layout not in ("tsv", "dirtree"):
            raise ConfigError(f"unknown corpus layout: {self.layout!r}")
        if self.scale not in (IMDB_SCALE, FIVE_STAR_SCALE):
            raise ConfigError(f"unknown score scale: {self.scale!r}")


def score_to_label(score: RawScore, scheme: SentimentScheme):
    """Scale-appropriate label construction; may return DROPPED."""
    if score.scale == IMDB_SCALE:
        return imdb_score_to_label(score, scheme)
    return amazon_score_to_label(score, scheme)


def class_counts(reviews, scheme: SentimentScheme) -> ClassCounts:
    """Tally of review labels per class; zero for absent classes."""
    return ClassCounts.tally([r.label for r in reviews], scheme)


def _read_tsv(path: Path):
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise DataError(
                    f"{path}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
                )
            split, rid, score, text = parts
            if split not in ("train", "test"):
                raise DataError(f"{path}:{lineno}: unknown split {split!r}")
            try:
                score_value = int(score)
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-integer score {score!r}")
            yield split, rid, score_value, unescape_text(text)


def _read_dirtree(root: Path):
    if not root.is_dir():
        raise DataError(f"corpus directory not found: {root}")
    for split in ("train", "test"):
        split_dir = root / split
        if not split_dir.is_dir():
            continue
        for class_dir in sorted(p for p in split_dir.iterdir() if p.is_dir()):
            for file in sorted(class_dir.glob("*.txt")):
                stem = file.stem
                if "_" not in stem:
                    raise DataError(f"{file}: filename lacks the <id>_<score> form")
                rid, score = stem.rsplit("_", 1)
                try:
                    score_value = int(score)
                except ValueError:
                    raise DataError(f"{file}: non-integer score {score!r}")
                yield split, f"{split}/{class_dir.name}/{rid}", score_value, file.read_text(
                    encoding="utf-8"
                )


def ingest(
    source: CorpusDescriptor,
    scheme: SentimentScheme,
    seed: int = 0,
    expected_counts: dict | None = None,
) -> DatasetSplit:
    """Load, clean, and label a corpus into a deterministic train/test split.

    expected_counts, when given, maps 'train'/'test' to ClassCounts that
    the ingested split must match exactly.
    """
    reader = _read_tsv(source.path) if source.layout == "tsv" else _read_dirtree(source.path)
    parts = {"train": [], "test": []}
    stats = IngestStats()
    seen = set()
    for split, rid, score_value, text in reader:
        stats.raw += 1
        if rid in seen:
            raise DataError(f"duplicate review id {rid!r} in {source.name}")
        seen.add(rid)
        if not text.strip():
            stats.empty_removed += 1
            continue
        label = score_to_label(RawScore(score_value, source.scale), scheme)
        if label is DROPPED:
            stats.dropped += 1
            continue
        stats.kept += 1
        parts[split].append(
            LabeledReview(rid, text, label, RawScore(score_value, source.scale))
        )
    # deterministic merge order regardless of reader order
    for split in parts:
        parts[split].sort(key=lambda r: r.review_id)
    result = DatasetSplit(source.name, scheme, parts["train"], parts["test"], stats)
    if expected_counts:
        for part, expected in expected_counts.items():
            actual = result.counts(part)
            if actual != expected:
                raise DataError(
                    f"{source.name} {part} counts {actual.counts} do not match "
                    f"expected {expected.counts}"
                )
    else:
        log.info(
            "%s: no expected counts configured; statistics verification skipped",
            source.name,
        )
    return result


def escape_text(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_text(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            if nxt == "t":
                out.append("\t")
                i += 2
                continue
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def write_prepared(split: DatasetSplit, out_dir, seed: int):
    """Emit the cleaned review tables plus a key/value manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for part in ("train", "test"):
        with open(out_dir / f"{part}.tsv", "w", encoding="utf-8") as f:
            for review in getattr(split, part):
                f.write(
                    f"{review.review_id}\t{review.label.index}\t{escape_text(review.text)}\n"
                )
    with open(out_dir / "manifest.txt", "w", encoding="utf-8") as f:
        f.write(f"dataset = {split.name}\n")
        f.write(f"scheme = {split.scheme.name}\n")
        f.write(f"seed = {seed}\n")
        f.write(f"raw = {split.stats.raw}\n")
        f.write(f"kept = {split.stats.kept}\n")
        f.write(f"dropped = {split.stats.dropped}\n")
        f.write(f"empty_removed = {split.stats.empty_removed}\n")
        for part in ("train", "test"):
            counts = split.counts(part)
            f.write(f"{part}.count = {counts.total}\n")
            f.write(
                f"{part}.class_counts = "
                + ",".join(str(c) for c in counts.counts)
                + "\n"
            )


def read_prepared(path) -> list[tuple[str, int, str]]:
    """Read a cleaned review table back as (id, label index, text) rows."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"prepared review table not found: {path}")
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise DataError(
                    f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
                )
            rows.append((parts[0], int(parts[1]), unescape_text(parts[2])))
    return rows
