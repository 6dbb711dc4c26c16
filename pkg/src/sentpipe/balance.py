"""Class-imbalance remedies: SMOTE over numeric features and synonym
replacement driven by word-embedding proximity over raw text.

Both paths are deterministic given a seed and never mutate the original
rows or texts; synthetic additions are flagged in provenance.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError


@dataclass
class FeatureMatrix:
    """Per-review feature vectors with aligned integer labels.

    synthetic[i] is True for rows SMOTE generated rather than observed.
    """

    rows: np.ndarray
    labels: np.ndarray
    synthetic: np.ndarray = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.rows.ndim != 2:
            raise DataError("feature rows must form a 2-D matrix")
        if len(self.rows) != len(self.labels):
            raise DataError("row and label counts differ")
        if self.synthetic is None:
            self.synthetic = np.zeros(len(self.rows), dtype=bool)
        else:
            self.synthetic = np.asarray(self.synthetic, dtype=bool)

    def class_count(self, label: int) -> int:
        return int(np.sum(self.labels == label))


def features_from_store(store) -> FeatureMatrix:
    """Pooled vectors of an embedding store as a SMOTE-ready matrix."""
    records = store.records()
    if not records:
        raise DataError("store has no records")
    rows = np.stack([r.pooled for r in records])
    labels = np.array([r.label_index for r in records])
    return FeatureMatrix(rows, labels)


def smote_resample(features: FeatureMatrix, k: int, target: int, seed: int) -> FeatureMatrix:
    """Oversample every class up to ``target`` rows by segment interpolation.

    Each synthetic row is x + lam * (nn - x) for a uniformly chosen
    minority row x, one of its k nearest same-class neighbors nn
    (Euclidean), and lam uniform on [0, 1]. Original rows are preserved
    verbatim and come first.
    """
    if k < 1:
        raise ConfigError("neighbor count k must be at least 1")
    rng = np.random.default_rng(seed)
    classes = sorted(set(features.labels.tolist()))
    new_rows = []
    new_labels = []
    for cls in classes:
        idx = np.flatnonzero(features.labels == cls)
        have = len(idx)
        if have > target:
            raise ConfigError(
                f"target {target} is below the existing count {have} for class {cls}"
            )
        need = target - have
        if need == 0:
            continue
        if have < 2:
            raise DataError(
                f"class {cls} has {have} sample(s); SMOTE needs at least 2"
            )
        points = features.rows[idx]
        # all-pairs distances within the class; self excluded via inf
        diff = points[:, None, :] - points[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        np.fill_diagonal(dist, np.inf)
        neighbor_ids = np.argsort(dist, axis=1, kind="stable")[:, : min(k, have - 1)]
        for _ in range(need):
            base = int(rng.integers(have))
            nn = int(neighbor_ids[base][int(rng.integers(neighbor_ids.shape[1]))])
            lam = rng.uniform()
            new_rows.append(points[base] + lam * (points[nn] - points[base]))
            new_labels.append(cls)
    if not new_rows:
        return FeatureMatrix(
            features.rows.copy(), features.labels.copy(), features.synthetic.copy()
        )
    rows = np.vstack([features.rows, np.array(new_rows)])
    labels = np.concatenate([features.labels, np.array(new_labels)])
    synthetic = np.concatenate(
        [features.synthetic, np.ones(len(new_rows), dtype=bool)]
    )
    return FeatureMatrix(rows, labels, synthetic)


class WordVectorTable:
    """Plain-text word embedding table: ``word v1 v2 ... vd`` per line."""

    def __init__(self, vectors: dict[str, np.ndarray]):
        if not vectors:
            raise DataError("word vector table is empty")
        dims = {v.shape[-1] for v in vectors.values()}
        if len(dims) != 1:
            raise DataError(f"inconsistent vector widths in table: {sorted(dims)}")
        self.vectors = vectors
        self.dim = dims.pop()
        self._words = list(vectors)
        self._matrix = np.stack([vectors[w] for w in self._words])

    def __contains__(self, word):
        return word in self.vectors

    def __len__(self):
        return len(self.vectors)

    @classmethod
    def load(cls, path) -> "WordVectorTable":
        path = Path(path)
        if not path.exists():
            raise DataError(f"word vector table not found: {path}")
        vectors = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                parts = line.split()
                if not parts:
                    continue
                try:
                    vectors[parts[0]] = np.array([float(x) for x in parts[1:]])
                except ValueError:
                    raise DataError(f"malformed vector on line {lineno} of {path}")
        return cls(vectors)

    def nearest(self, word: str) -> str:
        """Closest other word by Euclidean distance."""
        if word not in self.vectors:
            raise DataError(f"word {word!r} not in table")
        deltas = self._matrix - self.vectors[word]
        dist = np.sqrt((deltas * deltas).sum(axis=1))
        dist[self._words.index(word)] = np.inf
        return self._words[int(np.argmin(dist))]


@dataclass
class AugmentationBatch:
    """One-to-one mapping from minority texts to their augmented forms."""

    v_in: list[str]
    v_aug: list[str]

    def __post_init__(self):
        if len(self.v_in) != len(self.v_aug):
            raise DataError("augmentation must map inputs to outputs one-to-one")


def augment_texts(
    v_in: list[str],
    table: WordVectorTable,
    rate: float,
    seed: int,
) -> AugmentationBatch:
    """Replace a sampled ``rate`` fraction of in-table words per text.

    Replacement is the nearest embedding neighbor of the word, excluding
    itself; words outside the table pass through untouched.
    """
    if not 0 < rate <= 1:
        raise ConfigError("replacement rate must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    augmented = []
    for text in v_in:
        words = text.split()
        candidates = [i for i, w in enumerate(words) if w.lower() in table]
        if candidates:
            n_replace = max(1, int(round(rate * len(candidates))))
            chosen = rng.choice(len(candidates), size=n_replace, replace=False)
            for ci in sorted(int(c) for c in chosen):
                i = candidates[ci]
                words[i] = table.nearest(words[i].lower())
        augmented.append(" ".join(words))
    return AugmentationBatch(list(v_in), augmented)


def merge_balanced(original, additions):
    """Union of original data and synthetic/augmented additions.

    Originals come first and are preserved verbatim; additions are
    flagged synthetic. Accepts FeatureMatrix pairs or list-of-text pairs.
    """
    if isinstance(original, FeatureMatrix):
        if not isinstance(additions, FeatureMatrix):
            raise DataError("cannot merge a FeatureMatrix with non-features")
        if len(additions.rows) and additions.rows.shape[1] != original.rows.shape[1]:
            raise DataError("feature widths differ between original and additions")
        if not len(additions.rows):
            return FeatureMatrix(
                original.rows.copy(), original.labels.copy(), original.synthetic.copy()
            )
        return FeatureMatrix(
            np.vstack([original.rows, additions.rows]),
            np.concatenate([original.labels, additions.labels]),
            np.concatenate(
                [original.synthetic, np.ones(len(additions.rows), dtype=bool)]
            ),
        )
    return list(original) + list(additions)
