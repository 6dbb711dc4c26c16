"""Categorical sentiment scopes and raw-score -> label mappings.

Four ordered label universes (2/3/4/5 classes) plus the rules that turn
IMDb 1-10 scores and five-star scores into labels, including the
binary-tree refinement of coarse classes into sub-classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .errors import ConfigError, DataError


class Sentiment(IntEnum):
    """The five sentiment categories, ordered most-negative first."""

    HIGHLY_NEGATIVE = 0
    NEGATIVE = 1
    NEUTRAL = 2
    POSITIVE = 3
    HIGHLY_POSITIVE = 4


_SCHEME_CLASSES = {
    2: (Sentiment.NEGATIVE, Sentiment.POSITIVE),
    3: (Sentiment.NEGATIVE, Sentiment.NEUTRAL, Sentiment.POSITIVE),
    4: (
        Sentiment.HIGHLY_NEGATIVE,
        Sentiment.NEGATIVE,
        Sentiment.POSITIVE,
        Sentiment.HIGHLY_POSITIVE,
    ),
    5: (
        Sentiment.HIGHLY_NEGATIVE,
        Sentiment.NEGATIVE,
        Sentiment.NEUTRAL,
        Sentiment.POSITIVE,
        Sentiment.HIGHLY_POSITIVE,
    ),
}

_SCHEME_NAMES = {2: "binary", 3: "three", 4: "four", 5: "five"}
_NAME_TO_ARITY = {v: k for k, v in _SCHEME_NAMES.items()}


@dataclass(frozen=True)
class SentimentScheme:
    """An ordered categorical label universe of 2, 3, 4, or 5 classes."""

    arity: int

    def __post_init__(self):
        if self.arity not in _SCHEME_CLASSES:
            raise ConfigError(f"unsupported scheme arity: {self.arity}")

    @property
    def classes(self) -> tuple[Sentiment, ...]:
        return _SCHEME_CLASSES[self.arity]

    @property
    def name(self) -> str:
        """Serialized scheme name used in configs and reports."""
        return _SCHEME_NAMES[self.arity]

    @classmethod
    def from_name(cls, name: str) -> "SentimentScheme":
        if name not in _NAME_TO_ARITY:
            raise ConfigError(f"unknown scheme name: {name!r}")
        return cls(_NAME_TO_ARITY[name])

    def index_of(self, sentiment: Sentiment) -> int:
        try:
            return self.classes.index(sentiment)
        except ValueError:
            raise DataError(
                f"{sentiment.name} is not a class of the {self.name} scheme"
            ) from None

    def label(self, sentiment: Sentiment) -> "ClassLabel":
        return ClassLabel(self.index_of(sentiment), self)


BINARY = SentimentScheme(2)
THREE = SentimentScheme(3)
FOUR = SentimentScheme(4)
FIVE = SentimentScheme(5)


@dataclass(frozen=True)
class ClassLabel:
    """A class index bound to its scheme."""

    index: int
    scheme: SentimentScheme

    def __post_init__(self):
        if not 0 <= self.index < self.scheme.arity:
            raise DataError(
                f"class index {self.index} out of range for {self.scheme.name}"
            )

    @property
    def sentiment(self) -> Sentiment:
        return self.scheme.classes[self.index]


class Dropped:
    """Marker for reviews deliberately omitted by a mapping (neutral stars)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Dropped"


DROPPED = Dropped()

IMDB_SCALE = "imdb-1-to-10"
FIVE_STAR_SCALE = "five-star-1-to-5"

# 5 and 6 are the neutral ground the IMDb corpus never assigns.
VALID_IMDB_SCORES = frozenset({1, 2, 3, 4, 7, 8, 9, 10})


@dataclass(frozen=True)
class RawScore:
    """An integer review score on one of the two supported scales."""

    value: int
    scale: str = IMDB_SCALE

    def __post_init__(self):
        if self.scale == IMDB_SCALE:
            if self.value not in VALID_IMDB_SCORES:
                raise DataError(f"invalid IMDb score: {self.value}")
        elif self.scale == FIVE_STAR_SCALE:
            if not 1 <= self.value <= 5:
                raise DataError(f"invalid five-star score: {self.value}")
        else:
            raise ConfigError(f"unknown score scale: {self.scale!r}")


def imdb_score_to_label(score: RawScore, scheme: SentimentScheme) -> ClassLabel:
    """Map an IMDb 1-10 score into the 2-, 3-, or 4-class scheme."""
    if score.scale != IMDB_SCALE:
        raise ConfigError(f"expected an IMDb score, got scale {score.scale!r}")
    s = score.value
    if scheme.arity == 2:
        return scheme.label(Sentiment.NEGATIVE if s <= 4 else Sentiment.POSITIVE)
    if scheme.arity == 3:
        if s <= 3:
            return scheme.label(Sentiment.NEGATIVE)
        if s in (4, 7):
            return scheme.label(Sentiment.NEUTRAL)
        return scheme.label(Sentiment.POSITIVE)
    if scheme.arity == 4:
        if s <= 2:
            return scheme.label(Sentiment.HIGHLY_NEGATIVE)
        if s <= 4:
            return scheme.label(Sentiment.NEGATIVE)
        if s <= 8:
            return scheme.label(Sentiment.POSITIVE)
        return scheme.label(Sentiment.HIGHLY_POSITIVE)
    raise ConfigError("no 5-class mapping is defined for IMDb scores")


def amazon_score_to_label(score, scheme):
    """Map a five-star score into the 2- or 5-class scheme.

    Returns DROPPED for the neutral 3-star score under the binary scheme.
    """
    if score.scale != FIVE_STAR_SCALE:
        raise ConfigError(f"expected a five-star score, got scale {score.scale!r}")
    s = score.value
    if scheme.arity == 2:
        if s <= 2:
            return scheme.label(Sentiment.NEGATIVE)
        if s == 3:
            return DROPPED
        return scheme.label(Sentiment.POSITIVE)
    if scheme.arity == 5:
        return ClassLabel(s - 1, scheme)
    raise ConfigError(
        f"five-star scores map only to binary or five-class schemes, not {scheme.name}"
    )


def binary_tree_split(parent: ClassLabel, score: RawScore) -> ClassLabel:
    """Refine a binary label into its 4-class child using the raw score."""
    if parent.scheme.arity != 2:
        raise ConfigError("binary_tree_split expects a 2-class parent label")
    expected = imdb_score_to_label(score, BINARY)
    if expected.sentiment != parent.sentiment:
        raise DataError(
            f"parent label {parent.sentiment.name} inconsistent with score {score.value}"
        )
    return imdb_score_to_label(score, FOUR)


def coarsen_to_binary(label: ClassLabel) -> ClassLabel:
    """Collapse a 4-class label back to its binary parent ({HN,N}->N, {P,HP}->P)."""
    if label.scheme.arity != 4:
        raise ConfigError("coarsen_to_binary expects a 4-class label")
    negative = label.sentiment in (Sentiment.HIGHLY_NEGATIVE, Sentiment.NEGATIVE)
    return BINARY.label(Sentiment.NEGATIVE if negative else Sentiment.POSITIVE)
