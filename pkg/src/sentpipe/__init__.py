"""Sentiment-analysis pipeline: label schemes, tokenization, a trainable
BiLSTM classification head over frozen embeddings, class-imbalance
remedies, and overall-polarity heuristics."""

from .schemes import (  # noqa: F401
    BINARY,
    FIVE,
    FOUR,
    THREE,
    ClassLabel,
    RawScore,
    Sentiment,
    SentimentScheme,
)
from .polarity import ClassCounts, PolarityThresholds, overall_polarity  # noqa: F401

__version__ = "0.1.0"
