"""Overall-sentiment-polarity heuristics over prediction-vector tallies.

One algorithm per classification scope (binary / three / four / five
class), each reducing a vector of per-class counts to a single dominant
verdict, plus the delta rule that derives a neutral label from binary
class probabilities.

All ratio gates are evaluated in exact integer arithmetic: a comparison
``count_a > r * count_b`` with r = p/q becomes ``q * count_a > p * count_b``,
so boundary cases never depend on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfigError, DataError
from .schemes import BINARY, THREE, ClassLabel, Sentiment, SentimentScheme


@dataclass(frozen=True)
class PolarityThresholds:
    """Gate ratios for the polarity heuristics.

    neutral_fraction: share of neutral predictions that forces a neutral
        verdict outright.
    base_ratio: required majority between the negative and positive base
        classes.
    sub_ratio: required majority of a "highly" sub-class over its sibling.
    """

    neutral_fraction: Fraction = field(default=Fraction(85, 100))
    base_ratio: Fraction = field(default=Fraction(12, 10))
    sub_ratio: Fraction = field(default=Fraction(15, 10))

    def __post_init__(self):
        if not 0 < self.neutral_fraction < 1:
            raise ConfigError("neutral_fraction must lie in (0, 1)")
        if self.base_ratio <= 1 or self.sub_ratio <= 1:
            raise ConfigError("base_ratio and sub_ratio must exceed 1")

    def as_integer_gates(self) -> "IntegerGates":
        return IntegerGates(
            self.neutral_fraction.numerator,
            self.neutral_fraction.denominator,
            self.base_ratio.numerator,
            self.base_ratio.denominator,
            self.sub_ratio.numerator,
            self.sub_ratio.denominator,
        )


@dataclass(frozen=True)
class IntegerGates:
    """Thresholds reduced to integer numerator/denominator pairs.

    Lets the verdict kernels run on plain integer arithmetic: the gate
    ``a > (p/q) * b`` is evaluated as ``q*a > p*b``.
    """

    neu_num: int
    neu_den: int
    base_num: int
    base_den: int
    sub_num: int
    sub_den: int


DEFAULT_THRESHOLDS = PolarityThresholds()
DEFAULT_GATES = DEFAULT_THRESHOLDS.as_integer_gates()


@dataclass(frozen=True)
class ClassCounts:
    """Per-class tally of a prediction vector, ordered like the scheme."""

    scheme: SentimentScheme
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.scheme.arity:
            raise DataError(
                f"expected {self.scheme.arity} counts for {self.scheme.name}, "
                f"got {len(self.counts)}"
            )
        if any(c < 0 for c in self.counts):
            raise DataError("class counts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def of(self, sentiment: Sentiment) -> int:
        return self.counts[self.scheme.index_of(sentiment)]

    @classmethod
    def tally(cls, labels, scheme: SentimentScheme) -> "ClassCounts":
        counts = [0] * scheme.arity
        for label in labels:
            if label.scheme != scheme:
                raise DataError(
                    f"label from scheme {label.scheme.name} in a {scheme.name} tally"
                )
            counts[label.index] += 1
        return cls(scheme, tuple(counts))


def _require_scheme(counts: ClassCounts, arity: int):
    if counts.scheme.arity != arity:
        raise DataError(
            f"expected {arity}-class counts, got {counts.scheme.name}"
        )
    if counts.total == 0:
        raise DataError("cannot aggregate an empty prediction vector")


def binary_verdict(neg: int, pos: int, g: IntegerGates = DEFAULT_GATES) -> Sentiment:
    """Verdict kernel for binary counts; ties fall to neutral."""
    if g.base_den * pos > g.base_num * neg:
        return Sentiment.POSITIVE
    if g.base_den * neg > g.base_num * pos:
        return Sentiment.NEGATIVE
    return Sentiment.NEUTRAL


def three_verdict(neg: int, neu: int, pos: int, g: IntegerGates = DEFAULT_GATES) -> Sentiment:
    """Verdict kernel for three-class counts."""
    if g.neu_den * neu > g.neu_num * (neg + neu + pos):
        return Sentiment.NEUTRAL
    if g.sub_den * pos > g.sub_num * neg:
        return Sentiment.POSITIVE
    if g.sub_den * neg > g.sub_num * pos:
        return Sentiment.NEGATIVE
    return Sentiment.NEUTRAL


def four_verdict(hneg: int, neg: int, pos: int, hpos: int,
                 g: IntegerGates = DEFAULT_GATES) -> Sentiment:
    """Verdict kernel for four-class counts, hierarchical base-then-sub gates."""
    neg_total = hneg + neg
    pos_total = pos + hpos
    if g.base_den * neg_total > g.base_num * pos_total:
        if g.sub_den * hneg > g.sub_num * neg:
            return Sentiment.HIGHLY_NEGATIVE
        return Sentiment.NEGATIVE
    if g.base_den * pos_total > g.base_num * neg_total:
        if g.sub_den * hpos > g.sub_num * pos:
            return Sentiment.HIGHLY_POSITIVE
        return Sentiment.POSITIVE
    return Sentiment.NEUTRAL


def five_verdict(hneg: int, neg: int, neu: int, pos: int, hpos: int,
                 g: IntegerGates = DEFAULT_GATES) -> Sentiment:
    """Verdict kernel for five-class counts.

    The neutral gate runs against the full total (neutral included); the
    base/sub comparisons then ignore the neutral count entirely.
    """
    if g.neu_den * neu > g.neu_num * (hneg + neg + neu + pos + hpos):
        return Sentiment.NEUTRAL
    return four_verdict(hneg, neg, pos, hpos, g)


def overall_binary(counts: ClassCounts, th: PolarityThresholds = DEFAULT_THRESHOLDS) -> Sentiment:
    """Dominant polarity of a binary prediction vector; ties are neutral."""
    _require_scheme(counts, 2)
    return binary_verdict(*counts.counts, th.as_integer_gates())


def overall_three(counts: ClassCounts, th: PolarityThresholds = DEFAULT_THRESHOLDS) -> Sentiment:
    """Dominant polarity of a three-class prediction vector."""
    _require_scheme(counts, 3)
    return three_verdict(*counts.counts, th.as_integer_gates())


def overall_four(counts: ClassCounts, th: PolarityThresholds = DEFAULT_THRESHOLDS) -> Sentiment:
    """Dominant polarity of a four-class prediction vector (hierarchical)."""
    _require_scheme(counts, 4)
    return four_verdict(*counts.counts, th.as_integer_gates())


def overall_five(counts: ClassCounts, th: PolarityThresholds = DEFAULT_THRESHOLDS) -> Sentiment:
    """Dominant polarity of a five-class prediction vector."""
    _require_scheme(counts, 5)
    return five_verdict(*counts.counts, th.as_integer_gates())


def binary_verdicts(counts, th: PolarityThresholds = DEFAULT_THRESHOLDS):
    """Vectorized binary_verdict over an (M, 2) integer array of (neg, pos)."""
    g = th.as_integer_gates()
    c = np.asarray(counts, dtype=np.int64)
    neg, pos = c[:, 0], c[:, 1]
    out = np.full(len(c), int(Sentiment.NEUTRAL), dtype=np.int8)
    out[g.base_den * neg > g.base_num * pos] = int(Sentiment.NEGATIVE)
    out[g.base_den * pos > g.base_num * neg] = int(Sentiment.POSITIVE)
    return out


def three_verdicts(counts, th: PolarityThresholds = DEFAULT_THRESHOLDS):
    """Vectorized three_verdict over an (M, 3) array of (neg, neu, pos)."""
    g = th.as_integer_gates()
    c = np.asarray(counts, dtype=np.int64)
    neg, neu, pos = c[:, 0], c[:, 1], c[:, 2]
    total = neg + neu + pos
    out = np.full(len(c), int(Sentiment.NEUTRAL), dtype=np.int8)
    neu_gate = g.neu_den * neu > g.neu_num * total
    pos_wins = ~neu_gate & (g.sub_den * pos > g.sub_num * neg)
    neg_wins = ~neu_gate & ~pos_wins & (g.sub_den * neg > g.sub_num * pos)
    out[pos_wins] = int(Sentiment.POSITIVE)
    out[neg_wins] = int(Sentiment.NEGATIVE)
    return out


def _four_way_verdicts(hneg, neg, pos, hpos, g: IntegerGates):
    neg_total = hneg + neg
    pos_total = pos + hpos
    out = np.full(len(hneg), int(Sentiment.NEUTRAL), dtype=np.int8)
    neg_base = g.base_den * neg_total > g.base_num * pos_total
    pos_base = ~neg_base & (g.base_den * pos_total > g.base_num * neg_total)
    hneg_sub = g.sub_den * hneg > g.sub_num * neg
    hpos_sub = g.sub_den * hpos > g.sub_num * pos
    out[neg_base] = int(Sentiment.NEGATIVE)
    out[neg_base & hneg_sub] = int(Sentiment.HIGHLY_NEGATIVE)
    out[pos_base] = int(Sentiment.POSITIVE)
    out[pos_base & hpos_sub] = int(Sentiment.HIGHLY_POSITIVE)
    return out


def four_verdicts(counts, th: PolarityThresholds = DEFAULT_THRESHOLDS):
    """Vectorized four_verdict over an (M, 4) array of (hneg, neg, pos, hpos)."""
    c = np.asarray(counts, dtype=np.int64)
    return _four_way_verdicts(c[:, 0], c[:, 1], c[:, 2], c[:, 3], th.as_integer_gates())


def five_verdicts(counts, th: PolarityThresholds = DEFAULT_THRESHOLDS):
    """Vectorized five_verdict over an (M, 5) array (hneg, neg, neu, pos, hpos)."""
    g = th.as_integer_gates()
    c = np.asarray(counts, dtype=np.int64)
    hneg, neg, neu, pos, hpos = (c[:, i] for i in range(5))
    total = c.sum(axis=1)
    out = _four_way_verdicts(hneg, neg, pos, hpos, g)
    out[g.neu_den * neu > g.neu_num * total] = int(Sentiment.NEUTRAL)
    return out


_BY_ARITY = {2: overall_binary, 3: overall_three, 4: overall_four, 5: overall_five}


def overall_polarity(counts: ClassCounts, th: PolarityThresholds = DEFAULT_THRESHOLDS) -> Sentiment:
    """Dispatch to the scheme-matched polarity algorithm."""
    return _BY_ARITY[counts.scheme.arity](counts, th)


def delta_neutralize(p_neg: float, p_pos: float, delta: float) -> ClassLabel:
    """Derive a three-class label from binary probabilities.

    Returns Neutral when the probability gap is strictly below delta,
    otherwise the argmax class lifted into the three-class scheme.
    """
    if delta < 0:
        raise ConfigError("delta must be nonnegative")
    if not (0 <= p_neg <= 1 and 0 <= p_pos <= 1) or abs(p_neg + p_pos - 1) > 1e-6:
        raise DataError("probabilities must form a point on the 2-simplex")
    if abs(p_pos - p_neg) < delta:
        return THREE.label(Sentiment.NEUTRAL)
    winner = Sentiment.POSITIVE if p_pos >= p_neg else Sentiment.NEGATIVE
    return THREE.label(winner)
