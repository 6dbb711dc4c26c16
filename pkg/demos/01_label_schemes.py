"""Label schemes: how raw review scores become class labels.

Walks the IMDb 1-10 scale through the binary / three / four class
schemes, shows the scores each scheme rejects or drops, and splits a
binary label into its fine-grained child.
"""

from sentpipe.errors import DataError
from sentpipe.schemes import (
    BINARY,
    FIVE,
    FIVE_STAR_SCALE,
    FOUR,
    THREE,
    VALID_IMDB_SCORES,
    DROPPED,
    RawScore,
    amazon_score_to_label,
    binary_tree_split,
    imdb_score_to_label,
)

print("IMDb score mappings")
print(f"{'score':>5} {'binary':>10} {'three':>10} {'four':>18}")
for score in sorted(VALID_IMDB_SCORES):
    row = [
        imdb_score_to_label(RawScore(score), scheme).sentiment.name
        for scheme in (BINARY, THREE, FOUR)
    ]
    print(f"{score:>5} {row[0]:>10} {row[1]:>10} {row[2]:>18}")

print("\nScores 5 and 6 carry no polarity signal and are rejected outright:")
for score in (5, 6):
    try:
        RawScore(score)
    except DataError as exc:
        print(f"  score {score}: {exc}")

print("\nAmazon five-star scale under the binary scheme (3 stars is dropped):")
for stars in range(1, 6):
    label = amazon_score_to_label(RawScore(stars, FIVE_STAR_SCALE), BINARY)
    name = "DROPPED" if label is DROPPED else label.sentiment.name
    print(f"  {stars} star(s) -> {name}")

print("\nBinary-tree refinement: a coarse label plus the raw score recovers")
print("the four-class label without re-reading the review:")
for score in (1, 3, 8, 10):
    parent = imdb_score_to_label(RawScore(score), BINARY)
    child = binary_tree_split(parent, RawScore(score))
    print(f"  score {score:>2}: {parent.sentiment.name:>8} -> {child.sentiment.name}")

print("\nThe five-class scheme is reserved for five-star corpora:")
label = amazon_score_to_label(RawScore(5, FIVE_STAR_SCALE), FIVE)
print(f"  5 stars -> {label.sentiment.name}")
