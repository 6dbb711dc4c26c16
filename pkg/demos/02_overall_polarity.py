"""Overall polarity: one verdict for a whole corpus of per-review labels.

Feeds the training-set class tallies of several public benchmarks to the
scheme-matched heuristic and prints the verdicts, then demonstrates how
the strict threshold gates behave near their boundaries.
"""

from fractions import Fraction

from sentpipe.polarity import (
    ClassCounts,
    PolarityThresholds,
    overall_binary,
    overall_polarity,
)
from sentpipe.schemes import BINARY, FIVE, FOUR, THREE

benchmarks = [
    ("IMDb-2", ClassCounts(BINARY, (12500, 12500))),
    ("MR", ClassCounts(BINARY, (4265, 4264))),
    ("SST-2", ClassCounts(BINARY, (4244, 4300))),
    ("Amazon-2", ClassCounts(BINARY, (37056, 239660))),
    ("IMDb-3", ClassCounts(THREE, (14958, 4816, 18227))),
    ("IMDb-4", ClassCounts(FOUR, (11767, 8234, 8530, 11471))),
    ("SST-5", ClassCounts(FIVE, (1208, 2512, 1794, 2489, 1482))),
    ("Amazon-5", ClassCounts(FIVE, (21863, 15168, 27767, 57688, 182000))),
]

print("Benchmark training tallies and their overall polarity")
for name, counts in benchmarks:
    verdict = overall_polarity(counts)
    print(f"  {name:>9} {str(counts.counts):>38} -> {verdict.name}")

print("\nGates are strict inequalities, so exact ratios stay neutral:")
print("  (neg=5, pos=6):", overall_binary(ClassCounts(BINARY, (5, 6))).name,
      " -- 6 equals 1.2 x 5 exactly")
print("  (neg=5, pos=7):", overall_binary(ClassCounts(BINARY, (5, 7))).name)

print("\nThresholds are configurable Fractions; a laxer base gate flips the call:")
lax = PolarityThresholds(base_ratio=Fraction(101, 100))
counts = ClassCounts(BINARY, (100, 102))
print(f"  (100, 102) default -> {overall_binary(counts).name}")
print(f"  (100, 102) base=101/100 -> {overall_binary(counts, lax).name}")
