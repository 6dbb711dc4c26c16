"""Class balancing: SMOTE over embeddings and synonym text augmentation.

Oversamples a lopsided two-class feature set up to parity, then rewrites
minority review texts by swapping words for their nearest neighbors in
the bundled word-vector table.
"""

from importlib.resources import files

import numpy as np

from sentpipe.balance import (
    FeatureMatrix,
    WordVectorTable,
    augment_texts,
    smote_resample,
)

rng = np.random.default_rng(0)
minority = rng.standard_normal((6, 4))
majority = rng.standard_normal((20, 4)) + 5.0
features = FeatureMatrix(
    np.vstack([minority, majority]), [0] * 6 + [1] * 20
)
print(f"Before SMOTE: class 0 has {features.class_count(0)}, "
      f"class 1 has {features.class_count(1)}")

balanced = smote_resample(features, k=5, target=20, seed=7)
print(f"After SMOTE:  class 0 has {balanced.class_count(0)}, "
      f"class 1 has {balanced.class_count(1)}")
print(f"  {int(balanced.synthetic.sum())} synthetic rows, each an interpolation "
      "between a minority point and one of its 5 nearest neighbors")

table = WordVectorTable.load(files("sentpipe.data") / "fixture_word_vectors.txt")
print(f"\nWord-vector table: {len(table)} words, d={table.dim}")
for word in ("good", "boring", "amazing"):
    print(f"  nearest({word!r}) = {table.nearest(word)!r}")

reviews = [
    "a good movie with an amazing plot",
    "boring and bad from start to finish",
]
batch = augment_texts(reviews, table, rate=1.0, seed=3)
print("\nAugmented minority reviews (rate 1.0 swaps every in-table word):")
for original, rewritten in zip(batch.v_in, batch.v_aug):
    print(f"  {original!r}\n    -> {rewritten!r}")
