"""Training the classification head on a synthetic embedding store.

Builds two well-separated Gaussian clusters standing in for pooled
review embeddings, trains the BiLSTM head with the fine-grained preset
(shortened for demo speed), and evaluates on a held-out store drawn
from the same clusters.
"""

import numpy as np

from sentpipe.embeddings import ClusterSpec, synthetic_store
from sentpipe.evaluate import accuracy, format_accuracy
from sentpipe.head import predict, preset, train

dim, per_class = 8, 60
m0, m1 = np.zeros(dim), np.zeros(dim)
m0[0], m1[1] = 7.0, 7.0
clusters = [ClusterSpec(per_class, m0, 1.0), ClusterSpec(per_class, m1, 1.0)]

train_store = synthetic_store(seed=0, dim=dim, clusters=clusters)
test_store = synthetic_store(seed=1, dim=dim, clusters=clusters)
print(f"Synthetic stores: {len(train_store)} train / {len(test_store)} test, d={dim}")

hyper = preset("fine-grained", epochs=6, learning_rate=1e-3, seed=0)
print(f"\nPreset: batch={hyper.batch_size}, lr={hyper.learning_rate}, "
      f"epochs={hyper.epochs}, loss={hyper.loss_kind}")

params, history = train(train_store, hyper, num_classes=2, hidden=16)
print("\nEpoch history:")
for i, epoch in enumerate(history, 1):
    print(f"  epoch {i:>2}: loss {epoch.loss:.4f}  train accuracy {epoch.accuracy:6.2f}%")

predicted = predict(params, test_store)
gold = [test_store.get(rid).label_index for rid in test_store.ids()]
print(f"\nHeld-out accuracy: {format_accuracy(accuracy(predicted, gold))}%")
