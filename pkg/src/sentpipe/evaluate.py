"""Accuracy metric, experiment reports, and pipeline orchestration.

An experiment runs train -> predict -> accuracy -> aggregate over an
embedding store (from file, service, or synthetic clusters) and produces
one report in both human-readable and key/value form. Reports carry no
timestamps so identical configurations yield byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import head as head_mod
from .embeddings import ClusterSpec, EmbeddingStore, load_store, synthetic_store
from .errors import ConfigError, DataError
from .polarity import ClassCounts, PolarityThresholds, overall_polarity
from .schemes import Sentiment, SentimentScheme


def accuracy(predicted, gold) -> float:
    """Percentage of exact matches; no internal rounding."""
    if len(predicted) != len(gold):
        raise DataError(
            f"prediction/gold length mismatch: {len(predicted)} vs {len(gold)}"
        )
    if not predicted:
        raise DataError("cannot compute accuracy of empty inputs")
    correct = sum(1 for p, g in zip(predicted, gold) if p == g)
    return 100.0 * correct / len(predicted)


def format_accuracy(value: float) -> str:
    """Two decimals, display only."""
    return f"{value:.2f}"


@dataclass
class EvalReport:
    dataset: str
    scheme: SentimentScheme
    accuracy: float
    confusion: np.ndarray  # confusion[gold][predicted]
    original_op: Sentiment
    computed_op: Sentiment
    config_echo: dict

    def gold_counts(self) -> ClassCounts:
        return ClassCounts(self.scheme, tuple(int(x) for x in self.confusion.sum(axis=1)))

    def predicted_counts(self) -> ClassCounts:
        return ClassCounts(self.scheme, tuple(int(x) for x in self.confusion.sum(axis=0)))


def render_kv(report: EvalReport) -> str:
    """Machine-readable key/value rendering, stable ordering."""
    lines = [
        f"dataset = {report.dataset}",
        f"scheme = {report.scheme.name}",
        f"accuracy = {format_accuracy(report.accuracy)}",
        f"original_op = {report.original_op.name}",
        f"computed_op = {report.computed_op.name}",
        "gold_counts = " + ",".join(str(c) for c in report.gold_counts().counts),
        "predicted_counts = "
        + ",".join(str(c) for c in report.predicted_counts().counts),
    ]
    for i, row in enumerate(report.confusion):
        lines.append(f"confusion.{i} = " + ",".join(str(int(x)) for x in row))
    for key in sorted(report.config_echo):
        lines.append(f"config.{key} = {report.config_echo[key]}")
    return "\n".join(lines) + "\n"


def render_human(report: EvalReport) -> str:
    """Aligned text rendering of one experiment report."""
    names = [s.name for s in report.scheme.classes]
    width = max(12, max(len(n) for n in names) + 2)
    out = [
        f"Experiment report: {report.dataset} ({report.scheme.name} scheme)",
        f"  accuracy      : {format_accuracy(report.accuracy)} %",
        f"  original OP   : {report.original_op.name}",
        f"  computed OP   : {report.computed_op.name}",
        "",
        "  Confusion (rows = gold, columns = predicted)",
        "  " + " " * width + "".join(n.rjust(width) for n in names),
    ]
    for name, row in zip(names, report.confusion):
        out.append(
            "  " + name.rjust(width) + "".join(str(int(x)).rjust(width) for x in row)
        )
    out.append("")
    out.append("  Gold class counts     : " + ", ".join(
        f"{n}={c}" for n, c in zip(names, report.gold_counts().counts)))
    out.append("  Predicted class counts: " + ", ".join(
        f"{n}={c}" for n, c in zip(names, report.predicted_counts().counts)))
    out.append("")
    out.append("  Configuration")
    for key in sorted(report.config_echo):
        out.append(f"    {key} = {report.config_echo[key]}")
    return "\n".join(out) + "\n"


def read_config(path) -> dict:
    """Flat ``key = value`` config file; # starts a comment."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    config = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            config[key.strip()] = value.strip()
    return config


def thresholds_from_config(config: dict) -> PolarityThresholds:
    def frac(key, default):
        raw = config.get(key)
        return Fraction(raw) if raw is not None else default

    return PolarityThresholds(
        neutral_fraction=frac("thresholds.neu", Fraction(85, 100)),
        base_ratio=frac("thresholds.base", Fraction(12, 10)),
        sub_ratio=frac("thresholds.sub", Fraction(15, 10)),
    )


def hyper_from_config(config: dict) -> head_mod.Hyperparams:
    hyper = head_mod.preset(config.get("preset", "fine-grained"))
    overrides = {}
    if "head.epochs" in config:
        overrides["epochs"] = int(config["head.epochs"])
    if "head.lr" in config:
        overrides["learning_rate"] = float(config["head.lr"])
    if "head.batch" in config:
        overrides["batch_size"] = int(config["head.batch"])
    if "head.decay" in config:
        overrides["weight_decay"] = float(config["head.decay"])
    overrides["seed"] = int(config.get("seed", 0))
    from dataclasses import replace

    return replace(hyper, **overrides)


def _synthetic_pair(config: dict, num_classes: int):
    dim = int(config.get("embedding.dim", 16))
    per_class = int(config.get("embedding.per_class", 100))
    test_per_class = int(config.get("embedding.test_per_class", per_class))
    spread = float(config.get("embedding.spread", 1.0))
    separation = float(config.get("embedding.separation", 10.0))
    seed = int(config.get("seed", 0))
    # class means on distinct axes, pairwise distance = separation * spread
    scale = separation * spread / np.sqrt(2.0)
    means = []
    for cls in range(num_classes):
        mean = np.zeros(dim)
        mean[cls % dim] = scale
        means.append(mean)
    train = synthetic_store(
        seed, dim, [ClusterSpec(per_class, m, spread) for m in means]
    )
    test = synthetic_store(
        seed + 1, dim, [ClusterSpec(test_per_class, m, spread) for m in means]
    )
    return train, test


def load_experiment_stores(config: dict, num_classes: int):
    source = config.get("embedding.source", "synthetic")
    if source == "synthetic":
        return _synthetic_pair(config, num_classes)
    if source == "file":
        if "embedding.train_path" not in config or "embedding.test_path" not in config:
            raise ConfigError(
                "embedding.source=file requires embedding.train_path and "
                "embedding.test_path"
            )
        return (
            load_store(config["embedding.train_path"]),
            load_store(config["embedding.test_path"]),
        )
    raise ConfigError(f"unknown embedding source: {source!r}")


def run_experiment(config: dict) -> EvalReport:
    """Execute train -> predict -> accuracy -> aggregate for one config."""
    scheme = SentimentScheme.from_name(config.get("scheme", "binary"))
    K = scheme.arity
    thresholds = thresholds_from_config(config)
    hyper = hyper_from_config(config)
    train_store, test_store = load_experiment_stores(config, K)
    hidden = int(config.get("head.hidden", 64))
    params, history = head_mod.train(train_store, hyper, K, hidden=hidden)
    predicted = head_mod.predict(params, test_store)
    gold = [test_store.get(rid).label_index for rid in test_store.ids()]
    confusion = np.zeros((K, K), dtype=np.int64)
    for g, p in zip(gold, predicted):
        confusion[g][p] += 1
    original_op = overall_polarity(ClassCounts(scheme, tuple(int(np.sum(np.array(gold) == k)) for k in range(K))), thresholds)
    computed_op = overall_polarity(ClassCounts(scheme, tuple(int(np.sum(np.array(predicted) == k)) for k in range(K))), thresholds)
    echo = {
        "preset": config.get("preset", "fine-grained"),
        "seed": config.get("seed", "0"),
        "scheme": scheme.name,
        "thresholds.neu": str(thresholds.neutral_fraction),
        "thresholds.base": str(thresholds.base_ratio),
        "thresholds.sub": str(thresholds.sub_ratio),
        "head.hidden": str(hidden),
        "epochs": str(hyper.epochs),
        "final_train_loss": repr(history[-1].loss) if history else "n/a",
        "final_train_accuracy": format_accuracy(history[-1].accuracy) if history else "n/a",
    }
    return EvalReport(
        dataset=config.get("dataset.name", "synthetic"),
        scheme=scheme,
        accuracy=accuracy(predicted, gold),
        confusion=confusion,
        original_op=original_op,
        computed_op=computed_op,
        config_echo=echo,
    )


def write_report(report: EvalReport, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.txt").write_text(render_human(report), encoding="utf-8")
    (out_dir / "report.kv").write_text(render_kv(report), encoding="utf-8")
