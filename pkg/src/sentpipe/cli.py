"""Command-line umbrella for the pipeline stages.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import balance as balance_mod
from . import evaluate as eval_mod
from . import head as head_mod
from . import ingest as ingest_mod
from .embeddings import load_store
from .errors import ConfigError, DataError, NumericalError
from .polarity import ClassCounts, PolarityThresholds, overall_polarity
from .schemes import FIVE_STAR_SCALE, IMDB_SCALE, SentimentScheme
from .tokenizer import InputExample, Vocab, encode


def _cmd_prepare(args):
    scheme = SentimentScheme.from_name(args.scheme)
    descriptor = ingest_mod.CorpusDescriptor(
        name=args.dataset,
        path=Path(args.infile),
        layout=args.layout,
        scale=FIVE_STAR_SCALE if args.scale == "five-star" else IMDB_SCALE,
    )
    split = ingest_mod.ingest(descriptor, scheme, seed=args.seed)
    ingest_mod.write_prepared(split, args.out, seed=args.seed)
    counts = split.counts("train")
    print(f"prepared {split.stats.kept} reviews into {args.out}")
    print(f"train class counts: {counts.counts}")


def _cmd_encode(args):
    vocab = Vocab.load(args.vocab)
    rows = ingest_mod.read_prepared(args.infile)
    with open(args.out, "w", encoding="utf-8") as f:
        for rid, label, text in rows:
            example = encode(InputExample(text, label), vocab, args.max_len)
            ids = ",".join(str(i) for i in example.input_ids)
            mask = ",".join(str(m) for m in example.attention_mask)
            f.write(f"{rid}\t{label}\t{ids}\t{mask}\n")
    print(f"encoded {len(rows)} reviews into {args.out}")


def _cmd_train(args):
    store = load_store(args.store)
    labels = [store.get(rid).label_index for rid in store.ids()]
    num_classes = args.classes if args.classes else max(labels) + 1
    hyper = head_mod.preset(args.preset, seed=args.seed)
    params, history = head_mod.train(store, hyper, num_classes, hidden=args.hidden)
    head_mod.save_params(params, args.out)
    if history:
        final = history[-1]
        print(
            f"trained {hyper.epochs} epochs; final loss {final.loss:.6f}, "
            f"train accuracy {final.accuracy:.2f}%"
        )
    print(f"parameters written to {args.out}")


def _cmd_predict(args):
    params = head_mod.load_params(args.params)
    store = load_store(args.store)
    predictions = head_mod.predict(params, store)
    with open(args.out, "w", encoding="utf-8") as f:
        for rid, label in zip(store.ids(), predictions):
            f.write(f"{rid}\t{label}\n")
    print(f"wrote {len(predictions)} predictions to {args.out}")


def _parse_thresholds(spec: str) -> PolarityThresholds:
    values = {}
    for part in spec.split(","):
        if "=" not in part:
            raise ConfigError(f"bad thresholds entry {part!r}")
        key, _, value = part.partition("=")
        values[key.strip()] = Fraction(value.strip())
    return PolarityThresholds(
        neutral_fraction=values.get("neu", Fraction(85, 100)),
        base_ratio=values.get("base", Fraction(12, 10)),
        sub_ratio=values.get("sub", Fraction(15, 10)),
    )


def _cmd_aggregate(args):
    scheme = SentimentScheme.from_name(args.scheme)
    thresholds = _parse_thresholds(args.thresholds)
    counts = [0] * scheme.arity
    with open(args.labels, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            try:
                index = int(parts[-1])
            except ValueError:
                raise DataError(f"{args.labels}:{lineno}: non-integer label")
            if not 0 <= index < scheme.arity:
                raise DataError(
                    f"{args.labels}:{lineno}: label {index} outside {scheme.name}"
                )
            counts[index] += 1
    tally = ClassCounts(scheme, tuple(counts))
    verdict = overall_polarity(tally, thresholds)
    print(f"overall_polarity = {verdict.name}")
    print(f"total = {tally.total}")
    for sentiment, count in zip(scheme.classes, tally.counts):
        print(f"count.{sentiment.name} = {count}")


def _cmd_balance(args):
    if args.method == "smote":
        store = load_store(args.infile)
        features = balance_mod.features_from_store(store)
        target = max(features.class_count(c) for c in set(features.labels.tolist()))
        resampled = balance_mod.smote_resample(features, k=args.k, target=target, seed=args.seed)
        import numpy as np

        with open(args.out, "w", encoding="utf-8") as f:
            for row, label, synth in zip(
                resampled.rows, resampled.labels, resampled.synthetic
            ):
                values = " ".join(repr(float(x)) for x in row)
                f.write(f"{label}\t{int(synth)}\t{values}\n")
        print(
            f"balanced to {target} per class: {len(features.rows)} original + "
            f"{len(resampled.rows) - len(features.rows)} synthetic rows"
        )
    else:
        table = balance_mod.WordVectorTable.load(args.table)
        rows = ingest_mod.read_prepared(args.infile)
        batch = balance_mod.augment_texts(
            [text for _, _, text in rows], table, rate=args.rate, seed=args.seed
        )
        with open(args.out, "w", encoding="utf-8") as f:
            for (rid, label, _), augmented in zip(rows, batch.v_aug):
                f.write(f"{rid}-aug\t{label}\t{ingest_mod.escape_text(augmented)}\n")
        print(f"augmented {len(rows)} reviews into {args.out}")


def _cmd_run(args):
    config = eval_mod.read_config(args.config)
    report = eval_mod.run_experiment(config)
    eval_mod.write_report(report, args.out)
    print(eval_mod.render_human(report), end="")
    print(f"report written to {args.out}")


def _cmd_report(args):
    # re-render the machine-readable report as the human-readable table
    text = Path(args.kv).read_text(encoding="utf-8")
    print(text, end="")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentpipe", description="Sentiment classification pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="clean and label a raw corpus")
    p.add_argument("--dataset", required=True)
    p.add_argument("--scheme", required=True, choices=["binary", "three", "four", "five"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layout", choices=["tsv", "dirtree"], default="tsv")
    p.add_argument("--scale", choices=["imdb", "five-star"], default="imdb")
    p.set_defaults(func=_cmd_prepare)

    p = sub.add_parser("encode", help="tokenize reviews to ids and masks")
    p.add_argument("--vocab", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("train", help="train the classification head")
    p.add_argument("--preset", required=True, choices=["binary", "fine-grained"])
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classes", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="predict labels for a store")
    p.add_argument("--params", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("aggregate", help="overall polarity of predicted labels")
    p.add_argument("--scheme", required=True, choices=["binary", "three", "four", "five"])
    p.add_argument("--labels", required=True)
    p.add_argument("--thresholds", default="neu=0.85,base=1.2,sub=1.5")
    p.set_defaults(func=_cmd_aggregate)

    p = sub.add_parser("balance", help="SMOTE or text augmentation")
    p.add_argument("--method", required=True, choices=["smote", "nlpaug"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--rate", type=float, default=0.3)
    p.add_argument("--table")
    p.set_defaults(func=_cmd_balance)

    p = sub.add_parser("report", help="print a stored machine-readable report")
    p.add_argument("--kv", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("run", help="full experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
