"""Extraction jobs: prepared review table in, EMB v1 store out."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .model import HIDDEN_SIZE, encode_batch, load_encoder, load_tokenizer
from .writer import POOLED, TOKENS, write_emb


@dataclass(frozen=True)
class ExtractionJob:
    input_path: Path
    output_path: Path
    max_length: int
    mode: str = POOLED
    batch_size: int = 8
    seed: int = 0
    model_dir: Path | None = None
    vocab_path: Path | None = None
    use_pooler: bool = False

    def __post_init__(self):
        if self.max_length not in (128, 256):
            raise ValueError("max length must be 128 or 256 to match a preset")
        if self.mode not in (POOLED, TOKENS):
            raise ValueError(f"unknown extraction mode: {self.mode!r}")
        if self.batch_size < 1:
            raise ValueError("batch size must be positive")


def unescape_text(text: str) -> str:
    """Inverse of the review table's \\t / \\n / \\\\ escaping."""
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            if nxt in ("t", "n", "\\"):
                out.append({"t": "\t", "n": "\n", "\\": "\\"}[nxt])
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def read_review_table(path) -> list[tuple[str, int, str]]:
    """Prepared review table: one ``id\\tlabel\\tescaped-text`` line per review."""
    path = Path(path)
    if not path.exists():
        raise ValueError(f"review table not found: {path}")
    rows = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise ValueError(
                    f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
                )
            review_id, label, text = parts
            if review_id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate review id {review_id!r}")
            seen.add(review_id)
            rows.append((review_id, int(label), unescape_text(text)))
    return rows


def extract(job: ExtractionJob):
    """Run the frozen encoder over the table and write the store file."""
    rows = read_review_table(job.input_path)
    tokenizer = load_tokenizer(job.vocab_path)
    model = load_encoder(job.model_dir, vocab_size=len(tokenizer), seed=job.seed)
    records = []
    for start in range(0, len(rows), job.batch_size):
        batch = rows[start : start + job.batch_size]
        hidden, mask, pooler = encode_batch(
            model, tokenizer, [text for _, _, text in batch], job.max_length
        )
        for i, (review_id, label, _) in enumerate(batch):
            if job.mode == TOKENS:
                n = int(mask[i].sum())
                matrix = hidden[i, :n].numpy()
            elif job.use_pooler:
                matrix = pooler[i].numpy().reshape(1, -1)
            else:
                # raw [CLS] hidden state, position 0
                matrix = hidden[i, 0].numpy().reshape(1, -1)
            records.append((review_id, label, matrix))
    write_emb(job.output_path, HIDDEN_SIZE, job.mode, records)
    return len(records)
