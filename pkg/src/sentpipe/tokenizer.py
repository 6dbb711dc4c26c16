"""Lowercasing, basic tokenization, WordPiece splitting, and encoding.

Produces the fixed-length input ids and attention masks the classifier
consumes: [CLS] + pieces + [SEP], truncated and right-padded, with the
mask marking every non-pad position.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DataError

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"
CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
SPECIAL_TOKENS = (PAD_TOKEN, UNK_TOKEN, CLS_TOKEN, SEP_TOKEN)
CONTINUATION_PREFIX = "##"


class Vocab:
    """Token -> index map loaded from a one-token-per-line vocab file."""

    def __init__(self, tokens):
        self.token_to_id = {}
        for i, token in enumerate(tokens):
            if token in self.token_to_id:
                raise DataError(f"duplicate vocab token: {token!r}")
            self.token_to_id[token] = i
        missing = [t for t in SPECIAL_TOKENS if t not in self.token_to_id]
        if missing:
            raise DataError(f"vocab is missing special tokens: {missing}")
        self.id_to_token = list(self.token_to_id)
        self.pad_id = self.token_to_id[PAD_TOKEN]
        self.unk_id = self.token_to_id[UNK_TOKEN]
        self.cls_id = self.token_to_id[CLS_TOKEN]
        self.sep_id = self.token_to_id[SEP_TOKEN]

    def __len__(self):
        return len(self.id_to_token)

    def __contains__(self, token):
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, self.unk_id)

    @classmethod
    def load(cls, path) -> "Vocab":
        path = Path(path)
        if not path.exists():
            raise DataError(f"vocab file not found: {path}")
        with open(path, encoding="utf-8") as f:
            tokens = [line.rstrip("\n") for line in f]
        while tokens and tokens[-1] == "":
            tokens.pop()
        return cls(tokens)


@dataclass(frozen=True)
class InputExample:
    """A single review to classify; text_b stays empty for this task."""

    text_a: str
    label: object = None
    text_b: str = ""


@dataclass(frozen=True)
class EncodedExample:
    """Fixed-length model input: ids, mask, and the attached label."""

    input_ids: tuple[int, ...]
    attention_mask: tuple[int, ...]
    label: object = None
    segment_ids: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        if len(self.input_ids) != len(self.attention_mask):
            raise DataError("input ids and attention mask lengths differ")
        if self.segment_ids is None:
            object.__setattr__(self, "segment_ids", (0,) * len(self.input_ids))


def _is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    # ASCII ranges BERT treats as punctuation even when unicodedata does not.
    if (33 <= cp <= 47) or (58 <= cp <= 64) or (91 <= cp <= 96) or (123 <= cp <= 126):
        return True
    return unicodedata.category(ch).startswith("P")


def basic_tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, and split punctuation into own tokens."""
    tokens = []
    for chunk in text.lower().split():
        current = []
        for ch in chunk:
            if _is_punctuation(ch):
                if current:
                    tokens.append("".join(current))
                    current = []
                tokens.append(ch)
            else:
                current.append(ch)
        if current:
            tokens.append("".join(current))
    return tokens


def wordpiece_split(token: str, vocab: Vocab) -> list[str]:
    """Greedy longest-match-first decomposition of one basic token.

    Non-initial pieces carry the ## prefix; a token with no full
    decomposition becomes [UNK].
    """
    if token in vocab:
        return [token]
    pieces = []
    start = 0
    while start < len(token):
        end = len(token)
        piece = None
        while start < end:
            candidate = token[start:end]
            if start > 0:
                candidate = CONTINUATION_PREFIX + candidate
            if candidate in vocab:
                piece = candidate
                break
            end -= 1
        if piece is None:
            return [UNK_TOKEN]
        pieces.append(piece)
        start = end
    return pieces


def tokenize(text: str, vocab: Vocab) -> list[str]:
    """Full chain: basic tokenization followed by WordPiece splitting."""
    pieces = []
    for token in basic_tokenize(text):
        pieces.extend(wordpiece_split(token, vocab))
    return pieces


def encode(example: InputExample, vocab: Vocab, max_length: int) -> EncodedExample:
    """Encode one example to exactly max_length ids plus its attention mask.

    The sequence is [CLS] + pieces + [SEP]; overlong piece lists are
    truncated from the tail so the specials always survive.
    """
    if max_length < 2:
        raise ConfigError("max_length must be at least 2 to fit [CLS] and [SEP]")
    pieces = tokenize(example.text_a, vocab)
    pieces = pieces[: max_length - 2]
    ids = [vocab.cls_id] + [vocab.id_of(p) for p in pieces] + [vocab.sep_id]
    mask = [1] * len(ids)
    pad = max_length - len(ids)
    ids.extend([vocab.pad_id] * pad)
    mask.extend([0] * pad)
    return EncodedExample(tuple(ids), tuple(mask), example.label)
