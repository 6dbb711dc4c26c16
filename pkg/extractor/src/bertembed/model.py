"""Frozen lowercase encoder: 12 layers, 768 hidden states, inference only.

Weights come from a local checkpoint directory when one is supplied;
otherwise the architecture is instantiated with seeded random weights.
This keeps the tool fully offline — no acceptance contract measures
embedding quality, only shapes, alignment, determinism, and format.
"""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

import torch
from transformers import BertConfig, BertModel, BertTokenizer

HIDDEN_SIZE = 768
NUM_LAYERS = 12

DEFAULT_VOCAB = files("bertembed.data") / "vocab.txt"


def load_tokenizer(vocab_path=None) -> BertTokenizer:
    vocab_path = Path(vocab_path) if vocab_path else DEFAULT_VOCAB
    return BertTokenizer(str(vocab_path), do_lower_case=True)


def load_encoder(model_dir=None, vocab_size: int = 30522, seed: int = 0) -> BertModel:
    """A frozen encoder in eval mode; local checkpoint or seeded random."""
    if model_dir is not None:
        model = BertModel.from_pretrained(str(model_dir))
    else:
        torch.manual_seed(seed)
        config = BertConfig(
            vocab_size=vocab_size,
            hidden_size=HIDDEN_SIZE,
            num_hidden_layers=NUM_LAYERS,
            num_attention_heads=12,
            intermediate_size=3072,
        )
        model = BertModel(config)
    model.eval()
    for parameter in model.parameters():
        parameter.requires_grad_(False)
    return model


@torch.no_grad()
def encode_batch(model, tokenizer, texts, max_length: int):
    """Token matrices and pooled views for a batch of texts.

    Returns (hidden, mask, pooler): hidden is (B, L, 768), mask is the
    attention mask, pooler is the tanh-transformed pooler output.
    """
    batch = tokenizer(
        list(texts),
        padding="max_length",
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )
    output = model(
        input_ids=batch["input_ids"],
        attention_mask=batch["attention_mask"],
        token_type_ids=batch.get("token_type_ids"),
    )
    return output.last_hidden_state, batch["attention_mask"], output.pooler_output
