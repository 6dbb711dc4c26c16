"""Frozen-encoder embedding extractor.

Runs a lowercase transformer encoder inference-only over prepared review
tables and emits EMB v1 store files consumable by the downstream
pipeline. No fine-tuning, no gradients.
"""

from .extract import ExtractionJob, extract, read_review_table
from .writer import write_emb

__all__ = ["ExtractionJob", "extract", "read_review_table", "write_emb"]

__version__ = "0.1.0"
