from pathlib import Path

import pytest

from sentpipe.balance import WordVectorTable
from sentpipe.tokenizer import Vocab

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "sentpipe" / "data"


@pytest.fixture(scope="session")
def fixture_vocab() -> Vocab:
    return Vocab.load(DATA_DIR / "fixture_vocab.txt")


@pytest.fixture(scope="session")
def fixture_vocab_path() -> Path:
    return DATA_DIR / "fixture_vocab.txt"


@pytest.fixture(scope="session")
def word_table() -> WordVectorTable:
    return WordVectorTable.load(DATA_DIR / "fixture_word_vectors.txt")


@pytest.fixture(scope="session")
def word_table_path() -> Path:
    return DATA_DIR / "fixture_word_vectors.txt"
