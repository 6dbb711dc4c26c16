"""Tokenization: WordPiece splitting and fixed-length encoding.

Loads the bundled fixture vocabulary, splits a few words into sub-word
pieces, and encodes full reviews into padded id/mask rows.
"""

from importlib.resources import files

from sentpipe.tokenizer import InputExample, Vocab, encode, tokenize, wordpiece_split

vocab = Vocab.load(files("sentpipe.data") / "fixture_vocab.txt")
print(f"Fixture vocabulary: {len(vocab)} tokens")

print("\nGreedy longest-match sub-word splits:")
for word in ("movie", "interesting", "watchable", "qzxv"):
    print(f"  {word:>12} -> {wordpiece_split(word, vocab)}")

text = "An interesting, well acted movie!"
print(f"\nFull pipeline on: {text!r}")
print("  pieces:", tokenize(text, vocab))

example = encode(InputExample(text), vocab, max_length=16)
print("\nEncoded at max length 16 ([CLS] ... [SEP] then [PAD]):")
print("  input_ids     :", example.input_ids)
print("  attention_mask:", example.attention_mask)
print("  mask is 0 exactly where the id is [PAD]:",
      all((m == 0) == (i == vocab.pad_id)
          for i, m in zip(example.input_ids, example.attention_mask)))

long_text = " ".join(["a very fantastic movie"] * 20)
truncated = encode(InputExample(long_text), vocab, max_length=10)
print("\nLong reviews are truncated from the head, keeping both specials:")
print("  first id is [CLS]:", truncated.input_ids[0] == vocab.cls_id)
print("  last id is [SEP]: ", truncated.input_ids[-1] == vocab.sep_id)
