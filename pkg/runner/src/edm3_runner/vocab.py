"""Word-level vocabulary shared by encoder and decoder.

The target grammar is whitespace-friendly except for the "->" joiner,
so pre-tokenization splits that out as its own token and decoding glues
it back without surrounding spaces. Everything else round-trips through
a plain whitespace join. The vocabulary is built from the training file
and sorted, so two builds over the same text are identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

PAD, EOS, UNK = 0, 1, 2
_RESERVED = ("<pad>", "</s>", "<unk>")

# Beam search tops out at 2 * num_beams candidates per step; a floor on
# the vocabulary size keeps wide beams legal on tiny corpora.
MIN_SIZE = 256


def words_of(text: str) -> list[str]:
    return text.replace("->", " -> ").split()


class WordVocab:
    def __init__(self, words: Iterable[str]):
        ordered = sorted(set(words) - set(_RESERVED))
        itos = list(_RESERVED) + ordered
        while len(itos) < MIN_SIZE:
            itos.append(f"<extra{len(itos)}>")
        self.itos = itos
        self.stoi = {w: i for i, w in enumerate(itos)}

    @classmethod
    def from_texts(cls, texts: Iterable[str]) -> "WordVocab":
        return cls(w for t in texts for w in words_of(t))

    def __len__(self) -> int:
        return len(self.itos)

    def encode(self, text: str, max_length: int | None = None) -> tuple[list[int], bool]:
        """Ids ending in EOS, plus whether the text was truncated."""
        ids = [self.stoi.get(w, UNK) for w in words_of(text)]
        truncated = max_length is not None and len(ids) + 1 > max_length
        if truncated:
            ids = ids[: max_length - 1]
        return ids + [EOS], truncated

    def decode(self, ids: Iterable[int]) -> str:
        words = []
        for i in ids:
            if i == EOS:
                break
            if i == PAD:
                continue
            words.append(self.itos[i] if 0 <= i < len(self.itos) else "<unk>")
        return " ".join(words).replace(" -> ", "->")

    def save(self, path: Path) -> None:
        path.write_text(json.dumps(self.itos, ensure_ascii=False), "utf-8")

    @classmethod
    def load(cls, path: Path) -> "WordVocab":
        vocab = cls.__new__(cls)
        vocab.itos = json.loads(path.read_text("utf-8"))
        vocab.stoi = {w: i for i, w in enumerate(vocab.itos)}
        return vocab
