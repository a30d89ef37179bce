"""Plain-text word vectors and phrase-level cosine similarity."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadHeader, DimensionMismatch, DuplicateWord

STOP_ARTICLES = frozenset({"the", "a", "an"})
# splits "CANCEL", "Cancel", "btnSave", "ic_clear_history", "v2"
_WORD_RE = re.compile(r"[A-Z]+(?![a-z])|[A-Z]?[a-z]+|\d+")


def phrase_tokens(text: str) -> list[str]:
    return [w.casefold() for w in _WORD_RE.findall(text or "")]


@dataclass(frozen=True)
class PhraseVector:
    components: np.ndarray
    in_vocab_count: int


class VectorStore:
    """Immutable word -> vector table; words are case-folded at load."""

    def __init__(self, table: dict, dim: int):
        if dim < 1:
            raise ValueError("dim must be positive")
        frozen = {}
        for word, vec in table.items():
            arr = np.array(vec, dtype=float)
            if arr.shape != (dim,):
                raise DimensionMismatch(f"vector for {word!r} has shape {arr.shape}, expected ({dim},)")
            arr.setflags(write=False)
            frozen[word.casefold()] = arr
        self._table = frozen
        self.dim = dim

    def __contains__(self, word):
        return word.casefold() in self._table

    def __len__(self):
        return len(self._table)

    def __getitem__(self, word):
        return self._table[word.casefold()]

    def words(self):
        return list(self._table)

    def scaled(self, factor: float) -> "VectorStore":
        return VectorStore({w: v * factor for w, v in self._table.items()}, self.dim)

    @classmethod
    def load(cls, source) -> "VectorStore":
        """Read ``count dim`` then ``word c1 ... c_dim`` lines."""
        if isinstance(source, (str, Path)):
            with open(source, encoding="utf-8") as fh:
                return cls._from_lines(fh)
        return cls._from_lines(source)

    @classmethod
    def _from_lines(cls, lines):
        lines = iter(lines)
        try:
            header = next(lines).split()
            count, dim = int(header[0]), int(header[1])
            if len(header) != 2 or count < 0 or dim < 1:
                raise ValueError
        except (StopIteration, ValueError, IndexError):
            raise BadHeader("first line must be '<count> <dim>'", 1) from None
        table = {}
        for lineno, line in enumerate(lines, 2):
            parts = line.split()
            if not parts:
                continue
            word, comps = parts[0].casefold(), parts[1:]
            if len(comps) != dim:
                raise DimensionMismatch(f"expected {dim} components, got {len(comps)}", lineno)
            if word in table:
                raise DuplicateWord(f"duplicate word {word!r}", lineno)
            try:
                table[word] = [float(c) for c in comps]
            except ValueError:
                raise DimensionMismatch("non-numeric component", lineno) from None
        if len(table) != count:
            raise BadHeader(f"header announces {count} words, file has {len(table)}", 1)
        return cls(table, dim)


load = VectorStore.load


def phrase_vector(text: str, store: VectorStore) -> PhraseVector:
    """Mean of the in-vocabulary token vectors, articles excluded."""
    vecs = [store[w] for w in phrase_tokens(text) if w not in STOP_ARTICLES and w in store]
    if not vecs:
        return PhraseVector(np.zeros(store.dim), 0)
    return PhraseVector(np.mean(vecs, axis=0), len(vecs))


def _fallback(a, b):
    return 1.0 if a.strip().casefold() == b.strip().casefold() else 0.0


def similarity(a: str, b: str, store: VectorStore) -> float:
    """Cosine of the phrase vectors; exact string match when either side is out of vocabulary."""
    va, vb = phrase_vector(a, store), phrase_vector(b, store)
    if va.in_vocab_count == 0 or vb.in_vocab_count == 0:
        return _fallback(a, b)
    na, nb = np.linalg.norm(va.components), np.linalg.norm(vb.components)
    if na == 0.0 or nb == 0.0:
        return _fallback(a, b)
    cos = float(np.dot(va.components, vb.components) / (na * nb))
    return min(1.0, max(-1.0, cos))
