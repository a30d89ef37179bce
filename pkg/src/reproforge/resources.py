"""Bundled data files (lexicons, vectors, scenarios) and their loaders."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ConfigError

DATA_DIR = Path(str(resources.files("reproforge") / "data"))
SCENARIO_DIR = DATA_DIR / "scenarios"
CORPUS_DIR = DATA_DIR / "corpus"


def data_path(name: str) -> Path:
    return DATA_DIR / name


def _rows(path, ncols=None):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if ncols is not None and len(cols) != ncols:
                raise ConfigError(f"{path}:{lineno}: expected {ncols} tab-separated columns")
            yield lineno, cols


def read_word_list(path) -> frozenset:
    return frozenset(cols[0].strip().casefold() for _, cols in _rows(path))


@dataclass(frozen=True)
class VerbForms:
    """Inflection table: every surface form maps to its base verb."""

    base_of: dict
    participles: frozenset
    third_person: frozenset
    past: frozenset
    gerunds: frozenset

    def lemma(self, word: str) -> str | None:
        return self.base_of.get(word.casefold())

    def is_verb(self, word: str) -> bool:
        return word.casefold() in self.base_of

    def is_base(self, word: str) -> bool:
        return self.base_of.get(word.casefold()) == word.casefold()


@lru_cache(maxsize=None)
def load_verb_forms(path=None) -> VerbForms:
    path = path or data_path("verbs.tsv")
    base_of, parts, third, past, ger = {}, set(), set(), set(), set()
    for _, cols in _rows(path, 5):
        base, s3, pst, pp, g = (c.casefold() for c in cols)
        for form in (base, s3, pst, pp, g):
            base_of.setdefault(form, base)
        third.add(s3)
        past.add(pst)
        parts.add(pp)
        ger.add(g)
    return VerbForms(base_of, frozenset(parts), frozenset(third), frozenset(past), frozenset(ger))


@lru_cache(maxsize=None)
def load_specials(path=None) -> dict:
    """``name<TAB>literal`` where the literal is a JSON string."""
    path = path or data_path("specials.tsv")
    table = {}
    for lineno, cols in _rows(path, 2):
        try:
            table[cols[0].strip().casefold()] = json.loads(cols[1])
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{lineno}: literal must be a JSON string") from exc
    return table


@lru_cache(maxsize=None)
def load_rotate_targets(path=None) -> frozenset:
    return read_word_list(path or data_path("rotate_targets.txt"))


@lru_cache(maxsize=None)
def load_non_actions(path=None) -> frozenset:
    return read_word_list(path or data_path("non_actions.txt"))


def default_vectors_path() -> Path:
    return data_path("vectors.txt")


def scenario_path(name: str) -> Path:
    path = SCENARIO_DIR / name
    if not path.is_dir():
        raise ConfigError(f"no bundled scenario named {name!r}")
    return path
