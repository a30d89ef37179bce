"""Report text -> reordered standalone sentences -> steps, with every intermediate kept."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import OutOfGrammar, ReproError
from .extract import ExtractionWarning, Extractor
from .grammar import parse_restricted
from .reorder import ConnectiveLexicon, normalize
from .tree import parse_bracketed_many

_OPEN_QUOTES = {'"': '"', "“": "”"}


def split_sentences(text: str) -> list:
    """Split on ., ! or ? followed by whitespace or end of text, never inside quotes."""
    out, buf, closing = [], [], None
    for i, ch in enumerate(text):
        buf.append(ch)
        if closing is not None:
            if ch == closing:
                closing = None
            continue
        if ch in _OPEN_QUOTES:
            closing = _OPEN_QUOTES[ch]
        elif ch in ".!?" and (i + 1 == len(text) or text[i + 1].isspace()):
            out.append("".join(buf))
            buf = []
    out.append("".join(buf))
    return [s.strip() for s in out if s.strip() and any(c.isalnum() for c in s)]


@dataclass
class SentenceRecord:
    original: str
    standalone: list = field(default_factory=list)
    clauses: list = field(default_factory=list)
    s2rs: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            "original": self.original,
            "standalone": list(self.standalone),
            "clauses": list(self.clauses),
            "s2rs": [s.to_dict() for s in self.s2rs],
            "warnings": [w.to_dict() for w in self.warnings],
        }


@dataclass
class ExtractionReport:
    records: list = field(default_factory=list)

    @property
    def s2rs(self):
        return [s for r in self.records for s in r.s2rs]

    @property
    def warnings(self):
        return [w for r in self.records for w in r.warnings]

    def summary(self):
        return {
            "sentences": len(self.records),
            "standalone": sum(len(r.standalone) for r in self.records),
            "s2rs": len(self.s2rs),
            "warnings": len(self.warnings),
        }

    def to_dict(self):
        return {
            "schema_version": 1,
            "summary": self.summary(),
            "sentences": [r.to_dict() for r in self.records],
            "s2rs": [s.to_dict() for s in self.s2rs],
        }


def _clause_dict(parts):
    if parts is None:
        return None
    return {"subject": parts.subject, "predicate": parts.predicate,
            "object": parts.object, "modifier": parts.modifier}


def extract_report(text: str, extractor: Extractor, lexicon: ConnectiveLexicon | None = None,
                   input_mode: str = "text", max_depth: int = 16) -> ExtractionReport:
    """Run ingestion, reordering and extraction over a whole report."""
    lexicon = lexicon or ConnectiveLexicon.from_file()
    report = ExtractionReport()
    if input_mode == "trees":
        items = [(t.text(), t) for t in parse_bracketed_many(text)]
    elif input_mode == "text":
        items = [(s, None) for s in split_sentences(text)]
    else:
        raise ValueError(f"unknown input mode {input_mode!r}")

    for original, tree in items:
        rec = SentenceRecord(original)
        report.records.append(rec)
        try:
            tree = tree if tree is not None else parse_restricted(original, extractor.verbs)
            sentences = normalize(tree, lexicon, max_depth)
        except OutOfGrammar as exc:
            rec.warnings.append(ExtractionWarning(original, "OutOfGrammar", str(exc)))
            continue
        except ReproError as exc:
            rec.warnings.append(ExtractionWarning(original, type(exc).__name__, str(exc)))
            continue
        for sentence in sentences:
            rec.standalone.append(sentence.text())
            res = extractor.extract_sentence(sentence)
            rec.clauses.append(_clause_dict(res.parts))
            rec.warnings.extend(res.warnings)
            if res.s2r is not None:
                rec.s2rs.append(res.s2r)
    return report
