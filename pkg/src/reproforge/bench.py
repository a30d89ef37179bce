"""Extraction precision/recall over a ground-truth corpus and a reproduction matrix over scenarios."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .app_model import load_yaml
from .errors import ReproError, SchemaError


def _words(text):
    return re.findall(r"\w+", (text or "").casefold())


def step_correct(extracted, expected: dict) -> bool:
    """Correctness of one extracted step against one ground-truth record.

    Only fields present in the record are checked. The action matches if it is
    the primary or the alternate action; the target matches if every expected
    word occurs in the extracted target; input and direction must be equal.
    """
    if "action" in expected and expected["action"] not in {k.value for k in extracted.kinds}:
        return False
    if "target" in expected:
        have = set(_words(extracted.target_widget))
        if not set(_words(expected["target"])) <= have:
            return False
    if "input" in expected and extracted.input_value != str(expected["input"]):
        return False
    if "direction" in expected:
        got = extracted.direction.value if extracted.direction else None
        if got != expected["direction"]:
            return False
    return True


def count_correct(extracted, expected) -> int:
    """Size of a maximum one-to-one matching between extracted and expected steps."""
    if not extracted or not expected:
        return 0
    m = np.array([[1.0 if step_correct(e, g) else 0.0 for g in expected] for e in extracted])
    rows, cols = linear_sum_assignment(m, maximize=True)
    return int(m[rows, cols].sum())


@dataclass
class PRResult:
    correct: int = 0
    extracted: int = 0
    expected: int = 0
    per_item: list = field(default_factory=list)

    @property
    def precision(self):
        return self.correct / self.extracted if self.extracted else 1.0

    @property
    def recall(self):
        return self.correct / self.expected if self.expected else 1.0

    def to_dict(self):
        return {"precision": round(self.precision, 6), "recall": round(self.recall, 6),
                "correct": self.correct, "extracted": self.extracted, "expected": self.expected}


def precision_recall(pairs) -> PRResult:
    """``pairs`` is an iterable of (extracted steps, expected records) per sentence."""
    res = PRResult()
    for extracted, expected in pairs:
        c = count_correct(extracted, expected)
        res.correct += c
        res.extracted += len(extracted)
        res.expected += len(expected)
        res.per_item.append((c, len(extracted), len(expected)))
    return res


def load_corpus(path) -> list:
    doc = load_yaml(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or not isinstance(doc.get("items"), list):
        raise SchemaError("corpus must be a mapping with an 'items' list", "$.items")
    items = []
    for i, item in enumerate(doc["items"]):
        if "sentence" not in item or not isinstance(item.get("expected", []), list):
            raise SchemaError("item needs 'sentence' and an 'expected' list", f"$.items[{i}]")
        items.append((item["sentence"], item.get("expected") or []))
    return items


def evaluate_corpus(items, extractor, lexicon=None):
    from .pipeline import extract_report
    pairs, rows = [], []
    for sentence, expected in items:
        report = extract_report(sentence, extractor, lexicon)
        pairs.append((report.s2rs, expected))
        rows.append({"sentence": sentence, "extracted": [s.to_dict() for s in report.s2rs],
                     "expected": expected, "correct": count_correct(report.s2rs, expected)})
    return precision_recall(pairs), rows


@dataclass
class Bundle:
    name: str
    report: Path
    app_model: Path
    crash_message: str
    greedy_expected: str | None = None


def discover_bundles(root) -> list:
    root = Path(root)
    bundles = []
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        if not (d / "app.yaml").exists() or not (d / "report.txt").exists():
            continue
        meta = load_yaml((d / "bundle.yaml").read_text(encoding="utf-8")) if (d / "bundle.yaml").exists() else {}
        bundles.append(Bundle(d.name, d / "report.txt", d / "app.yaml",
                              (meta or {}).get("crash_message"), (meta or {}).get("greedy_expected")))
    return bundles


def reproduction_matrix(bundles, store, seeds=(0, 1, 2), hyper=None, policy="rl"):
    """{bundle: {seed: success or error text}}; a failing bundle never stops the batch."""
    from .extract import Extractor
    from .matcher import Hyperparams, Matcher
    from .app_model import load_model
    from .pipeline import extract_report

    hyper = hyper or Hyperparams()
    extractor = Extractor(store)
    out = {}
    for b in sorted(bundles, key=lambda b: b.name):
        row = {}
        try:
            s2rs = extract_report(b.report.read_text(encoding="utf-8"), extractor).s2rs
            model = load_model(b.app_model)
            for seed in seeds:
                m = Matcher(model, s2rs, store, Hyperparams(**{**hyper.to_dict(), "seed": seed}), b.crash_message)
                trace = m.run() if policy == "rl" else m.run_greedy()
                row[seed] = trace.success
        except (ReproError, OSError) as exc:
            row = {seed: f"error: {exc}" for seed in seeds}
        out[b.name] = row
    return out


def format_table(pr: PRResult | None, matrix: dict, seeds) -> str:
    lines = []
    if pr is not None:
        lines.append(f"extraction  precision={pr.precision:.3f}  recall={pr.recall:.3f}  "
                     f"({pr.correct} correct / {pr.extracted} extracted / {pr.expected} expected)")
    if matrix:
        width = max(len(n) for n in matrix)
        lines.append("scenario".ljust(width) + "  " + "  ".join(f"seed{s}" for s in seeds) + "  total")
        for name, row in matrix.items():
            cells = ["ok" if row[s] is True else ("FAIL" if row[s] is False else "ERR") for s in seeds]
            wins = sum(1 for s in seeds if row[s] is True)
            lines.append(name.ljust(width) + "  " + "  ".join(c.ljust(5) for c in cells) + f"  {wins}/{len(seeds)}")
    return "\n".join(lines)
