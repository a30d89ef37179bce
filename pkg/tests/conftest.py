import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reproforge.app_model import load_model, load_yaml  # noqa: E402
from reproforge.embeddings import VectorStore  # noqa: E402
from reproforge.extract import Extractor  # noqa: E402
from reproforge.resources import SCENARIO_DIR, default_vectors_path  # noqa: E402

SCENARIOS = ("exact_steps", "missing_step", "greedy_trap")


@pytest.fixture(scope="session")
def store():
    return VectorStore.load(default_vectors_path())


@pytest.fixture(scope="session")
def extractor(store):
    return Extractor(store)


def scenario(name):
    root = SCENARIO_DIR / name
    meta = load_yaml((root / "bundle.yaml").read_text(encoding="utf-8"))
    return {
        "root": root,
        "report": (root / "report.txt").read_text(encoding="utf-8"),
        "model": load_model(root / "app.yaml"),
        "crash_message": meta["crash_message"],
        "greedy_expected": meta.get("greedy_expected"),
    }


MINIMAL_MODEL = """
schema_version: 1
app:
  name: tiny
  initial_screen: main
  crash_messages: [boom]
screens:
  - id: main
    widgets:
      - {key: go, text: Go}
transitions:
  - {from: main, on: {click: go}, to: {crash: boom}}
"""
