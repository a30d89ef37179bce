"""YAML artifacts: step dumps and traces, written with a fixed key order."""

from __future__ import annotations

from pathlib import Path

import yaml

from .app_model import UIEvent, load_yaml
from .errors import SchemaError
from .extract import S2R
from .matcher import Trace


def dump_yaml(doc) -> str:
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True, default_flow_style=False, width=100)


def write_yaml(doc, path):
    Path(path).write_text(dump_yaml(doc), encoding="utf-8")


def trace_to_dict(trace: Trace, crash_message=None) -> dict:
    return {
        "schema_version": 1,
        "policy": trace.policy,
        "success": trace.success,
        "episodes_used": trace.episodes_used,
        "seed": trace.seed,
        "crash_message": crash_message,
        "final_message": trace.message,
        "hyperparameters": trace.hyper.to_dict(),
        "events": [dict(index=i, **step.to_dict()) for i, step in enumerate(trace.steps)],
    }


def read_trace_events(source) -> list:
    """Events of a trace document (path or already-loaded mapping), in order."""
    doc = source if isinstance(source, dict) else load_yaml(Path(source).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or not isinstance(doc.get("events"), list):
        raise SchemaError("trace must be a mapping with an 'events' list", "$.events")
    events = []
    for i, item in enumerate(doc["events"]):
        try:
            events.append(UIEvent.from_dict(item["event"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed event: {exc}", f"$.events[{i}]") from None
    return events


def s2rs_to_dict(s2rs) -> dict:
    return {"schema_version": 1, "s2rs": [s.to_dict() for s in s2rs]}


def read_s2rs(source) -> list:
    doc = source if isinstance(source, dict) else load_yaml(Path(source).read_text(encoding="utf-8"))
    try:
        return [S2R.from_dict(d) for d in doc["s2rs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed step list: {exc}", "$.s2rs") from None
