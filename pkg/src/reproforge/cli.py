"""Command-line entry point: ``reproforge {extract,reproduce,replay,bench}``.

Exit codes: 0 success; 1 reproduction failed or trace not reproduced;
2 extraction finished with warnings; 3 or more for errors (bad input, bad
config, unreadable files).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .app_model import load_model
from .artifacts import dump_yaml, read_trace_events, s2rs_to_dict, trace_to_dict, write_yaml
from .bench import (discover_bundles, evaluate_corpus, format_table, load_corpus,
                    reproduction_matrix)
from .config import build_config
from .embeddings import VectorStore
from .errors import ConfigError, IllegalEvent, ReproError
from .extract import ActionLexicon, Extractor
from .matcher import Matcher, replay
from .pipeline import extract_report
from .reorder import ConnectiveLexicon
from .resources import CORPUS_DIR, SCENARIO_DIR, default_vectors_path, load_specials, scenario_path

EXIT_OK, EXIT_FAILED, EXIT_WARNINGS, EXIT_ERROR, EXIT_USAGE = 0, 1, 2, 3, 4

log = logging.getLogger("reproforge")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # keep 2 free for "finished with warnings"
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p):
    p.add_argument("--config", type=Path, help="YAML config file (default: $REPROFORGE_CONFIG)")
    p.add_argument("--embeddings", type=Path, help="word-vector file (default: bundled toy vectors)")
    p.add_argument("--connectives", type=Path, help="connective lexicon (word<TAB>category)")
    p.add_argument("--actions", type=Path, help="action lexicon (kind<TAB>synonym)")
    p.add_argument("--specials", type=Path, help="special input values (name<TAB>JSON literal)")
    p.add_argument("--out", type=Path, help="output file (extract, replay) or directory (reproduce, bench)")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_matching(p):
    p.add_argument("--app-model", type=Path)
    p.add_argument("--crash-message")
    p.add_argument("--scenario", help="use a bundled scenario for report, model and crash message")
    p.add_argument("--seed", type=int)
    p.add_argument("--noop-budget", type=int, help="NOOPs per episode (n0)")
    p.add_argument("--episodes", type=int, help="episode budget")
    p.add_argument("--timeout-secs", type=float, help="optional wall-clock limit")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reproforge", description="Reproduce app crashes from bug-report steps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="report text -> ordered steps")
    p.add_argument("--report", type=Path)
    p.add_argument("--input", choices=("text", "trees"), dest="input_mode")
    p.add_argument("--scenario")
    _add_common(p)

    p = sub.add_parser("reproduce", help="extract steps, then search for a crashing event trace")
    p.add_argument("--report", type=Path)
    p.add_argument("--input", choices=("text", "trees"), dest="input_mode")
    p.add_argument("--policy", choices=("rl", "greedy"))
    _add_matching(p)
    _add_common(p)

    p = sub.add_parser("replay", help="re-execute a trace against a model")
    p.add_argument("--trace", type=Path)
    _add_matching(p)
    _add_common(p)

    p = sub.add_parser("bench", help="extraction precision/recall and reproduction matrix")
    p.add_argument("--corpus", type=Path, help="directory with corpus.yaml and/or scenario bundles")
    p.add_argument("--seeds", type=int, nargs="+")
    p.add_argument("--policy", choices=("rl", "greedy"))
    _add_common(p)
    return parser


def _flags(args) -> dict:
    flags = {
        "report_path": getattr(args, "report", None),
        "app_model_path": getattr(args, "app_model", None),
        "embeddings_path": args.embeddings,
        "connectives_path": args.connectives,
        "actions_path": args.actions,
        "specials_path": args.specials,
        "crash_message": getattr(args, "crash_message", None),
        "output_path": args.out,
        "input_mode": getattr(args, "input_mode", None),
        "policy": getattr(args, "policy", None),
        "trace_path": getattr(args, "trace", None),
        "corpus_dir": getattr(args, "corpus", None),
        "seeds": tuple(args.seeds) if getattr(args, "seeds", None) else None,
        "hyper": {
            "seed": getattr(args, "seed", None),
            "n0": getattr(args, "noop_budget", None),
            "episode_budget": getattr(args, "episodes", None),
            "wall_clock_timeout": getattr(args, "timeout_secs", None),
        },
    }
    scenario = getattr(args, "scenario", None)
    if scenario:
        root = scenario_path(scenario)
        flags["report_path"] = flags["report_path"] or root / "report.txt"
        if (root / "app.yaml").exists() and args.command != "extract":
            flags["app_model_path"] = flags["app_model_path"] or root / "app.yaml"
        if (root / "bundle.yaml").exists() and args.command != "extract":
            from .app_model import load_yaml
            meta = load_yaml((root / "bundle.yaml").read_text(encoding="utf-8")) or {}
            flags["crash_message"] = flags["crash_message"] or meta.get("crash_message")
    return flags


def _extractor(cfg):
    store = VectorStore.load(cfg.embeddings_path or default_vectors_path())
    lexicon = ActionLexicon.from_file(cfg.actions_path)
    specials = load_specials(cfg.specials_path) if cfg.specials_path else None
    return Extractor(store, lexicon, cfg.hyper.delta, specials=specials)


def _crash_message(cfg, model):
    if cfg.crash_message is not None:
        return cfg.crash_message
    if len(model.crash_messages) == 1:
        return model.crash_messages[0]
    raise ConfigError("--crash-message is required when the model registers several crash messages")


def _emit(text, path=None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_extract(cfg):
    extractor = _extractor(cfg)
    report = extract_report(cfg.report_path.read_text(encoding="utf-8"), extractor,
                            ConnectiveLexicon.from_file(cfg.connectives_path), cfg.input_mode)
    _emit(dump_yaml(report.to_dict()), cfg.output_path)
    for w in report.warnings:
        log.warning("%s: %s", w.kind, w.message)
    return report, (EXIT_WARNINGS if report.warnings else EXIT_OK)


def cmd_reproduce(cfg):
    extractor = _extractor(cfg)
    report = extract_report(cfg.report_path.read_text(encoding="utf-8"), extractor,
                            ConnectiveLexicon.from_file(cfg.connectives_path), cfg.input_mode)
    model = load_model(cfg.app_model_path)
    message = _crash_message(cfg, model)
    matcher = Matcher(model, report.s2rs, extractor.store, cfg.hyper, message)
    trace = matcher.run() if cfg.policy == "rl" else matcher.run_greedy()
    trace_doc = trace_to_dict(trace, message)
    if cfg.output_path is not None:
        cfg.output_path.mkdir(parents=True, exist_ok=True)
        write_yaml(trace_doc, cfg.output_path / "trace.yaml")
        write_yaml({**report.to_dict()}, cfg.output_path / "extraction.yaml")
    else:
        sys.stdout.write(dump_yaml(trace_doc))
    verdict = "reproduced" if trace.success else "not reproduced"
    log.info("%s after %d episode(s) with %d event(s)", verdict, trace.episodes_used, len(trace.steps))
    return trace, (EXIT_OK if trace.success else EXIT_FAILED)


def cmd_replay(cfg):
    model = load_model(cfg.app_model_path)
    message = _crash_message(cfg, model)
    events = read_trace_events(cfg.trace_path)
    try:
        ok, index, outcome = replay(model, events, message)
        detail = None
    except IllegalEvent as exc:
        ok, detail = False, str(exc)
        index = _diverging_index(model, events)
    verdict = {"verdict": "reproduced" if ok else "not reproduced", "events": len(events),
               "diverging_index": index, "detail": detail}
    _emit(dump_yaml(verdict), cfg.output_path)
    return verdict, (EXIT_OK if ok else EXIT_FAILED)


def _diverging_index(model, events):
    state = model.initial_state()
    for i, ev in enumerate(events):
        try:
            outcome = model.execute(state, ev)
        except IllegalEvent:
            return i
        state = outcome.state
    return len(events)


def cmd_bench(cfg):
    root = cfg.corpus_dir
    pr, matrix = None, {}
    store = VectorStore.load(cfg.embeddings_path or default_vectors_path())
    corpus_file = (root / "corpus.yaml") if root else CORPUS_DIR / "corpus.yaml"
    if corpus_file.exists():
        extractor = Extractor(store, ActionLexicon.from_file(cfg.actions_path), cfg.hyper.delta)
        pr, _ = evaluate_corpus(load_corpus(corpus_file), extractor,
                                ConnectiveLexicon.from_file(cfg.connectives_path))
    bundles = discover_bundles(root if root else SCENARIO_DIR)
    if bundles:
        matrix = reproduction_matrix(bundles, store, cfg.seeds, cfg.hyper, cfg.policy)
    table = format_table(pr, matrix, cfg.seeds)
    summary = {"extraction": pr.to_dict() if pr else None,
               "reproduction": {n: {str(s): v for s, v in row.items()} for n, row in matrix.items()}}
    if cfg.output_path is not None:
        cfg.output_path.mkdir(parents=True, exist_ok=True)
        write_yaml(summary, cfg.output_path / "bench.yaml")
    if table:
        print(table)
    return summary, EXIT_OK


COMMANDS = {"extract": cmd_extract, "reproduce": cmd_reproduce, "replay": cmd_replay, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = build_config(args.command, _flags(args), args.config)
        _, code = COMMANDS[args.command](cfg)
        return code
    except ReproError as exc:
        print(f"reproforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"reproforge: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
