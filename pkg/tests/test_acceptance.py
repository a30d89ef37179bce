"""The eight acceptance criteria, each reporting one PASS/FAIL line with its runtime."""

import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import SCENARIOS, scenario
from oracles import TOY_GAMMA, TOY_MDP, shortest_crash_sequences, value_iteration
from reproforge.app_model import load_yaml
from reproforge.bench import evaluate_corpus, load_corpus
from reproforge.cli import main
from reproforge.matcher import Hyperparams, Matcher, QTable, q_update
from reproforge.pipeline import extract_report
from reproforge.resources import CORPUS_DIR, SCENARIO_DIR

SEEDS = (0, 1, 2)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, elapsed, detail=""):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {number}] {status} {title} ({elapsed:.2f}s) {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def s2rs_of(sc, extractor):
    return extract_report(sc["report"], extractor).s2rs


def test_1_reordering_fidelity(extractor, report):
    root = SCENARIO_DIR / "fig1"
    expected = load_yaml((root / "expected.yaml").read_text(encoding="utf-8"))
    t0 = time.perf_counter()
    got = {name: [s for r in extract_report((root / name).read_text(encoding="utf-8"), extractor).records
                  for s in r.standalone]
           for name in expected}
    elapsed = time.perf_counter() - t0
    ok = got == expected and elapsed < 1.0
    report(1, "reordering matches the expected sentence order", ok, elapsed)


def test_2_extraction_corpus(extractor, report):
    t0 = time.perf_counter()
    pr, _ = evaluate_corpus(load_corpus(CORPUS_DIR / "corpus.yaml"), extractor)
    elapsed = time.perf_counter() - t0
    ok = pr.precision >= 0.90 and pr.recall >= 0.90 and elapsed < 5.0
    report(2, "corpus precision/recall", ok, elapsed,
           f"P={pr.precision:.3f} R={pr.recall:.3f} ({pr.correct}/{pr.extracted}/{pr.expected})")


def test_3_missing_step_bridging(store, extractor, report):
    sc = scenario("missing_step")
    s2rs = s2rs_of(sc, extractor)
    seqs = shortest_crash_sequences(sc["model"], sc["crash_message"], max_len=5)
    # the oracle: the crash is reachable, but not within |steps| events
    oracle_ok = bool(seqs) and min(len(s) for s in seqs) == len(s2rs) + 1
    t0 = time.perf_counter()
    worst, results = 0.0, {}
    for n0 in (0, 1):
        wins = 0
        for seed in SEEDS:
            t = time.perf_counter()
            trace = Matcher(sc["model"], s2rs, store, Hyperparams(n0=n0, seed=seed, episode_budget=500),
                            sc["crash_message"]).run()
            worst = max(worst, time.perf_counter() - t)
            wins += trace.success
        results[n0] = wins
    elapsed = time.perf_counter() - t0
    ok = oracle_ok and results[0] == 0 and results[1] >= 2 and worst < 30.0
    report(3, "missing step needs one NOOP", ok, elapsed,
           f"n0=0: {results[0]}/3, n0=1: {results[1]}/3, slowest run {worst:.2f}s")


def test_4_local_optimum_escape(tmp_path, report):
    t0 = time.perf_counter()
    greedy = main(["reproduce", "--scenario", "greedy_trap", "--policy", "greedy", "--out", str(tmp_path / "g")])
    wins, worst = 0, 0.0
    for seed in SEEDS:
        t = time.perf_counter()
        code = main(["reproduce", "--scenario", "greedy_trap", "--policy", "rl", "--seed", str(seed),
                     "--episodes", "500", "--out", str(tmp_path / f"rl{seed}")])
        worst = max(worst, time.perf_counter() - t)
        wins += code == 0
    elapsed = time.perf_counter() - t0
    ok = greedy == 1 and wins >= 2 and worst < 60.0
    report(4, "greedy trapped, Q-learning escapes", ok, elapsed,
           f"greedy exit {greedy}, rl {wins}/3, slowest run {worst:.2f}s")


def test_5_q_learning_correctness(report):
    t0 = time.perf_counter()
    star = value_iteration()
    q = QTable()
    for s, a in star:
        q.set(s, a, 0.0)
    updates, dist = 0, float("inf")
    while updates < 10_000 and dist >= 1e-3:
        for s, acts in TOY_MDP.items():
            for a, (nxt, r) in acts.items():
                nexts = list(TOY_MDP[nxt]) if nxt in TOY_MDP else []
                q_update(q, s, a, r, nxt if nexts else None, nexts, 0.5, TOY_GAMMA)
                updates += 1
        dist = max(abs(q.get(s, a) - v) for (s, a), v in star.items())
    identity = True
    for r in (-5.0, -1.0, 0.0, 0.3, 2.0):
        qi = QTable()
        qi.set("s", "a", 7.0)
        qi.set("n", "b", 11.0)
        identity &= q_update(qi, "s", "a", r, "n", ["b"], alpha=1.0, gamma=0.0) == r
    elapsed = time.perf_counter() - t0
    ok = dist < 1e-3 and updates <= 10_000 and identity
    report(5, "toy MDP converges to the value-iteration fixpoint", ok, elapsed,
           f"max-norm {dist:.2e} after {updates} updates, alpha=1/gamma=0 identity {identity}")


def test_6_replay_soundness(tmp_path, report):
    t0 = time.perf_counter()
    successes, confirmed = 0, 0
    for name in SCENARIOS:
        for seed in SEEDS:
            out = tmp_path / f"{name}-{seed}"
            if main(["reproduce", "--scenario", name, "--seed", str(seed), "--out", str(out)]) != 0:
                continue
            successes += 1
            verdict = out / "verdict.yaml"
            code = main(["replay", "--trace", str(out / "trace.yaml"),
                         "--app-model", str(SCENARIO_DIR / name / "app.yaml"), "--out", str(verdict)])
            confirmed += code == 0 and load_yaml(verdict.read_text())["verdict"] == "reproduced"
    elapsed = time.perf_counter() - t0
    ok = successes > 0 and confirmed == successes
    report(6, "every success trace replays", ok, elapsed, f"{confirmed}/{successes} confirmed")


def test_7_determinism(tmp_path, report):
    t0 = time.perf_counter()
    same = []
    for name in SCENARIOS:
        blobs = []
        for run in ("a", "b"):
            out = tmp_path / f"{name}-{run}"
            main(["reproduce", "--scenario", name, "--seed", "7", "--out", str(out)])
            blobs.append((out / "trace.yaml").read_bytes())
        same.append(blobs[0] == blobs[1])
    elapsed = time.perf_counter() - t0
    report(7, "identical inputs give byte-identical traces", all(same), elapsed,
           f"{sum(same)}/{len(same)} scenarios")


def test_8_invariant_suites(report):
    t0 = time.perf_counter()
    path = Path(__file__).parent / "test_properties.py"
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(path)],
                          capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    report(8, "property suites at 1000 cases each", proc.returncode == 0, elapsed, tail)
