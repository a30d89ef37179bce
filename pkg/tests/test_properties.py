"""Randomized invariants, 1000 cases per property."""

from collections import Counter
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from conftest import SCENARIOS, scenario
from oracles import TOY_GAMMA, TOY_MDP, value_iteration
from reproforge.app_model import EventKind, model_from_dict, state_key, vh_equal
from reproforge.embeddings import VectorStore, similarity
from reproforge.extract import (ActionLexicon, ClauseParts, S2R, classify_action,
                                extract_input_value)
from reproforge.grammar import parse_restricted
from reproforge.matcher import Hyperparams, Matcher, QTable, q_update, replay
from reproforge.pipeline import extract_report
from reproforge.reorder import normalize
from reproforge.tree import parse_bracketed, serialize, tokenize
from strategies import CONNECTIVE_WORDS, PREPS, app_models, noun_phrase, sentence, trees

N = 1000
prop = settings(max_examples=N, deadline=None, suppress_health_check=list(HealthCheck))


def content(words):
    return [w.casefold() for w in words if w.casefold() not in CONNECTIVE_WORDS]


# -- sentence ingest ----------------------------------------------------------

@prop
@given(sentence())
def test_parse_preserves_leaf_yield(text):
    tree = parse_restricted(text)
    assert [t.text for t in tree.tokens()] == [t.text for t in tokenize(text)]


@prop
@given(trees())
def test_serialize_round_trip(tree):
    assert parse_bracketed(serialize(tree)) == tree


# -- reordering ---------------------------------------------------------------

@prop
@given(sentence())
def test_normalize_conserves_tokens(text):
    tree = parse_restricted(text)
    out = normalize(tree)
    assert out
    have = Counter(w for t in out for w in content(t.words()))
    want = Counter(content(tree.words()))
    assert set(have) <= set(want)
    if " or " not in f" {text} ":
        # shared subjects may be copied into several clauses, nothing is lost
        assert set(have) == set(want)
        assert all(have[w] >= n for w, n in want.items())


@prop
@given(sentence(alternatives=False, temporal=False))
def test_neutral_connectives_keep_order(text):
    tree = parse_restricted(text)
    out = normalize(tree)
    flat = [w for t in out for w in content(t.words()) if w != "i"]
    assert flat == [w for w in content(tree.words()) if w != "i"]


@prop
@given(sentence())
def test_normalize_idempotent(text):
    for clause in normalize(parse_restricted(text)):
        assert normalize(clause) == [clause]


# -- embeddings ---------------------------------------------------------------

VOCAB = ["save", "ok", "button", "menu", "photo", "page"]


@st.composite
def stores(draw):
    dim = draw(st.integers(1, 5))
    words = draw(st.lists(st.sampled_from(VOCAB), min_size=1, unique=True))
    vec = st.lists(st.integers(-5, 5).map(float), min_size=dim, max_size=dim)
    return VectorStore({w: draw(vec) for w in words}, dim)


phrases = st.lists(st.sampled_from(VOCAB + ["the", "zzz"]), min_size=1, max_size=3).map(" ".join)


@prop
@given(stores(), phrases, phrases)
def test_similarity_symmetric_and_bounded(store, a, b):
    s = similarity(a, b, store)
    assert -1.0 <= s <= 1.0
    assert s == pytest.approx(similarity(b, a, store), abs=1e-12)


@prop
@given(stores(), phrases, phrases, st.floats(1e-3, 1e3))
def test_similarity_scale_invariant(store, a, b, c):
    from reproforge.embeddings import phrase_vector
    for p in (a, b):
        assume(np.linalg.norm(phrase_vector(p, store).components) > 1e-6
               or phrase_vector(p, store).in_vocab_count == 0)
    assert similarity(a, b, store.scaled(c)) == pytest.approx(similarity(a, b, store), abs=1e-9)


# -- extraction ---------------------------------------------------------------

@pytest.fixture(scope="module")
def lexicon():
    return ActionLexicon.from_file()


PREDICATES = ["click", "tap", "change", "take", "open", "rotate", "scroll", "swipe", "type",
              "enter", "choose", "press", "move", "fill", "turn", "select"]


@prop
@given(st.sampled_from(PREDICATES), st.floats(1e-3, 1e3))
def test_classification_scale_invariant(store, lexicon, verb, c):
    assert classify_action(verb, lexicon, store.scaled(c)) == classify_action(verb, lexicon, store)


@prop
@given(st.sampled_from(PREDICATES), st.floats(0, 1), st.floats(0, 1))
def test_dual_action_monotone_in_delta(store, lexicon, verb, d1, d2):
    lo, hi = sorted((d1, d2))
    primary, alt = classify_action(verb, lexicon, store, lo)
    p2, alt2 = classify_action(verb, lexicon, store, hi)
    assert p2 == primary
    if alt is not None:
        assert alt2 == alt


@prop
@given(noun_phrase(), st.sampled_from(PREPS), noun_phrase(), st.booleans())
def test_input_rules_yield_value_or_override(obj, prep, mod, with_literal):
    parts = ClauseParts("type", "I", obj, f"{prep} {mod}", object_literal="abc" if with_literal else None)
    value, override = extract_input_value(parts)
    assert value is not None or override is not None


@prop
@given(sentence())
def test_extracted_steps_satisfy_invariants(extractor, text):
    for s2r in extract_report(text + ".", extractor).s2rs:
        assert S2R.from_dict(s2r.to_dict()) == s2r
        assert s2r.alt_action != s2r.action


# -- app model ----------------------------------------------------------------

@st.composite
def walks(draw):
    model = model_from_dict(draw(app_models()))
    state, visited, pairs = model.initial_state(), [model.initial_state()], []
    for _ in range(draw(st.integers(0, 8))):
        events = model.available_events(state)
        ev = draw(st.sampled_from(events))
        if ev.kind is EventKind.Input:
            ev = ev.bind(draw(st.sampled_from(["3", "9", "hello", ""])))
        out = model.execute(state, ev)
        pairs.append((state, ev, out))
        if out.crashed:
            break
        state = out.state
        visited.append(state)
    return model, visited, pairs


@prop
@given(walks())
def test_execute_deterministic(walk):
    model, _, pairs = walk
    for state, ev, out in pairs:
        assert model.execute(state, ev) == out
        if out.kind.value == "NoChange":
            assert out.state == state


@prop
@given(walks())
def test_available_events_unbound(walk):
    model, visited, _ = walk
    for state in visited:
        assert all(ev.value is None for ev in model.available_events(state))


@prop
@given(walks())
def test_vh_equal_iff_same_key(walk):
    _, visited, _ = walk
    for a in visited:
        for b in visited:
            assert vh_equal(a, b) == (state_key(a) == state_key(b))


# -- matcher ------------------------------------------------------------------

class Probe(Matcher):
    """Records NOOP usage and refuses to expand terminal states."""

    def infer_actions(self, state):
        assert not self.is_terminal(state)
        return super().infer_actions(state)


@pytest.fixture(scope="module")
def bundles(extractor):
    return {n: (scenario(n), extract_report(scenario(n)["report"], extractor).s2rs) for n in SCENARIOS}


hypers = st.builds(
    Hyperparams, alpha=st.floats(0.05, 1.0), gamma=st.floats(0.0, 0.99), epsilon=st.floats(0.0, 1.0),
    n0=st.integers(0, 3), episode_budget=st.integers(1, 15), seed=st.integers(0, 2**32 - 1),
)


@prop
@given(st.sampled_from(SCENARIOS), hypers)
def test_matcher_invariants(store, bundles, name, hyper):
    sc, s2rs = bundles[name]
    m = Probe(sc["model"], s2rs, store, hyper, sc["crash_message"])
    trace = m.run()
    bound = hyper.q_bound + 1e-9
    assert all(abs(v) <= bound for _, v in m.q.items())
    noops = sum(1 for s in trace.steps if s.action.is_noop)
    matched = len(trace.steps) - noops
    assert noops <= hyper.n0 and matched <= len(s2rs)
    if trace.success:
        ok, _, _ = replay(sc["model"], trace.events, sc["crash_message"])
        assert ok
    again = Probe(sc["model"], s2rs, store, hyper, sc["crash_message"]).run()
    assert [s.to_dict() for s in again.steps] == [s.to_dict() for s in trace.steps]


@prop
@given(st.floats(0.05, 1.0), st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_bellman_backup_contracts(alpha, init):
    star = value_iteration()
    keys = sorted(star)
    q = QTable()
    for k, v in zip(keys, init):
        q.set(*k, v)
    before = max(abs(q.get(*k) - star[k]) for k in keys)
    for s, acts in TOY_MDP.items():
        for a, (nxt, r) in acts.items():
            nexts = list(TOY_MDP[nxt]) if nxt in TOY_MDP else []
            q_update(q, s, a, r, nxt if nexts else None, nexts, alpha, TOY_GAMMA)
    after = max(abs(q.get(*k) - star[k]) for k in keys)
    assert after <= before + 1e-9
