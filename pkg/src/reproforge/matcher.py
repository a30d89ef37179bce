"""Match extracted steps to UI events with tabular Q-learning.

An MDP state is the device state, the index of the next unmatched step, and the
number of NOOPs left (events executed without consuming a step). Rewards combine
step/widget similarity with penalties for no-op events and for dead ends.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .app_model import AppModel, DeviceState, EventKind, Outcome, OutcomeKind, UIEvent, state_key, vh_equal
from .embeddings import VectorStore, similarity
from .errors import ConfigError

WIDGET_EVENTS = (EventKind.Click, EventKind.Input)


@dataclass(frozen=True)
class Hyperparams:
    alpha: float = 0.5
    gamma: float = 0.9
    epsilon: float = 0.2
    delta: float = 0.1
    d: float = 0.55
    r_d: float = -1.0
    r_e: float = -2.0
    r_f: float = -5.0
    n0: int = 2
    episode_budget: int = 500
    step_budget: int | None = None  # None: |steps| + n0 + 4
    seed: int = 0
    wall_clock_timeout: float | None = None
    noop_input: str = "test"

    def __post_init__(self):
        checks = [
            (0.0 < self.alpha <= 1.0, "alpha must lie in (0, 1]"),
            (0.0 <= self.gamma < 1.0, "gamma must lie in [0, 1)"),
            (0.0 <= self.epsilon <= 1.0, "epsilon must lie in [0, 1]"),
            (self.delta >= 0.0, "delta must be non-negative"),
            (0.0 < self.d < 1.0, "d must lie in (0, 1)"),
            (self.r_d < 0 and self.r_e < 0 and self.r_f < 0, "r_d, r_e and r_f must be negative"),
            (self.n0 >= 0, "n0 must be non-negative"),
            (self.episode_budget >= 1, "episode_budget must be at least 1"),
            (self.wall_clock_timeout is None or self.wall_clock_timeout > 0, "timeout must be positive"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def steps_for(self, n_steps: int) -> int:
        budget = n_steps + self.n0 + 4 if self.step_budget is None else self.step_budget
        if budget < n_steps + self.n0:
            raise ConfigError(f"step_budget {budget} is below |steps| + n0 = {n_steps + self.n0}")
        return budget

    @property
    def q_bound(self) -> float:
        return max(abs(self.r_d) + abs(self.r_e) + abs(self.r_f), 1.0) / (1.0 - self.gamma)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown hyperparameters: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class MDPState:
    device: DeviceState
    rs_index: int
    noop_remaining: int
    crash: str | None = None  # set once the app has crashed; the episode is over

    def key(self) -> str:
        return f"{state_key(self.device)}|rs={self.rs_index}|n={self.noop_remaining}"


@dataclass(frozen=True)
class MatchAction:
    event: UIEvent
    step: int | None  # None marks a NOOP

    @property
    def is_noop(self):
        return self.step is None

    def key(self) -> str:
        return f"{self.event.key()}|" + ("noop" if self.step is None else f"step:{self.step}")


class QTable:
    """(state key, action key) -> value; reading an entry that was never initialised is an error."""

    def __init__(self):
        self._q = {}

    def __contains__(self, sa):
        return sa in self._q

    def __len__(self):
        return len(self._q)

    def get(self, s, a) -> float:
        try:
            return self._q[(s, a)]
        except KeyError:
            raise KeyError(f"Q({s!r}, {a!r}) was never initialised") from None

    def set(self, s, a, value):
        self._q[(s, a)] = float(value)

    def items(self):
        return sorted(self._q.items())


def q_update(q: QTable, s: str, a: str, r: float, s_next: str | None, actions_next, alpha, gamma):
    """One Bellman backup; a terminal next state (no actions) contributes 0."""
    future = max((q.get(s_next, b) for b in actions_next), default=0.0) if s_next is not None else 0.0
    value = (1.0 - alpha) * q.get(s, a) + alpha * (r + gamma * future)
    q.set(s, a, value)
    return value


def select_action(q: QTable, s: str, actions, epsilon, rng):
    """Epsilon-greedy: the argmax (ties to smallest key) or, with prob. epsilon, one of the others."""
    if not actions:
        raise ValueError("no actions to choose from")
    best = min(actions, key=lambda a: (-q.get(s, a.key()), a.key()))
    if len(actions) == 1:
        return best
    if rng.random() < epsilon:
        others = [a for a in actions if a is not best]
        return others[int(rng.integers(len(others)))]
    return best


@dataclass
class TraceStep:
    action: MatchAction
    outcome: Outcome
    reward: float

    def to_dict(self):
        return {
            "event": self.action.event.to_dict(),
            "match": "NOOP" if self.action.is_noop else self.action.step,
            "outcome": self.outcome.to_dict(),
            "reward": round(self.reward, 6),
        }


@dataclass
class Trace:
    steps: list
    success: bool
    episodes_used: int
    message: str | None = None
    seed: int = 0
    hyper: Hyperparams = field(default_factory=Hyperparams)
    policy: str = "rl"

    @property
    def events(self):
        return [s.action.event for s in self.steps]


class Matcher:
    """Q-learning search for an event sequence that realises the steps and triggers the crash."""

    def __init__(self, model: AppModel, s2rs, store: VectorStore, hyper: Hyperparams | None = None,
                 crash_message: str | None = None):
        self.model = model
        self.s2rs = list(s2rs)
        self.store = store
        self.hyper = hyper or Hyperparams()
        self.crash_message = crash_message
        if crash_message is not None and crash_message.strip() not in {m.strip() for m in model.crash_messages}:
            raise ConfigError(f"crash message {crash_message!r} is not registered in the app model")
        self.q = QTable()
        self._sim_cache = {}

    # -- MDP pieces ---------------------------------------------------------
    def initial_state(self) -> MDPState:
        return MDPState(self.model.initial_state(), 0, self.hyper.n0)

    def is_terminal(self, state: MDPState) -> bool:
        return state.crash is not None or (state.rs_index == len(self.s2rs) and state.noop_remaining == 0)

    def infer_actions(self, state: MDPState) -> list:
        """Step matches for the next step (both kinds when dual), then NOOPs while budget remains."""
        events = self.model.available_events(state.device)
        out = []
        if state.rs_index < len(self.s2rs):
            s2r = self.s2rs[state.rs_index]
            kinds = {k.value for k in s2r.kinds}
            for ev in events:
                if ev.kind.value not in kinds:
                    continue
                if ev.kind in (EventKind.Scroll, EventKind.Swipe) and s2r.direction is not None \
                        and ev.direction != s2r.direction.value:
                    continue
                if ev.kind is EventKind.Input:
                    ev = ev.bind(s2r.input_value if s2r.input_value is not None else self.hyper.noop_input)
                out.append(MatchAction(ev, state.rs_index))
        if state.noop_remaining > 0:
            for ev in events:
                if ev.kind is EventKind.Input:
                    ev = ev.bind(self.hyper.noop_input)
                out.append(MatchAction(ev, None))
        return out

    def widget_similarity(self, event: UIEvent, target: str) -> float:
        key = (event.screen, event.widget, target)
        if key not in self._sim_cache:
            widget = self.model.screen(event.screen).widget(event.widget)
            self._sim_cache[key] = max(similarity(attr, target, self.store) for attr in widget.attributes)
        return self._sim_cache[key]

    def similarity_score(self, action: MatchAction) -> float:
        h = self.hyper
        if action.is_noop or action.event.kind not in WIDGET_EVENTS:
            return h.r_d
        target = self.s2rs[action.step].target_widget
        if not target:
            return h.r_d
        best = self.widget_similarity(action.event, target)
        return best if best >= h.d else h.r_d

    def initial_q(self, action: MatchAction) -> float:
        if not action.is_noop and action.event.kind not in WIDGET_EVENTS:
            return self.hyper.d
        return self.similarity_score(action)

    def init_q(self, state: MDPState, actions):
        s = state.key()
        for a in actions:
            if (s, a.key()) not in self.q:
                self.q.set(s, a.key(), self.initial_q(a))

    def transition(self, state: MDPState, action: MatchAction):
        outcome = self.model.execute(state.device, action.event)
        nxt = MDPState(
            outcome.state,
            state.rs_index + (0 if action.is_noop else 1),
            state.noop_remaining - (1 if action.is_noop else 0),
            outcome.message if outcome.crashed else None,
        )
        return nxt, outcome

    def is_success(self, outcome: Outcome) -> bool:
        if not outcome.crashed:
            return False
        if self.crash_message is None:
            return True
        return outcome.message.strip() == self.crash_message.strip()

    def reward(self, action, before: MDPState, after: MDPState, outcome: Outcome, dead_end=False) -> float:
        h = self.hyper
        r = self.similarity_score(action)
        if not outcome.crashed and vh_equal(before.device, after.device):
            r += h.r_e
        success = self.is_success(outcome)
        if not success and (outcome.crashed or self.is_terminal(after) or dead_end):
            r += h.r_f
        return r

    def _next_actions(self, state):
        return [] if self.is_terminal(state) else self.infer_actions(state)

    # -- learning loop ------------------------------------------------------
    def run(self) -> Trace:
        h = self.hyper
        rng = np.random.default_rng(h.seed)
        budget = h.steps_for(len(self.s2rs))
        deadline = None if h.wall_clock_timeout is None else time.monotonic() + h.wall_clock_timeout
        steps = []
        for episode in range(1, h.episode_budget + 1):
            if deadline is not None and time.monotonic() > deadline:
                return Trace(steps, False, episode - 1, None, h.seed, h, "rl")
            state = self.initial_state()
            steps = []
            actions = self._next_actions(state)
            for _ in range(budget):
                if not actions:
                    break
                self.init_q(state, actions)
                action = select_action(self.q, state.key(), actions, h.epsilon, rng)
                nxt, outcome = self.transition(state, action)
                next_actions = self._next_actions(nxt)
                r = self.reward(action, state, nxt, outcome, dead_end=not next_actions)
                steps.append(TraceStep(action, outcome, r))
                if self.is_success(outcome):
                    return Trace(steps, True, episode, outcome.message, h.seed, h, "rl")
                self.init_q(nxt, next_actions)
                q_update(self.q, state.key(), action.key(), r, nxt.key(),
                         [a.key() for a in next_actions], h.alpha, h.gamma)
                state, actions = nxt, next_actions
        return Trace(steps, False, h.episode_budget, None, h.seed, h, "rl")

    def run_greedy(self) -> Trace:
        """Single episode, always the most similar match for the next step; no learning."""
        h = self.hyper
        state = self.initial_state()
        steps = []
        for _ in range(h.steps_for(len(self.s2rs))):
            if self.is_terminal(state) or state.rs_index >= len(self.s2rs):
                break
            actions = self.infer_actions(state)
            matches = [a for a in actions if not a.is_noop]
            pool = matches or [a for a in actions if a.is_noop]
            if not pool:
                break
            action = min(pool, key=lambda a: (-self.initial_q(a), a.key()))
            nxt, outcome = self.transition(state, action)
            r = self.reward(action, state, nxt, outcome, dead_end=not self._next_actions(nxt))
            steps.append(TraceStep(action, outcome, r))
            if self.is_success(outcome):
                return Trace(steps, True, 1, outcome.message, h.seed, h, "greedy")
            state = nxt
        return Trace(steps, False, 1, None, h.seed, h, "greedy")


def run(model, s2rs, store, hyper=None, crash_message=None) -> Trace:
    return Matcher(model, s2rs, store, hyper, crash_message).run()


def run_greedy_baseline(model, s2rs, store, hyper=None, crash_message=None) -> Trace:
    return Matcher(model, s2rs, store, hyper, crash_message).run_greedy()


def replay(model: AppModel, events, crash_message: str | None = None):
    """Re-execute events from the initial state; returns (reproduced, index of divergence or None, last outcome)."""
    state = model.initial_state()
    outcome = None
    for i, ev in enumerate(events):
        outcome = model.execute(state, ev)
        if outcome.crashed:
            ok = crash_message is None or outcome.message.strip() == crash_message.strip()
            if ok and i == len(events) - 1:
                return True, None, outcome
            return False, i, outcome
        state = outcome.state
    return False, (len(events) if events else 0), outcome


def seeded(hyper: Hyperparams, seed: int) -> Hyperparams:
    return replace(hyper, seed=seed)


__all__ = [
    "Hyperparams", "MDPState", "MatchAction", "QTable", "Trace", "TraceStep", "Matcher",
    "q_update", "select_action", "run", "run_greedy_baseline", "replay",
]
