"""scikit-learn style wrappers around extraction and matching.

``S2RExtractor`` is a transformer from report texts to step lists.
``QLearningReproducer`` fits a Q-table to one list of steps against an app
model; ``predict`` returns the reproducing event sequence.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .app_model import AppModel, load_model
from .embeddings import VectorStore
from .extract import ActionLexicon, Extractor
from .matcher import Hyperparams, Matcher
from .pipeline import extract_report
from .reorder import ConnectiveLexicon
from .resources import default_vectors_path
from .validation import check_reports, check_s2rs


def _store(vectors):
    if isinstance(vectors, VectorStore):
        return vectors
    return VectorStore.load(vectors or default_vectors_path())


class S2RExtractor(TransformerMixin, BaseEstimator):
    """Report text -> ordered steps. Fitting only loads lexicons and vectors."""

    def __init__(self, vectors=None, delta=0.1, input_mode="text", actions=None, connectives=None):
        self.vectors = vectors
        self.delta = delta
        self.input_mode = input_mode
        self.actions = actions
        self.connectives = connectives

    def fit(self, X=None, y=None):
        if self.input_mode not in ("text", "trees"):
            raise ValueError("input_mode must be 'text' or 'trees'")
        self.store_ = _store(self.vectors)
        self.extractor_ = Extractor(self.store_, ActionLexicon.from_file(self.actions), self.delta)
        self.lexicon_ = ConnectiveLexicon.from_file(self.connectives)
        return self

    def transform(self, X):
        check_is_fitted(self, "extractor_")
        return [self.report(x).s2rs for x in check_reports(X)]

    def report(self, text):
        check_is_fitted(self, "extractor_")
        return extract_report(text, self.extractor_, self.lexicon_, self.input_mode)


class QLearningReproducer(BaseEstimator):
    """Learn which UI events realise a list of steps and trigger the expected crash."""

    def __init__(self, app_model=None, crash_message=None, vectors=None, policy="rl", alpha=0.5,
                 gamma=0.9, epsilon=0.2, d=0.55, r_d=-1.0, r_e=-2.0, r_f=-5.0, n0=2,
                 episode_budget=500, step_budget=None, seed=0, wall_clock_timeout=None,
                 noop_input="test"):
        self.app_model = app_model
        self.crash_message = crash_message
        self.vectors = vectors
        self.policy = policy
        self.alpha = alpha
        self.gamma = gamma
        self.epsilon = epsilon
        self.d = d
        self.r_d = r_d
        self.r_e = r_e
        self.r_f = r_f
        self.n0 = n0
        self.episode_budget = episode_budget
        self.step_budget = step_budget
        self.seed = seed
        self.wall_clock_timeout = wall_clock_timeout
        self.noop_input = noop_input

    def hyperparams(self) -> Hyperparams:
        names = ("alpha", "gamma", "epsilon", "d", "r_d", "r_e", "r_f", "n0", "episode_budget",
                 "step_budget", "seed", "wall_clock_timeout", "noop_input")
        return Hyperparams(**{n: getattr(self, n) for n in names})

    def fit(self, X, y=None):
        """``X`` is the step list; ``y`` is unused."""
        if self.policy not in ("rl", "greedy"):
            raise ValueError("policy must be 'rl' or 'greedy'")
        if self.app_model is None:
            raise ValueError("app_model is required")
        model = self.app_model if isinstance(self.app_model, AppModel) else load_model(self.app_model)
        self.s2rs_ = check_s2rs(X)
        self.matcher_ = Matcher(model, self.s2rs_, _store(self.vectors), self.hyperparams(), self.crash_message)
        self.trace_ = self.matcher_.run() if self.policy == "rl" else self.matcher_.run_greedy()
        self.q_table_ = self.matcher_.q
        self.success_ = self.trace_.success
        return self

    def predict(self, X=None):
        """Events of the fitted trace; a different step list is fitted first."""
        if X is not None and (not hasattr(self, "s2rs_") or check_s2rs(X) != self.s2rs_):
            self.fit(X)
        check_is_fitted(self, "trace_")
        return self.trace_.events

    def score(self, X=None, y=None):
        self.predict(X)
        return 1.0 if self.success_ else 0.0
