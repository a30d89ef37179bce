"""Infer structured steps (action, target widget, input value, direction) from standalone sentences."""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .embeddings import STOP_ARTICLES, VectorStore, similarity
from .errors import AllZeroVectors, ConfigError, NoPredicate, ReproError
from .grammar import BE_FORMS, PARTICLES
from .resources import (data_path, load_non_actions, load_rotate_targets, load_specials,
                        load_verb_forms)
from .tree import VERB_TAGS, ConstituencyTree

log = logging.getLogger(__name__)

INPUT_TARGET_PREPOSITIONS = frozenset({"in", "on", "into", "onto", "at"})
_PARTICLE_WORDS = frozenset(p for _, p in PARTICLES)
_NUMBER_RE = re.compile(r"[+-]?\d+(?:\.\d+)?")
_VERB_GROUP_TAGS = VERB_TAGS | {"TO", "RP"}


class ActionKind(enum.Enum):
    Click = "Click"
    Input = "Input"
    Rotate = "Rotate"
    Swipe = "Swipe"
    Scroll = "Scroll"


class Direction(enum.Enum):
    Up = "Up"
    Down = "Down"
    Left = "Left"
    Right = "Right"


class Voice(enum.Enum):
    Active = "Active"
    Passive = "Passive"


class NonAction(ReproError):
    """The sentence reports app behaviour ("the app crashes"), not a user step."""


@dataclass(frozen=True)
class ClauseParts:
    predicate: str
    subject: str | None = None
    object: str | None = None
    modifier: str | None = None
    object_literal: str | None = None
    modifier_literal: str | None = None

    def __post_init__(self):
        if not self.predicate:
            raise ValueError("predicate must be non-empty")


@dataclass(frozen=True)
class S2R:
    action: ActionKind
    alt_action: ActionKind | None = None
    target_widget: str | None = None
    input_value: str | None = None
    direction: Direction | None = None
    source_sentence: str = ""

    def __post_init__(self):
        if self.alt_action is not None and self.alt_action == self.action:
            raise ValueError("alt_action must differ from action")
        if self.direction is not None and self.action not in (ActionKind.Scroll, ActionKind.Swipe):
            raise ValueError("direction is only meaningful for Scroll and Swipe")
        if self.input_value is not None and ActionKind.Input not in (self.action, self.alt_action):
            raise ValueError("input_value requires an Input action")

    @property
    def kinds(self) -> tuple:
        return (self.action,) if self.alt_action is None else (self.action, self.alt_action)

    def to_dict(self) -> dict:
        return {
            "action": self.action.value,
            "alt_action": self.alt_action.value if self.alt_action else None,
            "target_widget": self.target_widget,
            "input_value": self.input_value,
            "direction": self.direction.value if self.direction else None,
            "source_sentence": self.source_sentence,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "S2R":
        def enum_or_none(e, v):
            return None if v is None else e(v)
        return cls(
            action=ActionKind(d["action"]),
            alt_action=enum_or_none(ActionKind, d.get("alt_action")),
            target_widget=d.get("target_widget"),
            input_value=d.get("input_value"),
            direction=enum_or_none(Direction, d.get("direction")),
            source_sentence=d.get("source_sentence", ""),
        )


class ActionLexicon:
    """Synonym group per action kind."""

    def __init__(self, groups: dict):
        self.groups = {}
        for kind, words in groups.items():
            kind = ActionKind(kind) if not isinstance(kind, ActionKind) else kind
            words = tuple(dict.fromkeys(w.casefold() for w in words))
            if not words:
                raise ConfigError(f"empty synonym group for {kind.value}")
            self.groups[kind] = words

    @classmethod
    def from_file(cls, path=None) -> "ActionLexicon":
        path = Path(path) if path else data_path("actions.tsv")
        groups: dict = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip() or line.startswith("#"):
                    continue
                try:
                    kind, word = line.rstrip("\n").split("\t")
                    groups.setdefault(ActionKind(kind.strip()), []).append(word.strip())
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: expected kind<TAB>synonym") from exc
        return cls(groups)

    def members(self, word: str) -> list:
        w = word.casefold()
        return [k for k, words in self.groups.items() if w in words]


@dataclass
class ExtractionWarning:
    sentence: str
    kind: str
    message: str

    def to_dict(self):
        return {"sentence": self.sentence, "kind": self.kind, "message": self.message}


# -- decomposition ----------------------------------------------------------

def _first_literal(tree):
    for tok in tree.tokens():
        if tok.literal:
            return tok.text
    return None


def decompose(tree: ConstituencyTree) -> ClauseParts:
    """Subject, predicate (verb group), object and modifier of a standalone sentence."""
    vp = None
    subject = None
    if tree.label == "VP":
        vp = tree
    else:
        for kid in tree.children:
            if kid.label == "NP" and vp is None and subject is None:
                subject = kid
            elif kid.label == "VP" and vp is None:
                vp = kid
    if vp is None:
        raise NoPredicate(f"no verb phrase in {tree.text()!r}")

    verbs = []
    while True:
        rest_start = len(vp.children)
        for i, kid in enumerate(vp.children):
            if kid.is_leaf and kid.label in _VERB_GROUP_TAGS:
                verbs.append(kid.token.text)
            else:
                rest_start = i
                break
        rest = vp.children[rest_start:]
        # Penn-style infinitive complements: (VP (VBP try) (S (VP (TO to) (VP (VB open) ...))))
        if rest and rest[0].label in ("S", "VP") and not rest[0].is_leaf:
            inner = rest[0]
            if inner.label == "S" and len(inner.children) == 1 and inner.children[0].label == "VP":
                inner = inner.children[0]
            first = next(inner.leaves())
            if inner.label == "VP" and first.label in _VERB_GROUP_TAGS and verbs:
                vp = inner
                continue
        break
    if not verbs:
        raise NoPredicate(f"no verb in {tree.text()!r}")

    obj = next((k for k in rest if k.label == "NP"), None)
    mod = next((k for k in rest if k.label == "PP"), None)
    return ClauseParts(
        predicate=" ".join(verbs),
        subject=subject.text() if subject is not None else None,
        object=obj.text() if obj is not None else None,
        modifier=mod.text() if mod is not None else None,
        object_literal=_first_literal(obj) if obj is not None else None,
        modifier_literal=_first_literal(mod) if mod is not None else None,
    )


def detect_voice(parts: ClauseParts, verbs=None) -> Voice:
    verbs = verbs or load_verb_forms()
    words = [w.casefold() for w in parts.predicate.split()]
    for i, w in enumerate(words):
        if w in BE_FORMS and any(p in verbs.participles for p in words[i + 1:]):
            return Voice.Passive
    return Voice.Active


def head_verb(predicate: str, verbs=None) -> str:
    """Last non-auxiliary verb of the verb group, as its base form."""
    verbs = verbs or load_verb_forms()
    words = predicate.split()
    candidates = [
        w for i, w in enumerate(words)
        if w.casefold() not in BE_FORMS and w.casefold() != "to"
        and not (i > 0 and w.casefold() in _PARTICLE_WORDS)
    ]
    word = (candidates or words)[-1].casefold()
    return verbs.lemma(word) or word


# -- action classification --------------------------------------------------

def rank_actions(predicate: str, lexicon: ActionLexicon, store: VectorStore, verbs=None):
    """Score every action kind; returns [(kind, score)] best first (ties keep enum order)."""
    head = head_verb(predicate, verbs)
    members = lexicon.members(head)
    if not members and head not in store:
        raise AllZeroVectors(f"predicate {head!r} is out of vocabulary and in no synonym group")
    scores = []
    for kind in ActionKind:
        synonyms = lexicon.groups.get(kind, ())
        if kind in members:
            score = 1.0
        elif synonyms:
            score = max(similarity(head, s, store) for s in synonyms)
        else:
            score = float("-inf")
        scores.append((kind, score))
    if not members and all(s <= 0.0 for _, s in scores):
        raise AllZeroVectors(f"predicate {head!r} has no similarity to any synonym group")
    order = {k: i for i, k in enumerate(ActionKind)}
    return sorted(scores, key=lambda ks: (-ks[1], order[ks[0]]))


def classify_action(predicate, lexicon, store, delta=0.1, verbs=None):
    """(primary, alternate) action kinds; the alternate is set when the top two are within ``delta``."""
    if not 0.0 <= delta <= 2.0:
        raise ValueError("delta must lie in [0, 2]")
    ranking = rank_actions(predicate, lexicon, store, verbs)
    (k1, s1), (k2, s2) = ranking[0], ranking[1]
    return k1, (k2 if s1 - s2 < delta else None)


# -- entity rules -----------------------------------------------------------

def strip_articles(text: str | None) -> str | None:
    if text is None:
        return None
    words = text.split()
    while words and words[0].casefold() in STOP_ARTICLES:
        words = words[1:]
    return " ".join(words) or None


def extract_target(parts: ClauseParts, voice: Voice) -> str | None:
    text = parts.object if voice is Voice.Active else parts.subject
    return strip_articles(text)


def _without_preposition(modifier: str) -> str:
    return modifier.split(None, 1)[1] if len(modifier.split(None, 1)) > 1 else ""


def refine_input_value(value, literal=None, specials=None):
    """Quoted literals verbatim; otherwise keep only a number, or map a named special value."""
    if value is None:
        return None
    if literal is not None:
        return literal
    m = _NUMBER_RE.search(value)
    if m:
        return m.group(0)
    specials = load_specials() if specials is None else specials
    key = (strip_articles(value) or "").casefold()
    if key in specials:
        return specials[key]
    return value


def extract_input_value(parts: ClauseParts, specials=None):
    """Return (value, target_override) following the preposition of the modifier."""
    override = None
    prep = parts.modifier.split()[0].casefold() if parts.modifier else None
    if prep == "with":
        raw, literal = _without_preposition(parts.modifier), parts.modifier_literal
    elif prep in INPUT_TARGET_PREPOSITIONS:
        raw, literal = parts.object, parts.object_literal
        override = _without_preposition(parts.modifier) or None
    else:
        raw, literal = parts.object, parts.object_literal
    return refine_input_value(raw, literal, specials), override


def extract_direction(parts: ClauseParts) -> Direction | None:
    if not parts.object:
        return None
    for word in re.findall(r"\w+", parts.object.casefold()):
        for d in Direction:
            if word == d.value.casefold():
                return d
    return None


def _describes_device(target, words):
    return any(w in words for w in re.findall(r"\w+", (target or "").casefold()))


def apply_rotate_guard(candidate: S2R, runner_up: ActionKind, parts=None, device_words=None) -> S2R:
    """Keep Rotate only for device/screen targets (or no target); else fall back to the runner-up."""
    device_words = load_rotate_targets() if device_words is None else device_words
    if candidate.action is not ActionKind.Rotate:
        return candidate
    target = candidate.target_widget
    if target is None or _describes_device(target, device_words):
        return replace(candidate, target_widget=None)
    direction = candidate.direction
    if runner_up not in (ActionKind.Scroll, ActionKind.Swipe):
        direction = None
    elif parts is not None:
        direction = extract_direction(parts)
    alt = candidate.alt_action if candidate.alt_action not in (runner_up, ActionKind.Rotate) else None
    return replace(candidate, action=runner_up, alt_action=alt, direction=direction)


# -- whole-sentence extraction ----------------------------------------------

@dataclass
class SentenceExtraction:
    sentence: str
    parts: ClauseParts | None = None
    s2r: S2R | None = None
    warnings: list = field(default_factory=list)


class Extractor:
    """Bundles the lexicons and vectors needed to turn standalone sentences into steps."""

    def __init__(self, store: VectorStore, lexicon: ActionLexicon | None = None, delta=0.1,
                 specials=None, device_words=None, non_actions=None, verbs=None):
        self.store = store
        self.lexicon = lexicon or ActionLexicon.from_file()
        self.delta = delta
        self.specials = load_specials() if specials is None else specials
        self.device_words = load_rotate_targets() if device_words is None else device_words
        self.non_actions = load_non_actions() if non_actions is None else non_actions
        self.verbs = verbs or load_verb_forms()

    def extract_sentence(self, tree: ConstituencyTree) -> SentenceExtraction:
        text = tree.text()
        result = SentenceExtraction(text)
        try:
            parts = decompose(tree)
        except NoPredicate as exc:
            result.warnings.append(ExtractionWarning(text, "NoPredicate", str(exc)))
            return result
        result.parts = parts
        head = head_verb(parts.predicate, self.verbs)
        if head in self.non_actions:
            result.warnings.append(ExtractionWarning(
                text, "NonAction", f"{head!r} describes app behaviour, not a UI action"))
            return result

        try:
            ranking = rank_actions(parts.predicate, self.lexicon, self.store, self.verbs)
            (k1, s1), (k2, s2) = ranking[0], ranking[1]
            action, alt, runner_up = k1, (k2 if s1 - s2 < self.delta else None), k2
        except AllZeroVectors as exc:
            result.warnings.append(ExtractionWarning(text, "AllZeroVectors", f"{exc}; using Click"))
            action, alt, runner_up = ActionKind.Click, None, None

        voice = detect_voice(parts, self.verbs)
        target = extract_target(parts, voice)
        direction = None
        if action in (ActionKind.Scroll, ActionKind.Swipe):
            direction = extract_direction(parts)
        candidate = S2R(action, alt, target, None, direction, text)
        if action is ActionKind.Rotate and runner_up is not None:
            candidate = apply_rotate_guard(candidate, runner_up, parts, self.device_words)
        if candidate.alt_action is ActionKind.Rotate and not (
                candidate.target_widget is None
                or _describes_device(candidate.target_widget, self.device_words)):
            candidate = replace(candidate, alt_action=None)
        if candidate.direction is not None:
            candidate = replace(candidate, target_widget=_drop_direction_words(candidate.target_widget))
        if ActionKind.Input in candidate.kinds:
            value, override = extract_input_value(parts, self.specials)
            target = strip_articles(override) if override else candidate.target_widget
            candidate = replace(candidate, input_value=value, target_widget=target)
        result.s2r = candidate
        return result

    def extract_all(self, sentences):
        """One S2R per actionable sentence, in input order; problems become warnings."""
        s2rs, warnings = [], []
        for tree in sentences:
            res = self.extract_sentence(tree)
            warnings.extend(res.warnings)
            if res.s2r is not None:
                s2rs.append(res.s2r)
        return s2rs, warnings


def _drop_direction_words(target):
    if target is None:
        return None
    keep = [w for w in target.split() if w.casefold() not in {d.value.casefold() for d in Direction}]
    return strip_articles(" ".join(keep))


def extract_all(sentences, lexicon, store, delta=0.1):
    return Extractor(store, lexicon, delta).extract_all(sentences)
