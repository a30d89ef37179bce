"""Hypothesis strategies: controlled-grammar sentences, random trees, random app models."""

from hypothesis import strategies as st

from reproforge.tree import TAGSET, ConstituencyTree, Token

VERBS = ["click", "tap", "open", "press", "select", "type", "enter", "rotate", "scroll", "swipe", "choose"]
NOUNS = ["Save", "OK", "button", "settings", "page", "photo", "menu", "Help", "list", "CANCEL", "field"]
DETS = ["", "the ", "a "]
PREPS = ["in", "on", "with", "into"]
NEUTRAL = ["and", "then", ", then", ", and"]
TEMPORAL = ["when", "after", "once"]
CONNECTIVE_WORDS = {"and", "then", "or", "when", "after", "once", "before", ","}


@st.composite
def noun_phrase(draw):
    head = " ".join(draw(st.lists(st.sampled_from(NOUNS), min_size=1, max_size=2)))
    return draw(st.sampled_from(DETS)) + head


@st.composite
def clause(draw, subject=None):
    subject = draw(st.sampled_from(["I ", ""])) if subject is None else subject
    parts = [subject + draw(st.sampled_from(VERBS))]
    if draw(st.booleans()):
        parts.append(draw(noun_phrase()))
    if draw(st.booleans()):
        parts.append(draw(st.sampled_from(PREPS)) + " " + draw(noun_phrase()))
    return " ".join(parts)


@st.composite
def sentence(draw, alternatives=True, temporal=True):
    """Clauses joined by neutral, temporal and (optionally) alternative connectives."""
    joins = list(NEUTRAL) + (["or"] if alternatives else [])
    out = draw(clause())
    for _ in range(draw(st.integers(0, 3))):
        kind = draw(st.sampled_from(["coord", "sub"] if temporal else ["coord"]))
        if kind == "coord":
            sep = draw(st.sampled_from(joins))
            out += ("" if sep.startswith(",") else " ") + sep + " " + draw(clause())
        else:
            out += " " + draw(st.sampled_from(TEMPORAL)) + " " + draw(clause(subject="I "))
    return out


LABELS = sorted(TAGSET.labels)
WORD = st.text(alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJ0123456789.-_'", min_size=1, max_size=6)


def _leaf(label, text, literal):
    return ConstituencyTree(label, (), Token(text, literal=literal))


def trees(max_leaves=12):
    leaf = st.builds(lambda label, tw: _leaf(label, tw[0], tw[1]), st.sampled_from(LABELS),
                     st.one_of(WORD.map(lambda w: (w, False)),
                               st.text(alphabet="abc ,.()", max_size=5).map(lambda w: (w, True))))
    return st.recursive(
        leaf,
        lambda kids: st.builds(lambda label, cs: ConstituencyTree(label, tuple(cs)),
                               st.sampled_from(LABELS), st.lists(kids, min_size=1, max_size=3)),
        max_leaves=max_leaves,
    )


@st.composite
def app_models(draw):
    """Small random models as YAML-shaped dicts; events are unique per screen."""
    n = draw(st.integers(1, 4))
    ids = [f"s{i}" for i in range(n)]
    screens, transitions = [], []
    for sid in ids:
        widgets = []
        for k in range(draw(st.integers(0, 3))):
            editable = draw(st.booleans())
            widgets.append({"key": f"w{k}", "text": draw(st.sampled_from(NOUNS)),
                            "clickable": draw(st.booleans()) or not editable, "editable": editable})
        scrollable = draw(st.booleans())
        screens.append({"id": sid, "widgets": widgets, "scrollable": scrollable,
                        "max_scroll": draw(st.integers(0, 2)) if scrollable else 0})
        targets = st.one_of(st.sampled_from(ids + ["self"]), st.just({"crash": "boom"}))
        for w in widgets:
            if w["clickable"] and draw(st.booleans()):
                to = draw(targets)
                if isinstance(to, dict) and w["editable"]:
                    to = "self"
                transitions.append({"from": sid, "on": {"click": w["key"]}, "to": to})
            if w["editable"] and draw(st.booleans()):
                transitions.append({"from": sid, "on": {"input": w["key"], "value": {"gt": 5}},
                                    "to": draw(targets)})
                transitions.append({"from": sid, "on": {"input": w["key"], "value": "*"},
                                    "to": draw(targets)})
        if draw(st.booleans()):
            transitions.append({"from": sid, "on": "rotate", "to": draw(targets)})
        if draw(st.booleans()):
            transitions.append({"from": sid, "on": {"swipe": "left"}, "to": draw(targets)})
    return {"schema_version": 1,
            "app": {"name": "rand", "initial_screen": "s0", "crash_messages": ["boom"]},
            "screens": screens, "transitions": transitions}
