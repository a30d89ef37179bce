"""Finite-state stand-in for an app under test.

A model is a YAML document (see ``docs/app-model.md``) declaring screens,
widgets, and transitions triggered by UI events. States are immutable values,
so independent episodes can advance their own copies freely.
"""

from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Protocol

import yaml

from .errors import AmbiguousTransition, DanglingScreenRef, IllegalEvent, SchemaError

SCHEMA_VERSION = 1
SELF = "self"


class EventKind(enum.Enum):
    Click = "Click"
    Input = "Input"
    Scroll = "Scroll"
    Swipe = "Swipe"
    Rotate = "Rotate"


class Orientation(enum.Enum):
    Portrait = "Portrait"
    Landscape = "Landscape"


SCROLL_DIRECTIONS = ("Up", "Down")
SWIPE_DIRECTIONS = ("Left", "Right")


@dataclass(frozen=True)
class Widget:
    key: str
    text: str | None = None
    resource_id: str | None = None
    content_description: str | None = None
    clickable: bool = True
    editable: bool = False
    visible_from_offset: int = 0

    def __post_init__(self):
        if not (self.text or self.resource_id or self.content_description):
            raise ValueError(f"widget {self.key!r} needs text, resource_id or content_description")

    @property
    def attributes(self) -> tuple:
        """The descriptive attributes a step's target is compared against."""
        return tuple(a for a in (self.text, self.resource_id, self.content_description) if a)


@dataclass(frozen=True)
class Screen:
    id: str
    widgets: tuple = ()
    scrollable: bool = False
    max_scroll: int = 0

    def widget(self, key):
        for w in self.widgets:
            if w.key == key:
                return w
        return None


@dataclass(frozen=True)
class UIEvent:
    kind: EventKind
    screen: str | None = None
    widget: str | None = None
    value: str | None = None
    direction: str | None = None

    @property
    def ref(self):
        return f"{self.screen}/{self.widget}" if self.widget is not None else None

    def bind(self, value: str) -> "UIEvent":
        if self.kind is not EventKind.Input:
            raise ValueError("only Input events carry a value")
        return replace(self, value=value)

    def key(self) -> str:
        k = self.kind
        if k is EventKind.Click:
            return f"click:{self.ref}"
        if k is EventKind.Input:
            base = f"input:{self.ref}"
            return base if self.value is None else f"{base}={json.dumps(self.value)}"
        if k is EventKind.Rotate:
            return "rotate"
        return f"{k.value.lower()}:{self.direction.lower()}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        if self.widget is not None:
            out["screen"] = self.screen
            out["widget"] = self.widget
        if self.kind is EventKind.Input:
            out["value"] = self.value
        if self.direction is not None:
            out["direction"] = self.direction
        return out

    @classmethod
    def from_dict(cls, d) -> "UIEvent":
        return cls(EventKind(d["kind"]), d.get("screen"), d.get("widget"), d.get("value"), d.get("direction"))


# -- value patterns ---------------------------------------------------------

_NUMERIC_OPS = {"gt", "ge", "lt", "le", "eq"}


def _as_number(text):
    try:
        x = float(text)
    except (TypeError, ValueError):
        return None
    return x if math.isfinite(x) else None


@dataclass(frozen=True)
class ValuePattern:
    """Exact string, numeric interval, or wildcard constraint on an Input value."""

    kind: str  # "exact" | "numeric" | "any"
    exact: str | None = None
    bounds: tuple = ()  # ((op, number), ...)

    SPECIFICITY = {"exact": 2, "numeric": 1, "any": 0}

    @property
    def specificity(self):
        return self.SPECIFICITY[self.kind]

    def matches(self, value) -> bool:
        if self.kind == "any":
            return True
        if self.kind == "exact":
            return value == self.exact
        x = _as_number(value)
        if x is None:
            return False
        checks = {"gt": x.__gt__, "ge": x.__ge__, "lt": x.__lt__, "le": x.__le__, "eq": x.__eq__}
        return all(checks[op](v) for op, v in self.bounds)

    def interval(self):
        lo, lo_open, hi, hi_open = -math.inf, True, math.inf, True
        for op, v in self.bounds:
            if op in ("gt", "ge", "eq") and (v > lo or (v == lo and op == "gt")):
                lo, lo_open = v, op == "gt"
            if op in ("lt", "le", "eq") and (v < hi or (v == hi and op == "lt")):
                hi, hi_open = v, op == "lt"
        return lo, lo_open, hi, hi_open

    def overlaps(self, other: "ValuePattern") -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == "any":
            return True
        if self.kind == "exact":
            return self.exact == other.exact
        a, b = self.interval(), other.interval()
        lo = max((a[0], a[1]), (b[0], b[1]), key=lambda t: (t[0], t[1]))
        hi = min((a[2], a[3]), (b[2], b[3]), key=lambda t: (t[0], not t[1]))
        if lo[0] < hi[0]:
            return True
        return lo[0] == hi[0] and not lo[1] and not hi[1]

    def to_yaml(self):
        if self.kind == "any":
            return "*"
        if self.kind == "exact":
            return self.exact
        return dict(self.bounds)


@dataclass(frozen=True)
class Transition:
    source: str
    kind: EventKind
    widget: str | None = None
    direction: str | None = None
    pattern: ValuePattern = ValuePattern("any")
    target: str = SELF  # screen id or SELF; ignored when crash is set
    crash: str | None = None

    def matches(self, event: UIEvent) -> bool:
        if event.kind is not self.kind:
            return False
        if self.kind in (EventKind.Click, EventKind.Input) and event.widget != self.widget:
            return False
        if self.kind in (EventKind.Scroll, EventKind.Swipe) and event.direction != self.direction:
            return False
        if self.kind is EventKind.Input:
            return self.pattern.matches(event.value)
        return True


# -- device state -----------------------------------------------------------

@dataclass(frozen=True)
class DeviceState:
    screen: str
    orientation: Orientation = Orientation.Portrait
    field_values: tuple = ()  # sorted ((ref, value), ...)
    scroll_offsets: tuple = ()  # sorted ((screen, offset), ...), zero offsets omitted

    def field(self, ref):
        return dict(self.field_values).get(ref)

    def offset(self, screen):
        return dict(self.scroll_offsets).get(screen, 0)

    def with_field(self, ref, value):
        d = dict(self.field_values)
        d[ref] = value
        return replace(self, field_values=tuple(sorted(d.items())))

    def with_offset(self, screen, offset):
        d = dict(self.scroll_offsets)
        if offset:
            d[screen] = offset
        else:
            d.pop(screen, None)
        return replace(self, scroll_offsets=tuple(sorted(d.items())))


def vh_equal(s1: DeviceState, s2: DeviceState) -> bool:
    return (s1.screen == s2.screen and s1.orientation == s2.orientation
            and s1.field_values == s2.field_values and s1.scroll_offsets == s2.scroll_offsets)


def state_key(state: DeviceState) -> str:
    fields = ",".join(f"{json.dumps(r)}={json.dumps(v)}" for r, v in state.field_values)
    scroll = ",".join(f"{json.dumps(s)}={o}" for s, o in state.scroll_offsets)
    return f"{json.dumps(state.screen)}|{state.orientation.value}|{{{fields}}}|{{{scroll}}}"


class OutcomeKind(enum.Enum):
    NewState = "NewState"
    Crashed = "Crashed"
    NoChange = "NoChange"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    state: DeviceState
    message: str | None = None

    @property
    def crashed(self):
        return self.kind is OutcomeKind.Crashed

    def to_dict(self):
        out = {"kind": self.kind.value}
        if self.kind is OutcomeKind.Crashed:
            out["message"] = self.message
        else:
            out["screen"] = self.state.screen
        return out


class DeviceBackend(Protocol):
    """What the matcher needs from a device; the simulator below is the only implementation."""

    def initial_state(self) -> DeviceState: ...
    def available_events(self, state: DeviceState) -> list: ...
    def execute(self, state: DeviceState, event: UIEvent) -> Outcome: ...


# -- the model --------------------------------------------------------------

@dataclass(frozen=True)
class AppModel:
    name: str
    initial_screen: str
    screens: dict
    transitions: tuple
    crash_messages: tuple = ()
    source: str | None = field(default=None, compare=False)

    def initial_state(self) -> DeviceState:
        return DeviceState(self.initial_screen)

    def screen(self, sid) -> Screen:
        return self.screens[sid]

    def visible_widgets(self, state):
        screen = self.screens[state.screen]
        offset = state.offset(screen.id)
        return [w for w in screen.widgets if w.visible_from_offset <= offset]

    def available_events(self, state: DeviceState) -> list:
        """Clicks and unbound Inputs in widget order, then Scroll, Swipe, Rotate."""
        if state.screen not in self.screens:
            raise IllegalEvent(f"unknown screen {state.screen!r}")
        screen = self.screens[state.screen]
        events = []
        for w in self.visible_widgets(state):
            if w.clickable:
                events.append(UIEvent(EventKind.Click, screen.id, w.key))
            if w.editable:
                events.append(UIEvent(EventKind.Input, screen.id, w.key))
        if screen.scrollable:
            events.extend(UIEvent(EventKind.Scroll, direction=d) for d in SCROLL_DIRECTIONS)
        events.extend(UIEvent(EventKind.Swipe, direction=d) for d in SWIPE_DIRECTIONS)
        events.append(UIEvent(EventKind.Rotate))
        return events

    def resolve(self, screen_id, event):
        """The most specific transition matching ``event`` on ``screen_id``, if any."""
        best = None
        for t in self.transitions:
            if t.source == screen_id and t.matches(event):
                if best is None or t.pattern.specificity > best.pattern.specificity:
                    best = t
        return best

    def check_event(self, state, event):
        if event.kind is EventKind.Input and event.value is None:
            raise IllegalEvent(f"{event.key()} has no value bound")
        unbound = replace(event, value=None)
        if unbound not in self.available_events(state):
            raise IllegalEvent(f"{event.key()} is not available on screen {state.screen!r}")

    def execute(self, state: DeviceState, event: UIEvent) -> Outcome:
        self.check_event(state, event)
        after = state
        screen = self.screens[state.screen]
        if event.kind is EventKind.Input:
            after = after.with_field(event.ref, event.value)
        elif event.kind is EventKind.Rotate:
            flip = Orientation.Landscape if state.orientation is Orientation.Portrait else Orientation.Portrait
            after = replace(after, orientation=flip)
        elif event.kind is EventKind.Scroll:
            step = 1 if event.direction == "Down" else -1
            offset = min(max(state.offset(screen.id) + step, 0), screen.max_scroll)
            after = after.with_offset(screen.id, offset)

        t = self.resolve(state.screen, event)
        if t is not None:
            if t.crash is not None:
                return Outcome(OutcomeKind.Crashed, after, t.crash)
            if t.target != SELF:
                after = replace(after, screen=t.target)
        if vh_equal(after, state):
            return Outcome(OutcomeKind.NoChange, state)
        return Outcome(OutcomeKind.NewState, after)

    def to_dict(self) -> dict:
        def widget(w):
            d = {"key": w.key}
            for name in ("text", "resource_id", "content_description"):
                if getattr(w, name) is not None:
                    d[name] = getattr(w, name)
            d["clickable"] = w.clickable
            d["editable"] = w.editable
            if w.visible_from_offset:
                d["visible_from_offset"] = w.visible_from_offset
            return d

        def transition(t):
            if t.kind is EventKind.Click:
                on = {"click": t.widget}
            elif t.kind is EventKind.Input:
                on = {"input": t.widget, "value": t.pattern.to_yaml()}
            elif t.kind is EventKind.Rotate:
                on = "rotate"
            else:
                on = {t.kind.value.lower(): t.direction.lower()}
            to = {"crash": t.crash} if t.crash is not None else t.target
            return {"from": t.source, "on": on, "to": to}

        return {
            "schema_version": SCHEMA_VERSION,
            "app": {"name": self.name, "initial_screen": self.initial_screen,
                    "crash_messages": list(self.crash_messages)},
            "screens": [{"id": s.id, "scrollable": s.scrollable, "max_scroll": s.max_scroll,
                         "widgets": [widget(w) for w in s.widgets]} for s in self.screens.values()],
            "transitions": [transition(t) for t in self.transitions],
        }


# -- loading ----------------------------------------------------------------

class _Loader(yaml.SafeLoader):
    """SafeLoader where only true/false are booleans, so ``on:`` stays a string key."""


_Loader.yaml_implicit_resolvers = {
    ch: [(tag, rx) for tag, rx in resolvers if tag != "tag:yaml.org,2002:bool"]
    for ch, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}
_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:bool", re.compile(r"^(?:true|True|TRUE|false|False|FALSE)$"), list("tTfF"))


def load_yaml(text):
    return yaml.load(text, Loader=_Loader)


def _require(mapping, key, path, kind=None):
    if not isinstance(mapping, dict) or key not in mapping:
        raise SchemaError(f"missing required field {key!r}", path)
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"field {key!r} must be {kind.__name__}", f"{path}.{key}")
    return value


def _opt_str(d, key, path):
    v = d.get(key)
    if v is not None and not isinstance(v, str):
        raise SchemaError(f"{key} must be a string", f"{path}.{key}")
    return v


def _parse_widget(d, path):
    key = _require(d, "key", path, str)
    for flag in ("clickable", "editable"):
        if flag in d and not isinstance(d[flag], bool):
            raise SchemaError(f"{flag} must be true or false", f"{path}.{flag}")
    offset = d.get("visible_from_offset", 0)
    if not isinstance(offset, int) or offset < 0:
        raise SchemaError("visible_from_offset must be a non-negative integer", f"{path}.visible_from_offset")
    try:
        return Widget(key, _opt_str(d, "text", path), _opt_str(d, "resource_id", path),
                      _opt_str(d, "content_description", path), d.get("clickable", True),
                      d.get("editable", False), offset)
    except ValueError as exc:
        raise SchemaError(str(exc), path) from None


def _parse_pattern(value, path):
    if value == "*" or value is None:
        return ValuePattern("any")
    if isinstance(value, (str, int, float)) and not isinstance(value, bool):
        return ValuePattern("exact", exact=str(value))
    if isinstance(value, dict) and value and set(value) <= _NUMERIC_OPS:
        bounds = []
        for op in sorted(value):
            if isinstance(value[op], bool) or not isinstance(value[op], (int, float)):
                raise SchemaError(f"numeric bound {op!r} must be a number", f"{path}.{op}")
            bounds.append((op, float(value[op])))
        return ValuePattern("numeric", bounds=tuple(bounds))
    raise SchemaError("value must be a string, '*', or a map of gt/ge/lt/le/eq bounds", path)


def _parse_transition(d, path):
    source = _require(d, "from", path, str)
    on = _require(d, "on", path)
    to = _require(d, "to", path)
    kw = {}
    if on == "rotate":
        kind = EventKind.Rotate
    elif isinstance(on, dict) and "click" in on:
        kind, kw["widget"] = EventKind.Click, str(on["click"])
    elif isinstance(on, dict) and "input" in on:
        kind, kw["widget"] = EventKind.Input, str(on["input"])
        kw["pattern"] = _parse_pattern(on.get("value", "*"), f"{path}.on.value")
    elif isinstance(on, dict) and len(on) == 1 and next(iter(on)) in ("scroll", "swipe"):
        (name, direction), = on.items()
        kind = EventKind(name.capitalize())
        allowed = SCROLL_DIRECTIONS if kind is EventKind.Scroll else SWIPE_DIRECTIONS
        direction = str(direction).capitalize()
        if direction not in allowed:
            raise SchemaError(f"{name} direction must be one of {allowed}", f"{path}.on")
        kw["direction"] = direction
    else:
        raise SchemaError("on must be rotate or a map with click/input/scroll/swipe", f"{path}.on")
    if isinstance(to, dict):
        kw["crash"] = str(_require(to, "crash", f"{path}.to"))
    elif isinstance(to, str):
        kw["target"] = to
    else:
        raise SchemaError("to must be a screen id, 'self', or {crash: message}", f"{path}.to")
    return Transition(source, kind, **kw)


def _validate_transitions(screens, transitions, crash_messages, paths):
    for t, path in zip(transitions, paths):
        if t.source not in screens:
            raise DanglingScreenRef(f"unknown source screen {t.source!r}", f"{path}.from")
        if t.crash is None and t.target != SELF and t.target not in screens:
            raise DanglingScreenRef(f"unknown target screen {t.target!r}", f"{path}.to")
        if t.crash is not None and t.crash not in crash_messages:
            raise SchemaError(f"crash message {t.crash!r} is not registered in app.crash_messages", f"{path}.to")
        if t.widget is not None:
            w = screens[t.source].widget(t.widget)
            if w is None:
                raise SchemaError(f"screen {t.source!r} has no widget {t.widget!r}", f"{path}.on")
            if t.kind is EventKind.Click and not w.clickable:
                raise SchemaError(f"widget {t.widget!r} is not clickable", f"{path}.on")
            if t.kind is EventKind.Input and not w.editable:
                raise SchemaError(f"widget {t.widget!r} is not editable", f"{path}.on")
            if t.kind is EventKind.Click and w.editable and t.crash is not None:
                raise SchemaError(f"editable widget {t.widget!r} cannot be a click crash trigger", f"{path}.on")
        if t.kind is EventKind.Scroll and not screens[t.source].scrollable:
            raise SchemaError(f"screen {t.source!r} is not scrollable", f"{path}.on")
    for i, a in enumerate(transitions):
        for j in range(i + 1, len(transitions)):
            b = transitions[j]
            same_event = (a.source, a.kind, a.widget, a.direction) == (b.source, b.kind, b.widget, b.direction)
            if same_event and a.pattern.overlaps(b.pattern):
                raise AmbiguousTransition(
                    f"transitions {i} and {j} match the same event with equal specificity", paths[j])


def model_from_dict(doc, source=None) -> AppModel:
    if not isinstance(doc, dict):
        raise SchemaError("model document must be a mapping", "$")
    version = _require(doc, "schema_version", "$")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}", "$.schema_version")
    app = _require(doc, "app", "$", dict)
    name = _require(app, "name", "$.app", str)
    initial = _require(app, "initial_screen", "$.app", str)
    crash_messages = app.get("crash_messages", [])
    if not isinstance(crash_messages, list) or not all(isinstance(m, str) for m in crash_messages):
        raise SchemaError("crash_messages must be a list of strings", "$.app.crash_messages")

    screens = {}
    for i, sd in enumerate(_require(doc, "screens", "$", list)):
        path = f"$.screens[{i}]"
        sid = _require(sd, "id", path, str)
        if sid in screens or sid == SELF:
            raise SchemaError(f"duplicate or reserved screen id {sid!r}", f"{path}.id")
        widgets = []
        for j, wd in enumerate(sd.get("widgets", []) or []):
            w = _parse_widget(wd, f"{path}.widgets[{j}]")
            if any(x.key == w.key for x in widgets):
                raise SchemaError(f"duplicate widget key {w.key!r}", f"{path}.widgets[{j}].key")
            widgets.append(w)
        scrollable = sd.get("scrollable", False)
        max_scroll = sd.get("max_scroll", 1 if scrollable else 0)
        if not isinstance(max_scroll, int) or max_scroll < 0:
            raise SchemaError("max_scroll must be a non-negative integer", f"{path}.max_scroll")
        screens[sid] = Screen(sid, tuple(widgets), bool(scrollable), max_scroll)
    if initial not in screens:
        raise DanglingScreenRef(f"initial screen {initial!r} is not declared", "$.app.initial_screen")

    raw = doc.get("transitions", []) or []
    paths = [f"$.transitions[{i}]" for i in range(len(raw))]
    transitions = tuple(_parse_transition(d, p) for d, p in zip(raw, paths))
    _validate_transitions(screens, transitions, set(crash_messages), paths)
    return AppModel(name, initial, screens, transitions, tuple(crash_messages), source)


def load_model(source) -> AppModel:
    """Load and validate a model from a path, a YAML string, or an already-parsed mapping."""
    if isinstance(source, dict):
        return model_from_dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text(encoding="utf-8")
        origin = str(source)
    else:
        text, origin = source, None
    try:
        doc = load_yaml(text)
    except yaml.YAMLError as exc:
        raise SchemaError(f"not valid YAML: {exc}", "$") from None
    return model_from_dict(doc, origin)


def available_events(model: AppModel, state: DeviceState) -> list:
    return model.available_events(state)


def execute(model: AppModel, state: DeviceState, event: UIEvent) -> Outcome:
    return model.execute(state, event)
