"""Split conjoined steps into standalone sentences and order them by connective semantics."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, GraftSiteMissing, RecursionLimit
from .resources import data_path
from .tree import ConstituencyTree, Token

COORDINABLE = frozenset({"S", "VP"})
SEPARATOR_LABELS = frozenset({",", "CC"})
# placeholder left in the shared fragment where the conjuncts were cut out
GRAFT = ConstituencyTree("<graft>", (), Token("<graft>"))


class ConnectiveCategory(enum.Enum):
    TemporalSuccession = "TemporalSuccession"
    Alternative = "Alternative"
    Neutral = "Neutral"


class Position(enum.Enum):
    BetweenSpans = "BetweenSpans"
    SubordinateFirst = "SubordinateFirst"


class Side(enum.Enum):
    Left = "Left"
    Right = "Right"


class ConnectiveLexicon:
    """Case-insensitive map from connective word to its category; unknown words are neutral."""

    DEFAULTS = {
        "when": ConnectiveCategory.TemporalSuccession,
        "after": ConnectiveCategory.TemporalSuccession,
        "once": ConnectiveCategory.TemporalSuccession,
        "or": ConnectiveCategory.Alternative,
        "alternatively": ConnectiveCategory.Alternative,
    }

    def __init__(self, mapping=None):
        table = self.DEFAULTS if mapping is None else mapping
        self._table = {w.casefold(): ConnectiveCategory(c) for w, c in table.items()}

    @classmethod
    def from_file(cls, path=None):
        path = Path(path) if path else data_path("connectives.tsv")
        mapping = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip() or line.startswith("#"):
                    continue
                try:
                    word, category = line.rstrip("\n").split("\t")
                    mapping[word.strip()] = ConnectiveCategory(category.strip())
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: expected word<TAB>category") from exc
        return cls(mapping)

    def category(self, connective: str) -> ConnectiveCategory:
        # multi-word separators such as "and then" take their first non-neutral word
        for word in connective.casefold().split():
            cat = self._table.get(word, ConnectiveCategory.Neutral)
            if cat is not ConnectiveCategory.Neutral:
                return cat
        return ConnectiveCategory.Neutral

    def __eq__(self, other):
        return isinstance(other, ConnectiveLexicon) and self._table == other._table


@dataclass(frozen=True)
class ConjunctionSplit:
    shared: ConstituencyTree
    left: ConstituencyTree
    right: ConstituencyTree
    connective: str
    connective_position: Position
    kind: str  # "coordination" | "subordination"
    path: tuple = ()


# -- tree surgery helpers ---------------------------------------------------

def _replace_at(tree, path, new):
    if not path:
        return new
    i = path[0]
    kids = list(tree.children)
    kids[i] = _replace_at(kids[i], path[1:], new)
    return ConstituencyTree(tree.label, tuple(kids))


def _node_at(tree, path):
    for i in path:
        tree = tree.children[i]
    return tree


def _leaves_before(tree, path):
    count = 0
    node = tree
    for i in path:
        count += sum(len(list(c.leaves())) for c in node.children[:i])
        node = node.children[i]
    return count


def _unwrap(tree):
    while tree.label == "S" and len(tree.children) == 1 and tree.children[0].label == "S":
        tree = tree.children[0]
    return tree


def _coordination_groups(node):
    """Return (conjunct indices, separator runs) if ``node`` is a coordination."""
    if node.is_leaf or node.label not in COORDINABLE:
        return None
    kids = node.children
    conjuncts, seps, run = [], [], []
    for i, kid in enumerate(kids):
        if kid.label == node.label:
            if conjuncts and not run:
                return None
            if run:
                seps.append(run)
                run = []
            conjuncts.append(i)
        elif kid.label in SEPARATOR_LABELS:
            if not conjuncts:
                return None
            run.append(i)
        else:
            return None
    if run or len(conjuncts) < 2:
        return None
    if not any(kids[i].label == "CC" for r in seps for i in r):
        return None
    return conjuncts, seps


def _connective_words(node, run):
    return " ".join(node.children[i].token.text for i in run if node.children[i].label == "CC")


def find_outermost_conjunction(tree: ConstituencyTree) -> ConjunctionSplit | None:
    """First coordination or subordination met in a top-down, left-to-right sweep."""
    queue = deque([()])
    while queue:
        path = queue.popleft()
        node = _node_at(tree, path)
        if node.is_leaf:
            continue
        groups = _coordination_groups(node)
        if groups is not None:
            return _coordination_split(tree, path, node, *groups)
        for k, kid in enumerate(node.children):
            if kid.label == "SBAR" and not kid.is_leaf:
                return _subordination_split(tree, path, node, k)
        queue.extend(path + (i,) for i in range(len(node.children)))
    return None


def _coordination_split(tree, path, node, conjuncts, seps):
    connective = _connective_words(node, seps[0])
    if not connective:
        # "A, B and C": the list's coordinator governs the first pair
        connective = _connective_words(node, seps[-1])
    left = node.children[conjuncts[0]]
    if len(conjuncts) == 2:
        right = node.children[conjuncts[1]]
    else:
        right = ConstituencyTree(node.label, node.children[conjuncts[1]:])
    return ConjunctionSplit(
        shared=_replace_at(tree, path, GRAFT),
        left=left,
        right=right,
        connective=connective,
        connective_position=Position.BetweenSpans,
        kind="coordination",
        path=path,
    )


def _subordination_split(tree, path, node, k):
    sbar = node.children[k]
    drop = {k}
    kids = node.children
    if k + 1 < len(kids) and kids[k + 1].label == "," and k == 0:
        drop.add(k + 1)
    elif k > 0 and kids[k - 1].label == "," and k == len(kids) - 1:
        drop.add(k - 1)
    remaining = tuple(c for i, c in enumerate(kids) if i not in drop)
    if not remaining:
        raise GraftSiteMissing("subordinate clause has no main clause to attach to")
    main = _unwrap(_replace_at(tree, path, ConstituencyTree(node.label, remaining)))

    body = sbar.children[1:]
    if len(body) == 1 and body[0].label == "S":
        sub = body[0]
    elif body:
        sub = ConstituencyTree("S", body)
    else:
        raise GraftSiteMissing("subordinate clause is empty")
    connective = next(sbar.leaves()).token.text

    first = _leaves_before(tree, path + (k,)) == 0
    position = Position.SubordinateFirst if first else Position.BetweenSpans
    left, right = (sub, main) if first else (main, sub)
    return ConjunctionSplit(main, left, right, connective, position, "subordination", path + (k,))


def _graft(shared, conjunct):
    if shared == GRAFT:
        return conjunct
    found = False

    def walk(node):
        nonlocal found
        if node == GRAFT:
            found = True
            return conjunct
        if node.is_leaf:
            return node
        return ConstituencyTree(node.label, tuple(walk(c) for c in node.children))

    out = walk(shared)
    if not found:
        raise GraftSiteMissing("shared fragment has no attachment point")
    return out


def _subject(tree):
    if tree.label != "S" or tree.is_leaf:
        return None
    for kid in tree.children:
        if kid.label == "NP":
            return kid
        if kid.label == "VP":
            return None
    return None


def to_standalone(split: ConjunctionSplit, which: Side) -> ConstituencyTree:
    """Rebuild one conjunct as an S-rooted sentence; the connective is dropped."""
    conjunct = split.left if which is Side.Left else split.right
    if split.kind == "subordination":
        if conjunct is split.shared:
            return split.shared
        subject = _subject(split.shared)
        if _subject(conjunct) is None and subject is not None:
            conjunct = ConstituencyTree("S", (subject,) + conjunct.children)
        return conjunct
    out = _unwrap(_graft(split.shared, conjunct))
    if out.label != "S":
        out = ConstituencyTree("S", (out,))
    return out


def order_pair(first, second, connective, position, lexicon=None):
    """Order two standalone sentences given in textual order."""
    lexicon = lexicon or ConnectiveLexicon()
    category = lexicon.category(connective)
    if category is ConnectiveCategory.Alternative:
        return [first]
    if category is ConnectiveCategory.TemporalSuccession and position is Position.BetweenSpans:
        return [second, first]
    return [first, second]


def normalize(tree: ConstituencyTree, lexicon=None, max_depth=16) -> list[ConstituencyTree]:
    """Split until no conjunction remains; returns the sentences in execution order."""
    lexicon = lexicon or ConnectiveLexicon()
    return _normalize(tree, lexicon, 0, max_depth)


def _normalize(tree, lexicon, depth, max_depth):
    split = find_outermost_conjunction(tree)
    if split is None:
        return [tree]
    if depth >= max_depth:
        raise RecursionLimit(f"more than {max_depth} nested conjunctions")
    a = to_standalone(split, Side.Left)
    b = to_standalone(split, Side.Right)
    out = []
    for sentence in order_pair(a, b, split.connective, split.connective_position, lexicon):
        out.extend(_normalize(sentence, lexicon, depth + 1, max_depth))
    return out
