"""Constituency trees, tokenization and the bracketed (Penn-style) tree format."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import BracketedTreeError, EmptyNode, UnbalancedParens, UnknownLabel


@dataclass(frozen=True)
class TagSet:
    clause_tags: frozenset
    phrase_tags: frozenset
    connective_tag: str
    pos_tags: frozenset

    @property
    def labels(self) -> frozenset:
        return self.clause_tags | self.phrase_tags | {self.connective_tag} | self.pos_tags

    def __contains__(self, label) -> bool:
        return label in self.labels


TAGSET = TagSet(
    clause_tags=frozenset({"S", "SBAR"}),
    phrase_tags=frozenset({"NP", "VP", "PP", "ADVP", "ADJP", "PRT"}),
    connective_tag="CC",
    pos_tags=frozenset({
        "PRP", "PRP$", "DT", "NN", "NNS", "NNP", "NNPS", "JJ", "CD", "RB",
        "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD", "TO", "IN", "RP",
        "WRB", "POS", ",",
    }),
)

VERB_TAGS = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "MD"})


@dataclass(frozen=True)
class Token:
    text: str
    lower: str = ""
    literal: bool = False  # content of a quoted span

    def __post_init__(self):
        if not self.text and not self.literal:
            raise ValueError("token text must be non-empty")
        folded = self.text.casefold()
        if not self.lower:
            object.__setattr__(self, "lower", folded)
        elif self.lower != folded:
            raise ValueError(f"lower form {self.lower!r} does not match {self.text!r}")


@dataclass(frozen=True)
class ConstituencyTree:
    label: str
    children: tuple = ()
    token: Token | None = None

    def __post_init__(self):
        if (self.token is None) == (not self.children):
            raise ValueError(f"node {self.label!r} needs exactly one of token or children")
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    @classmethod
    def leaf(cls, label, text, literal=False):
        return cls(label, (), Token(text, literal=literal))

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    def leaves(self) -> Iterator["ConstituencyTree"]:
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def tokens(self) -> list[Token]:
        return [leaf.token for leaf in self.leaves()]

    def words(self) -> list[str]:
        return [tok.text for tok in self.tokens()]

    def text(self) -> str:
        """Surface string; commas attach to the preceding word."""
        out = ""
        for tok in self.tokens():
            if tok.text == "," and not tok.literal:
                out += ","
            else:
                out += (" " if out else "") + tok.text
        return out

    def subtrees(self) -> Iterator["ConstituencyTree"]:
        yield self
        for child in self.children:
            yield from child.subtrees()

    def __str__(self):
        return serialize(self)


# -- tokenization -----------------------------------------------------------

_QUOTE_RE = re.compile(r'"([^"]*)"|“([^”]*)”')


def tokenize(sentence: str) -> list[Token]:
    """Split on whitespace and punctuation.

    Commas become their own tokens, quoted spans become a single literal token
    (quotes stripped) and other edge punctuation is dropped.
    """
    tokens: list[Token] = []
    pos = 0
    for m in _QUOTE_RE.finditer(sentence):
        tokens.extend(_plain_tokens(sentence[pos:m.start()]))
        content = m.group(1) if m.group(1) is not None else m.group(2)
        tokens.append(Token(content, literal=True))
        pos = m.end()
    tokens.extend(_plain_tokens(sentence[pos:]))
    return tokens


def _is_word_char(raw, i):
    c = raw[i]
    if c.isalnum() or c == "_":
        return True
    # sign of a number
    return c in "+-" and i + 1 < len(raw) and raw[i + 1].isdigit()


def _plain_tokens(chunk: str) -> list[Token]:
    out = []
    for raw in chunk.replace('"', ' ').split():
        i, j = 0, len(raw)
        while i < j and not _is_word_char(raw, i):
            i += 1
        while j > i and not (raw[j - 1].isalnum() or raw[j - 1] == "_"):
            j -= 1
        out.extend(Token(",") for _ in range(raw[:i].count(",")))
        if i < j:
            out.append(Token(raw[i:j]))
        out.extend(Token(",") for _ in range(raw[j:].count(",")))
    return out


# -- bracketed format -------------------------------------------------------

_BRACKET_TOKEN = re.compile(r'\s*(?:(\()|(\))|("[^"]*")|([^\s()"]+))')


def serialize(tree: ConstituencyTree) -> str:
    """Canonical single-space bracketed form."""
    if tree.is_leaf:
        tok = tree.token
        text = f'"{tok.text}"' if tok.literal else tok.text
        return f"({tree.label} {text})"
    return f"({tree.label} " + " ".join(serialize(c) for c in tree.children) + ")"


def parse_bracketed(text: str, tagset: TagSet = TAGSET) -> ConstituencyTree:
    """Read one parenthesized tree, e.g. ``(S (NP (PRP I)) (VP (VBP click)))``.

    A single outer ``ROOT`` wrapper, as emitted by common parsers, is removed.
    """
    lexemes = _lex(text)
    if not lexemes:
        raise EmptyNode("empty input", 0)
    tree, pos = _parse_node(lexemes, 0, text, tagset)
    if pos != len(lexemes):
        kind, value, offset = lexemes[pos]
        if kind == ")":
            raise UnbalancedParens("unexpected ')'", offset)
        raise BracketedTreeError("text after the end of the tree", offset)
    return tree


def parse_bracketed_many(text: str, tagset: TagSet = TAGSET) -> list[ConstituencyTree]:
    """Records are separated by blank lines."""
    records = [r for r in re.split(r"\n\s*\n", text) if r.strip()]
    return [parse_bracketed(r, tagset) for r in records]


def _lex(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _BRACKET_TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                break
            start = pos + len(rest) - len(rest.lstrip())
            raise BracketedTreeError("unterminated quoted token", start)
        if m.end() == pos:
            break
        if m.group(1):
            out.append(("(", None, m.start(1)))
        elif m.group(2):
            out.append((")", None, m.start(2)))
        elif m.group(3):
            out.append(("lit", m.group(3)[1:-1], m.start(3)))
        else:
            out.append(("atom", m.group(4), m.start(4)))
        pos = m.end()
    return out


def _parse_node(lexemes, pos, text, tagset):
    kind, _, offset = lexemes[pos]
    if kind != "(":
        raise BracketedTreeError("expected '('", offset)
    pos += 1
    if pos >= len(lexemes):
        raise UnbalancedParens("input ended inside a node", len(text))
    kind, label, label_offset = lexemes[pos]
    if kind == ")":
        raise EmptyNode("node has no label", offset)
    if kind != "atom":
        raise BracketedTreeError("expected a label", label_offset)
    pos += 1

    if label == "ROOT" and offset == lexemes[0][2]:
        if pos < len(lexemes) and lexemes[pos][0] == "(":
            inner, pos = _parse_node(lexemes, pos, text, tagset)
            if pos >= len(lexemes):
                raise UnbalancedParens("missing ')'", len(text))
            if lexemes[pos][0] != ")":
                raise BracketedTreeError("ROOT must wrap a single tree", lexemes[pos][2])
            return inner, pos + 1

    if label not in tagset:
        raise UnknownLabel(f"unknown label {label!r}", label_offset)

    children = []
    token = None
    while True:
        if pos >= len(lexemes):
            raise UnbalancedParens("missing ')'", len(text))
        kind, value, tok_offset = lexemes[pos]
        if kind == ")":
            pos += 1
            break
        if kind == "(":
            if token is not None:
                raise BracketedTreeError("node mixes a word and child nodes", tok_offset)
            child, pos = _parse_node(lexemes, pos, text, tagset)
            children.append(child)
            continue
        if token is not None or children:
            raise BracketedTreeError("a preterminal holds exactly one word", tok_offset)
        token = Token(value, literal=(kind == "lit"))
        pos += 1
    if token is None and not children:
        raise EmptyNode(f"node {label!r} is empty", offset)
    return ConstituencyTree(label, tuple(children), token), pos
