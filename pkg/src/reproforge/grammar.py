"""Deterministic recursive-descent parser for the controlled English subset.

See ``docs/grammar.md`` for the grammar. Every tree produced here uses labels
from :data:`reproforge.tree.TAGSET` and its leaf yield equals ``tokenize(sentence)``.
"""

from __future__ import annotations

import re

from .errors import OutOfGrammar
from .resources import load_verb_forms
from .tree import ConstituencyTree, Token, tokenize

PRONOUNS = frozenset({"i", "we", "you", "he", "she", "they", "it"})
POSSESSIVES = frozenset({"my", "your", "its", "his", "her", "our", "their"})
DETERMINERS = frozenset({"the", "a", "an", "this", "that", "these", "those",
                         "some", "any", "each", "every"}) | POSSESSIVES
PREPOSITIONS = frozenset({"in", "on", "into", "onto", "at", "with", "from", "to", "for"})
SUBORDINATORS = frozenset({"when", "after", "before", "once"})
COORDINATORS = frozenset({"and", "then", "or"})
BE_FORMS = frozenset({"is", "was", "are", "were", "am", "be", "been", "being",
                      "get", "gets", "got", "gotten"})
# verb + particle pairs read as one verb group
PARTICLES = frozenset({
    ("fill", "in"), ("type", "in"), ("key", "in"), ("log", "in"), ("log", "out"),
    ("sign", "in"), ("sign", "out"), ("turn", "on"), ("turn", "off"),
    ("switch", "on"), ("switch", "off"), ("go", "to"), ("navigate", "to"),
    ("scroll", "to"), ("pick", "up"),
})
_NUMBER = re.compile(r"[+-]?\d+(?:\.\d+)?$")


def _leaf(label, tok: Token) -> ConstituencyTree:
    return ConstituencyTree(label, (), tok)


class _Parser:
    def __init__(self, sentence, verbs):
        self.sentence = sentence
        self.toks = tokenize(sentence)
        self.pos = 0
        self.verbs = verbs

    # -- token helpers ------------------------------------------------------
    def peek(self, k=0):
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def word(self, k=0):
        tok = self.peek(k)
        if tok is None or tok.literal:
            return None
        return tok.lower

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, reason):
        raise OutOfGrammar(self.sentence, reason)

    def at_boundary(self, k=0):
        tok = self.peek(k)
        if tok is None:
            return True
        if tok.literal:
            return False
        w = tok.lower
        return w == "," or w in PREPOSITIONS or w in SUBORDINATORS or w in COORDINATORS

    def is_finite(self, w):
        return w is not None and (w in self.verbs.third_person or w in self.verbs.past)

    # -- grammar ------------------------------------------------------------
    def parse(self) -> ConstituencyTree:
        if not self.toks:
            self.fail("empty sentence")
        if self.word() in SUBORDINATORS:
            tree = self.fronted_subordination()
        else:
            tree = self.coordination()
        if self.peek() is not None:
            self.fail(f"unexpected word {self.peek().text!r}")
        return tree

    def fronted_subordination(self):
        sbar = self.sbar()
        if self.word() != ",":
            self.fail("a sentence-initial subordinate clause must end with a comma")
        comma = _leaf(",", self.take())
        body = self.coordination()
        if body.label == "S" and all(c.label in ("NP", "VP") for c in body.children):
            return ConstituencyTree("S", (sbar, comma) + body.children)
        return ConstituencyTree("S", (sbar, comma, body))

    def coordination(self):
        units = [self.clause()]
        seps = []
        while self.word() in COORDINATORS or self.word() == ",":
            sep = []
            while self.word() in COORDINATORS or self.word() == ",":
                tok = self.take()
                sep.append(_leaf("," if tok.lower == "," else "CC", tok))
            if self.peek() is None:
                self.fail("sentence ends after a connective")
            seps.append(tuple(sep))
            units.append(self.clause())
        if seps and not any(n.label == "CC" for s in seps for n in s):
            self.fail("clauses separated only by commas")

        # subjectless clauses coordinate with the preceding clause's VP
        groups = []  # [subject, [vp, sep, vp, ...], separator-before-group]
        for i, (subject, vp) in enumerate(units):
            sep = seps[i - 1] if i else ()
            if i == 0 or subject is not None:
                groups.append([subject, [vp], sep])
            else:
                groups[-1][1].extend(sep)
                groups[-1][1].append(vp)
        clauses = []
        for subject, parts, _ in groups:
            vp = parts[0] if len(parts) == 1 else ConstituencyTree("VP", tuple(parts))
            kids = (subject, vp) if subject is not None else (vp,)
            clauses.append(ConstituencyTree("S", kids))
        if len(clauses) == 1:
            return clauses[0]
        kids = [clauses[0]]
        for (_, _, sep), clause in zip(groups[1:], clauses[1:]):
            kids.extend(sep)
            kids.append(clause)
        return ConstituencyTree("S", tuple(kids))

    def clause(self):
        subject = self.subject()
        return subject, self.verb_phrase(subject is not None)

    def subject(self):
        w = self.word()
        if w in PRONOUNS:
            return ConstituencyTree("NP", (_leaf("PRP", self.take()),))
        if w in DETERMINERS:
            j = 1
            while not self.at_boundary(j):
                wj = self.word(j)
                if wj in BE_FORMS or self.is_finite(wj):
                    break
                j += 1
            if j > 1 and (self.word(j) in BE_FORMS or self.is_finite(self.word(j))):
                return self.noun_phrase(stop=self.pos + j)
            self.fail(f"noun phrase {w!r}... is not followed by a verb")
        return None

    def verb_phrase(self, has_subject):
        kids = []
        w = self.word()
        if w is None:
            self.fail("missing verb")
        nxt = self.word(1)
        if has_subject and w in BE_FORMS and nxt in self.verbs.participles:
            kids.append(_leaf("VBD" if w in ("was", "were", "got") else "VBZ", self.take()))
            kids.append(_leaf("VBN", self.take()))
        elif self.verbs.is_verb(w) or (has_subject and not self.at_boundary()):
            kids.append(_leaf(self.verb_tag(w, has_subject), self.take()))
        else:
            self.fail(f"expected a verb, found {self.peek().text!r}")
        while self.word() == "to" and self.verbs.is_base(self.word(1) or ""):
            kids.append(_leaf("TO", self.take()))
            kids.append(_leaf("VB", self.take()))
        head = self.verbs.lemma(kids[-1].token.lower) or kids[-1].token.lower
        if (head, self.word()) in PARTICLES and not self.at_boundary(1):
            kids.append(_leaf("RP", self.take()))

        if not self.at_boundary():
            kids.append(self.noun_phrase())
        while self.word() in PREPOSITIONS:
            prep = _leaf("IN", self.take())
            if self.at_boundary():
                self.fail(f"preposition {prep.token.text!r} has no object")
            kids.append(ConstituencyTree("PP", (prep, self.noun_phrase())))
        if self.word() in SUBORDINATORS:
            kids.append(self.sbar())
        return ConstituencyTree("VP", tuple(kids))

    def verb_tag(self, w, has_subject):
        if w in self.verbs.third_person:
            return "VBZ"
        if w in self.verbs.past and not self.verbs.is_base(w):
            return "VBD"
        if w in self.verbs.gerunds:
            return "VBG"
        return "VBP" if has_subject else "VB"

    def sbar(self):
        conn = _leaf("IN", self.take())
        subject = self.subject()
        vp = self.verb_phrase(subject is not None)
        inner = ConstituencyTree("S", (subject, vp) if subject is not None else (vp,))
        return ConstituencyTree("SBAR", (conn, inner))

    def noun_phrase(self, stop=None):
        kids = []
        while (stop is None and not self.at_boundary()) or (stop is not None and self.pos < stop):
            tok = self.take()
            if tok.literal:
                label = "NN"
            elif tok.lower in POSSESSIVES:
                label = "PRP$"
            elif tok.lower in DETERMINERS:
                label = "DT"
            elif _NUMBER.match(tok.text):
                label = "CD"
            elif tok.lower in PRONOUNS and not kids:
                label = "PRP"
            else:
                label = "NN"
            kids.append(_leaf(label, tok))
        if not kids:
            self.fail("expected a noun phrase")
        return ConstituencyTree("NP", tuple(kids))


def parse_restricted(sentence: str, verbs=None) -> ConstituencyTree:
    """Parse one sentence of the controlled grammar into a constituency tree.

    Raises :class:`~reproforge.errors.OutOfGrammar` for anything else.
    """
    return _Parser(sentence, verbs or load_verb_forms()).parse()
