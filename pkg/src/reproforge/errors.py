"""Exception hierarchy shared by every stage of the pipeline."""


class ReproError(Exception):
    """Base class for all errors raised by reproforge."""


# -- tree ingestion ---------------------------------------------------------

class BracketedTreeError(ReproError):
    """Malformed bracketed-tree text. ``offset`` is the first offending character."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnbalancedParens(BracketedTreeError):
    pass


class EmptyNode(BracketedTreeError):
    pass


class UnknownLabel(BracketedTreeError):
    pass


class OutOfGrammar(ReproError):
    """Sentence is outside the controlled grammar understood by ``parse_restricted``."""

    def __init__(self, sentence, reason):
        super().__init__(
            f"cannot parse {sentence!r}: {reason}; supply a bracketed tree instead"
        )
        self.sentence = sentence
        self.reason = reason


# -- reordering -------------------------------------------------------------

class GraftSiteMissing(ReproError):
    pass


class RecursionLimit(ReproError):
    pass


# -- extraction -------------------------------------------------------------

class NoPredicate(ReproError):
    pass


class AllZeroVectors(ReproError):
    pass


# -- embeddings -------------------------------------------------------------

class VectorFileError(ReproError):
    def __init__(self, message, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)
        self.line = line


class BadHeader(VectorFileError):
    pass


class DimensionMismatch(VectorFileError):
    pass


class DuplicateWord(VectorFileError):
    pass


# -- app model --------------------------------------------------------------

class SchemaError(ReproError):
    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class DanglingScreenRef(SchemaError):
    pass


class AmbiguousTransition(SchemaError):
    pass


class IllegalEvent(ReproError):
    pass


class ConfigError(ReproError):
    pass
