"""Exception hierarchy shared by all deppoly modules.

Every error raised on bad input derives from DeppolyError (CLI exit code 1).
Anything else escaping to the CLI is treated as an internal invariant
violation (exit code 2).
"""


class DeppolyError(Exception):
    """Base class for all input/domain errors."""

    exit_code = 1


class MalformedLine(DeppolyError):
    """A CoNLL-U token line does not have the expected shape."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        where = ""
        if path is not None:
            where += f"{path}:"
        if line_no is not None:
            where += f"{line_no}: "
        super().__init__(where + message)


class MissingSentId(DeppolyError):
    """A sentence block carries no `# sent_id` comment."""


class NonTreeStructure(DeppolyError):
    """Head references do not form a single rooted tree."""


class UnknownRelation(DeppolyError):
    """A dependency relation is not one of the 37 universal relations."""


class MissingTranslation(DeppolyError):
    """A sentence id is absent from one or more language treebanks."""


class SplitMismatch(DeppolyError):
    """A sentence id is not covered by the original-language split mapping."""


class ModeMismatch(DeppolyError):
    """Labeled and unlabeled polynomials were mixed in one operation."""


class EmptySet(DeppolyError):
    """A polynomial distance was requested for an empty term-vector set."""


class DegenerateMatrix(DeppolyError):
    """A distance matrix is too small or malformed for the requested analysis."""
