"""Exception hierarchy shared across the package."""


class TwoNormError(Exception):
    """Base class for every error raised by twonormlab."""


class InputError(TwoNormError):
    """Malformed or inconsistent input: wrong dimensions, invalid matrices,
    vectors from mismatched spaces, bad configuration values."""


class SpecFormatError(InputError):
    """A spec file failed to parse or validate.

    Carries enough position information to point at the offending spot:
    either a JSON line/column for syntax errors or a path expression such
    as ``$.gram[2][0]`` for semantic ones.
    """

    def __init__(self, message, *, filename=None, where=None, line=None, col=None):
        self.filename = filename
        self.where = where
        self.line = line
        self.col = col
        loc = []
        if filename is not None:
            loc.append(str(filename))
        if line is not None:
            loc.append(f"line {line}" + (f", column {col}" if col is not None else ""))
        if where is not None:
            loc.append(f"at {where}")
        prefix = ": ".join(loc)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DomainError(TwoNormError):
    """A vector was passed to a functional whose domain does not contain it."""


class UnboundedFunctionalError(TwoNormError):
    """An operation that requires a bounded functional received an unbounded one."""


class InfeasibleExtensionError(TwoNormError):
    """The requested extension constant admits no valid extension value."""


class DegenerateAnchorError(InputError):
    """The target vector is linearly dependent on the anchor, so no norming
    functional exists for the pair."""


class PreconditionError(TwoNormError):
    """A stated precondition failed; distinct from the checked property failing."""


class UnboundedObjectiveError(TwoNormError):
    """The search objective keeps increasing at the radius cap; the supremum
    does not exist as a finite number."""
