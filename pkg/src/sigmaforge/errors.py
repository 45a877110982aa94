"""Exception hierarchy shared by every module."""


class SigmaForgeError(Exception):
    """Base class for all library errors."""


class DomainError(SigmaForgeError, ValueError):
    """An argument violates an operation's precondition (e.g. a ⊄ b)."""


class ScaleError(SigmaForgeError, RuntimeError):
    """A group or lattice exceeds the configured order cap."""


class SigmaError(SigmaForgeError, ValueError):
    """A sigma-partition is malformed or undefined on a needed prime."""


class ParseError(SigmaForgeError, ValueError):
    """Malformed group file; carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
