"""Exceptions raised on purpose by germlab.

User-facing failures derive from UserInputError (exit code 1); a failed internal
identity raises InvariantViolation (exit code 2).
"""


class GermlabError(Exception):
    pass


class UserInputError(GermlabError):
    pass


class ParseError(UserInputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        self.message = message
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DimensionMismatch(UserInputError):
    pass


class UnsupportedGroupError(UserInputError):
    pass


class NotSubgroupError(UserInputError):
    pass


class GeometryError(UserInputError):
    pass


class InvariantViolation(GermlabError):
    pass
