"""Exception hierarchy shared by every module.

Each error carries an ``exit_code`` used by the command-line front end.
"""


class OrdinalCodeError(ValueError):
    """Base class for precondition violations raised by the library."""

    exit_code = 4


class EmptySequence(OrdinalCodeError):
    pass


class InvalidRankCode(OrdinalCodeError):
    pass


class LengthMismatch(OrdinalCodeError):
    pass


class Unsupported(OrdinalCodeError):
    pass


class DuplicateItem(OrdinalCodeError):
    pass


class InvalidAlphabet(OrdinalCodeError):
    pass


class EmptyAlphabet(OrdinalCodeError):
    pass


class DegenerateFrequencies(OrdinalCodeError):
    pass


class UnknownSymbol(OrdinalCodeError):
    pass


class TruncatedCode(OrdinalCodeError):
    pass


class EmptyCue(OrdinalCodeError):
    pass


class UnknownUnit(OrdinalCodeError):
    pass


class UnknownZ(OrdinalCodeError):
    pass


class EmptyCodebook(OrdinalCodeError):
    pass


class PreconditionViolation(OrdinalCodeError):
    pass


class UnknownSuite(OrdinalCodeError):
    pass


class ParseError(OrdinalCodeError):
    """Malformed input file (bad JSON, missing keys, wrong types)."""

    exit_code = 3


class DegenerateTemplate(UserWarning):
    """Template without repeated variables or constraints; it matches everything."""
