"""Exception types shared across the package."""


class ExactCompError(Exception):
    pass


class BoundaryError(ExactCompError, ValueError):
    """Arrows or objects whose domains/codomains do not line up."""


class CompositionError(BoundaryError):
    pass


class ElementError(ExactCompError, KeyError):
    """A label that is not an element of the carrier it was looked up in."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NotAnEquivalence(ExactCompError, ValueError):
    pass


class CapExceeded(ExactCompError, RuntimeError):
    """An instance grew past the configured size caps."""


class FormulaTypeError(ExactCompError, TypeError):
    pass


class FormulaSyntaxError(ExactCompError, ValueError):
    pass


class OracleMismatch(ExactCompError, AssertionError):
    """A construction and its brute-force oracle disagree."""


class InternalInconsistency(ExactCompError, AssertionError):
    """Two independent routes for the same check disagreed."""


class InstanceError(ExactCompError, ValueError):
    """Invalid instance document; carries a line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
