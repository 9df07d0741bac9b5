"""Exception types raised across the package."""


class CISupportError(Exception):
    """Base class for all package errors."""


class NotRegularSequence(CISupportError):
    pass


class NotInSquareOfMaxIdeal(CISupportError):
    pass


class InhomogeneousEntry(CISupportError):
    pass


class BudgetExceeded(CISupportError):
    pass


class NotMCM(CISupportError):
    pass


class MethodMismatch(CISupportError):
    pass


class DecompositionFailed(CISupportError):
    pass


class WindowTooShort(CISupportError):
    pass


class NotStabilized(CISupportError):
    pass


class ConstructionDegenerate(CISupportError):
    pass


class SearchExhausted(CISupportError):
    pass


class InvalidSplitting(CISupportError):
    def __init__(self, clause: str, detail: str = ""):
        super().__init__(f"{clause}: {detail}" if detail else clause)
        self.clause = clause


class ParseError(CISupportError):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        loc = f"line {line}, column {col}"
        exp = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{loc}: {message}{exp}")
        self.line = line
        self.col = col
        self.expected = expected


class ScriptNameError(CISupportError):
    """Undeclared or duplicate name in a session script."""
