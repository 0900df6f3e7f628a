"""Typed errors shared across the package."""


class BerkChainError(Exception):
    """Base class; `code` is the CLI exit status."""

    code = 1
    kind = "error"


class ParseError(BerkChainError):
    code = 2
    kind = "parse-error"

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        self.raw = message
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class Inconclusive(BerkChainError):
    code = 3
    kind = "inconclusive"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class HeightBudgetExceeded(Inconclusive):
    """A point's center outgrew the arithmetic budget; the computation is abandoned, not guessed."""


class TotallyInvariantVertex(BerkChainError):
    code = 4
    kind = "totally-invariant-vertex"

    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} is totally invariant; chain construction refused")
        self.vertex = vertex


class ExtensionRequired(BerkChainError):
    code = 5
    kind = "extension-required"

    def __init__(self, polynomial, message=None):
        super().__init__(message or f"residue polynomial {polynomial} has roots outside the ground field")
        self.polynomial = polynomial


class NoVerdict(BerkChainError):
    code = 6
    kind = "no-verdict"


class NotStable(BerkChainError):
    """Raised when an operation needs analytic stability and it is not established."""

    code = 7
    kind = "not-stable"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OracleRefused(BerkChainError):
    code = 8
    kind = "oracle-refused"
