"""Exception hierarchy shared by every stage of the toolchain."""

from __future__ import annotations


class SarError(Exception):
    """Base class for all toolchain errors."""


class InvariantViolation(SarError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics[:5])
        more = f" (+{len(self.diagnostics) - 5} more)" if len(self.diagnostics) > 5 else ""
        super().__init__(f"invalid SAR: {lines}{more}")


class SarSyntaxError(SarError):
    """Raised by the parser. ``span`` is a (start, end) offset pair into the source."""

    def __init__(self, message: str, span: tuple[int, int]):
        self.message = message
        self.span = span
        super().__init__(f"{message} at {span[0]}:{span[1]}")


class NotFound(SarError):
    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(f"unknown component kind {kind!r}")


class UnknownComponent(NotFound):
    pass


class MissingLiteral(SarError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"literal {name!r} is not bound in the literal dictionary")


class UnbalancedQuote(SarError):
    def __init__(self, position: int, quote: str):
        self.position = position
        self.quote = quote
        super().__init__(f"quote {quote!r} opened at offset {position} is never closed")


class CompileError(SarError):
    pass


class UnsupportedAction(CompileError):
    pass


class DanglingRef(CompileError):
    pass


class UnsupportedValue(CompileError):
    pass


class NoCandidate(CompileError):
    pass


class ConfigError(SarError):
    pass


class NoComponentsFound(SarError):
    def __init__(self, text: str, report=None):
        self.report = report
        super().__init__(text)


class IoError(SarError):
    """Wraps filesystem failures while writing build outputs."""
