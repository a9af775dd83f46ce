from __future__ import annotations


class InvalidParameters(ValueError):
    """Raised when an operation's parameter preconditions are violated."""


class UnsupportedSize(ValueError):
    """Raised when an input exceeds the size cap of an exact routine."""


class Graph6Error(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConvergenceFailure(RuntimeError):
    """Power iteration hit its iteration cap; ``estimate`` holds the best value seen."""

    def __init__(self, message: str, estimate: float, iterations: int, residual: float):
        super().__init__(message)
        self.estimate = estimate
        self.iterations = iterations
        self.residual = residual


class CorpusIncomplete(RuntimeError):
    pass
