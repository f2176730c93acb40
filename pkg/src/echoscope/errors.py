"""Exception hierarchy shared across the package.

Each class maps to a distinct CLI exit code (see cli.EXIT_CODES).
"""


class EchoscopeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(EchoscopeError):
    """Invalid or contradictory configuration."""


class CorpusFormatError(EchoscopeError):
    """Malformed input record; carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class DanglingReferenceError(EchoscopeError):
    """A record references an identifier that does not exist."""


class DuplicateIdError(EchoscopeError):
    """An identifier appears more than once within its collection."""


class UnpolarizedCorpusError(EchoscopeError):
    """No qualifying anticorrelated cluster pair exists."""


class TrainingDivergedError(EchoscopeError):
    """Loss became non-finite during gradient descent."""

    def __init__(self, step, message="training loss became non-finite"):
        super().__init__(f"{message} at step {step}")
        self.step = step


class StageError(EchoscopeError):
    """Wraps a failure inside a named pipeline stage."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
