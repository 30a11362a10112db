"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class NumericalError(RuntimeError):
    """A numerical step failed or would be ill-defined (CLI exit code 2)."""


class ModeLimitError(NumericalError, ValueError):
    """More modes were requested than the eigenvalue floor allows."""

    def __init__(self, message: str, max_safe_modes: int):
        super().__init__(message)
        self.max_safe_modes = max_safe_modes


class EigenvalueUnderflowError(NumericalError):
    def __init__(self, message: str, mode: int):
        super().__init__(message)
        self.mode = mode


class ScenarioError(ValueError):
    """Invalid scenario file or field (CLI exit code 1)."""
