"""Exception hierarchy shared by the solver, harness and CLI."""


class HcmaError(Exception):
    """Base class. ``code`` is the machine-parsable tag printed by the CLI."""

    code = "HCMA_ERROR"
    exit_status = 3

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class GridMismatchError(HcmaError, ValueError):
    code = "GRID_MISMATCH"
    exit_status = 2


class ConfigError(HcmaError, ValueError):
    code = "CONFIG_ERROR"
    exit_status = 2


class DegenerateStateError(HcmaError):
    """Raised when c <= 0 or g + phi_{i jbar} is not positive definite."""

    code = "DEGENERATE_STATE"


class NonConvergenceError(HcmaError):
    code = "NON_CONVERGENCE"


class LinearSolveFailure(HcmaError):
    code = "LINEAR_SOLVE_FAILURE"


class OracleViolation(HcmaError):
    code = "ORACLE_VIOLATION"
    exit_status = 4


class CheckpointError(HcmaError):
    code = "CHECKPOINT_ERROR"
    exit_status = 2


class CorruptHeaderError(CheckpointError):
    code = "CHECKPOINT_CORRUPT_HEADER"


class VersionMismatchError(CheckpointError):
    code = "CHECKPOINT_VERSION"


class TruncatedPayloadError(CheckpointError):
    code = "CHECKPOINT_TRUNCATED"
