"""
Error hierarchy shared by every app.

Each error carries the exit code the `invariants` command reports for it:
1 for bad input, 2 for truncation problems, 3 for violated invariants.
"""


class EngineError(Exception):
    exit_code = 3
    code = "engine_error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self):
        return self.message


# ── Bad input (exit 1) ─────────────────────────────────────────────────────────

class SpecificationError(EngineError):
    exit_code = 1
    code = "invalid_specification"


class DimensionError(SpecificationError):
    code = "dimension_mismatch"


class IncompatibleFrameError(SpecificationError):
    code = "incompatible_frame"


class IncompatibleClassError(SpecificationError):
    code = "incompatible_class"


class NotNilpotentError(SpecificationError):
    code = "not_nilpotent"


class UnsupportedSurfaceError(SpecificationError):
    code = "unsupported_surface"


class UnsupportedOperationError(SpecificationError):
    code = "unsupported_operation"


class UnsupportedClassError(SpecificationError):
    code = "unsupported_class"


class InvalidProbeError(SpecificationError):
    code = "invalid_probe"


class InconsistentInvariantsError(SpecificationError):
    code = "inconsistent_invariants"


class DegreeBookkeepingError(SpecificationError):
    code = "degree_bookkeeping"


# ── Truncation (exit 2) ────────────────────────────────────────────────────────

class TruncationError(EngineError):
    exit_code = 2
    code = "truncation"


class OrderUndeterminedError(TruncationError):
    code = "order_undetermined"


# ── Violated invariants (exit 3) ───────────────────────────────────────────────

class InvariantViolationError(EngineError):
    exit_code = 3
    code = "invariant_violation"


class DivisibilityError(InvariantViolationError):
    code = "inexact_division"


class CharacteristicViolationError(InvariantViolationError):
    code = "characteristic_violation"


class CheckFailedError(InvariantViolationError):
    code = "check_failed"
