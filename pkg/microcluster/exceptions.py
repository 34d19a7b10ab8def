class SimulationError(Exception):
    exit_code: int = 2
    error_code: str = "SIMULATION_ERROR"

    def __init__(self, message: str, details: dict | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(message)


class DomainError(SimulationError):
    error_code = "DOMAIN_ERROR"


class MissingAssignmentError(DomainError):
    error_code = "MISSING_ASSIGNMENT"


class ZeroDenominatorError(DomainError):
    error_code = "ZERO_DENOMINATOR"


class UnknownQubitError(DomainError):
    error_code = "UNKNOWN_QUBIT"


class QubitCollisionError(DomainError):
    error_code = "QUBIT_COLLISION"


class ParameterError(DomainError):
    error_code = "INVALID_PARAMETER"


class AttemptExceedsLeaves(SimulationError):
    error_code = "ATTEMPT_EXCEEDS_LEAVES"


class CapacityError(SimulationError):
    error_code = "CAPACITY_EXCEEDED"


class CalibrationError(SimulationError):
    error_code = "CALIBRATION_FAILED"


class UsageError(SimulationError):
    exit_code = 1
    error_code = "USAGE_ERROR"
