"""Exception hierarchy.

The CLI maps these onto exit codes: validation problems exit with 2,
capacity guards with 3 and violated mathematical invariants with 4.
"""


class GParkingError(Exception):
    exit_code = 1


class ValidationError(GParkingError, ValueError):
    exit_code = 2


class DimensionError(ValidationError):
    pass


class SingularMatrixError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class InfiniteDimensionError(PreconditionError):
    pass


class CapacityError(GParkingError):
    exit_code = 3


class InvariantViolation(GParkingError, AssertionError):
    exit_code = 4
