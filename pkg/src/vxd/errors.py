"""Exception hierarchy.  Every library error derives from :class:`VxdError`."""


class VxdError(Exception):
    pass


class AmbientMismatchError(VxdError):
    pass


class DivisionError(VxdError, ZeroDivisionError):
    pass


class MembershipError(VxdError):
    """A denominator is not invertible in the declared localization."""


class UnitError(VxdError):
    pass


class SingularMatrixError(VxdError):
    pass


class DimensionError(VxdError):
    pass


class DegreeError(VxdError):
    pass


class ExprSyntaxError(VxdError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(VxdError):
    pass


class BasisError(VxdError):
    pass


class NotClosedError(VxdError):
    pass


class PairingMismatchError(VxdError):
    pass


class LinearityError(VxdError):
    pass


class CocycleError(VxdError):
    pass


class DescriptorError(VxdError):
    """Malformed input descriptor file."""
