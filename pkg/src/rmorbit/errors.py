"""Exception hierarchy shared by every module."""


class RMOrbitError(Exception):
    """Base class for all library errors."""


class NotPrime(RMOrbitError, ValueError):
    pass


class NotPrimePower(RMOrbitError, ValueError):
    pass


class ReducibleModulus(RMOrbitError, ValueError):
    pass


class UnsupportedSize(RMOrbitError, ValueError):
    pass


class DivisionByZero(RMOrbitError, ZeroDivisionError):
    pass


class OutOfRange(RMOrbitError, ValueError):
    pass


class BadPartition(RMOrbitError, ValueError):
    pass


class NotDivisible(RMOrbitError, ArithmeticError):
    """Raised when exact division by a product of variables fails."""


class ArityMismatch(RMOrbitError, ValueError):
    pass


class DegreeOverflow(RMOrbitError, ValueError):
    pass


class DomainMismatch(RMOrbitError, ValueError):
    pass


class FieldMismatch(RMOrbitError, ValueError):
    pass


class ShrinkNotAllowed(RMOrbitError, ValueError):
    pass


class ZeroFunction(RMOrbitError, ValueError):
    pass


class EnumerationBudget(RMOrbitError, RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, what, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: needs {needed} > budget {budget}")


class ArityTooSmall(RMOrbitError, ValueError):
    def __init__(self, n, required):
        self.n = n
        self.required = required
        super().__init__(f"arity n={n} is below the required {required}")


class InvariantViolation(RMOrbitError, AssertionError):
    """A structural guarantee of the construction failed to hold."""
