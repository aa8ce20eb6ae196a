"""Exception hierarchy shared by every module."""


class InputError(ValueError):
    """Arguments outside the documented domain (ranges, m > n, malformed text)."""


class NotAParkingFunction(InputError):
    """Some car runs off the end of the street.

    ``car`` is the 1-based index of the first car that finds no free spot.
    """

    def __init__(self, car, message=None):
        self.car = car
        super().__init__(message or f"car {car} finds no free spot")


class CompatibilityError(InputError):
    """A (specification, order permutation) pair violates block order or balance."""

    def __init__(self, condition, message):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


class NoFeasibleFirst(InputError):
    """No first preference turns the given tail into a parking function."""


class ResourceLimit(RuntimeError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} objects exceeds cap {cap}")


class DomainError(ArithmeticError):
    """Zero base raised to a negative power."""
