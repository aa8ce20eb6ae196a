"""Parking functions: validation, bijections with forests, enumerators and random laws."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CompatibilityError, DomainError, InputError, NoFeasibleFirst, NotAParkingFunction, ResourceLimit,
)
from .pfcore import ParkingFunction, is_parking_function, park  # noqa: E402
from .forests import BfsVersion, RootedForest  # noqa: E402
from .rng import RandomSource  # noqa: E402

__all__ = [
    "__version__", "BfsVersion", "CompatibilityError", "DomainError", "InputError", "NoFeasibleFirst",
    "NotAParkingFunction", "ParkingFunction", "RandomSource", "ResourceLimit", "RootedForest",
    "is_parking_function", "park",
]
