"""Core module - configuration, logging, and error handling."""

from src.core.config import Settings, get_settings, reset_settings
from src.core.errors import (
    BudgetExceededError,
    ConfigError,
    ConstructionError,
    ConstructionInfeasibleError,
    ElementRangeError,
    FieldDivisionError,
    FieldError,
    FieldMismatchError,
    IbltError,
    IncompatibleAlgorithmError,
    ListingError,
    OpsStreamError,
    SchemeError,
    TableFormatError,
    UnsupportedFieldError,
    VerificationError,
)

__all__ = [
    "Settings",
    "get_settings",
    "reset_settings",
    "IbltError",
    "FieldError",
    "FieldMismatchError",
    "FieldDivisionError",
    "UnsupportedFieldError",
    "ConstructionError",
    "ConstructionInfeasibleError",
    "SchemeError",
    "ConfigError",
    "ElementRangeError",
    "TableFormatError",
    "ListingError",
    "IncompatibleAlgorithmError",
    "VerificationError",
    "BudgetExceededError",
    "OpsStreamError",
]
