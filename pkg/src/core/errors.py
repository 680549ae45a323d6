"""Custom exceptions for the IBLT schemes library."""


class IbltError(Exception):
    """Base exception for all library errors."""

    pass


class FieldError(IbltError):
    """Base exception for finite field errors."""

    pass


class FieldMismatchError(FieldError):
    """Operands belong to different fields."""

    pass


class FieldDivisionError(FieldError, ZeroDivisionError):
    """Inverse or division by the zero element."""

    pass


class UnsupportedFieldError(FieldError):
    """No default polynomial for the requested degree, or the polynomial is not primitive."""

    pass


class ConstructionError(IbltError):
    """Failed to build a mapping matrix."""

    pass


class ConstructionInfeasibleError(ConstructionError):
    """Field too small for the requested construction parameters."""

    pass


class SchemeError(IbltError):
    """Base exception for table and scheme errors."""

    pass


class ConfigError(SchemeError):
    """Invalid scheme configuration or config file."""

    pass


class ElementRangeError(SchemeError, ValueError):
    """Element outside the scheme's universe."""

    pass


class TableFormatError(SchemeError):
    """Serialized table does not match the expected layout."""

    pass


class ListingError(IbltError):
    """Base exception for listing errors (not listing failures)."""

    pass


class IncompatibleAlgorithmError(ListingError):
    """Listing algorithm cannot run on this scheme family or construction."""

    pass


class VerificationError(IbltError):
    """Base exception for verification errors."""

    pass


class BudgetExceededError(VerificationError):
    """Enumeration would exceed the configured state budget."""

    def __init__(self, required: int, budget: int, what: str = "states") -> None:
        self.required = required
        self.budget = budget
        super().__init__(f"Refusing to enumerate {required} {what} (budget {budget})")


class OpsStreamError(IbltError):
    """Malformed or out-of-range line in an insert/delete stream."""

    def __init__(self, line_number: int, message: str) -> None:
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")
