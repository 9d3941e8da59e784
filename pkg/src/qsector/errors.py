"""Exception hierarchy shared across the package."""


class QsectorError(Exception):
    """Base class for all package-specific failures."""


class InputError(QsectorError):
    """Malformed or inconsistent user input (maps to HTTP 400 / exit code 2)."""


class DimensionMismatchError(InputError):
    pass


class NonHermitianError(InputError):
    pass


class DegenerateSpectrumError(InputError):
    """Spectral gap below tolerance; complete contexts need simple spectra."""


class SizeOverflowError(InputError):
    """Tensor-product result would exceed the configured size guard."""


class TermBudgetExceededError(InputError):
    """Operator expression expansion produced more terms than allowed."""
