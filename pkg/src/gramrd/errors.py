"""Exception types shared across the package.

All of these derive from ValueError so that callers who do not care about
the distinction can catch a single type; the CLI maps them to exit code 2.
"""


class GramRDError(ValueError):
    """Base class for input and domain problems raised by this package."""


class DomainError(GramRDError):
    """An argument lies outside the mathematical domain of the function."""


class RegimeError(GramRDError):
    """Inputs violate the dimension regime a bound is stated for."""


class DegenerateInputError(GramRDError):
    """Input is structurally degenerate (zero rows, empty alphabets, ...)."""


class ValidationError(GramRDError):
    """A structured value failed its construction-time invariants."""
