"""Exception types shared across riglab."""


class RiglabError(Exception):
    """Base class for all riglab errors."""


class RegistryError(RiglabError):
    """Polynomials or bases live over different variable registries."""


class ArgumentError(RiglabError, ValueError):
    """An argument violates an operation's precondition."""


class PatternError(ArgumentError):
    """A pattern position is out of range or outside the permitted block."""


class ResourceExceeded(RiglabError):
    """A Groebner computation hit a configured resource cap.

    ``diagnostics`` holds the partial state at the moment of failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class SearchExhausted(RiglabError):
    """No suitable prime modulus was found within the search budget."""
