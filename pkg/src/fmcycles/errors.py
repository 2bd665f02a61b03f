"""Exception types shared by the library and the command-line front end."""


class FMCyclesError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FMCyclesError, ValueError):
    """Well-formed input on which an operation is undefined.

    Examples: a torsion class with nonpositive Euler characteristic, a
    theorem applied outside its hypotheses, an unstable summand where
    Jordan-Hölder data is requested.
    """


class MalformedInput(FMCyclesError, ValueError):
    """Input that does not describe a valid object (lengths, signs, JSON)."""
