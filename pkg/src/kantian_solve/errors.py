"""Exception types shared across the solver modules."""


class KantianError(Exception):
    """Base class for every error raised by kantian_solve."""


class InvalidProfileError(KantianError, ValueError):
    """A profile or strategy does not fit the game's action sets."""


class UnsupportedGameError(KantianError):
    """The game lacks the structure an operation needs (e.g. identical action sets)."""


class DomainError(KantianError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class SizeLimitError(KantianError):
    """The problem exceeds a configured size cap."""


class GameFormatError(KantianError, ValueError):
    """A game, distribution or family document is malformed."""


class NumericalError(KantianError, ArithmeticError):
    """A numerical routine failed to produce a trustworthy answer."""
