"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class OutOfRangeError(ValueError):
    """No solution of the requested equation exists in the admissible interval."""


class NoSolutionError(OutOfRangeError):
    """The solvability condition of the negative binomial inversion fails."""


class AccuracyWarning(UserWarning):
    """A truncated expansion was evaluated outside its validated region."""
