"""Exception and warning types raised by skrational."""


class SKRationalError(Exception):
    """Base class for all errors raised by this package."""


class NoPredecessor(SKRationalError):
    def __init__(self, position):
        self.position = position
        super().__init__(f"multi-index at position {position} has no predecessor; "
                         "ordering is not prefix-closed")


class Breakdown(SKRationalError):
    """Arnoldi orthogonalization lost the new direction.

    Raised when the norm left after Gram-Schmidt falls below the relative
    threshold; ``column`` is the 0-based column that failed.
    """

    def __init__(self, column, ratio=0.0):
        self.column = column
        self.ratio = ratio
        super().__init__(f"Arnoldi breakdown at column {column} "
                         f"(relative remainder {ratio:.3e}); points cannot "
                         "support the requested degree")


class DegenerateR(SKRationalError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"recurrence matrix has zero diagonal entry at column {column}")


class MissingResponses(SKRationalError):
    pass


class PoleAtSample(SKRationalError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"denominator vanishes at sample {index}")


class ParseError(SKRationalError):
    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class PoleHitWarning(RuntimeWarning):
    """Evaluation landed on (numerically) a pole; value set to infinity."""


class RankDeficientWarning(RuntimeWarning):
    """The homogeneous least-squares solution is not unique."""


class ZeroDenominatorWarning(RuntimeWarning):
    """A denominator entry was clamped away from zero during iteration."""
