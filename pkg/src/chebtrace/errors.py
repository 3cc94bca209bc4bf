"""Exception types raised by chebtrace."""


class MatrixMarketError(ValueError):
    """Malformed Matrix Market file (bad header, bad entry line, bad index)."""


class UnsupportedFormatError(MatrixMarketError):
    """Well-formed Matrix Market file in a format we do not read
    (``array`` layout, ``complex``/``pattern``/``integer`` field, ...)."""


class PreconditionError(ValueError):
    """A numerical precondition of an estimator does not hold.

    Examples are a non-positive lower eigenvalue bound for the
    log-determinant, or an empty interval handed to the planner.
    """


class DegenerateInputError(PreconditionError):
    """The operand is degenerate for the requested computation
    (e.g. the zero matrix in the positive-definiteness test)."""
