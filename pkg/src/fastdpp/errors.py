"""Exception types raised by the samplers and their numerical building blocks."""


class DPPError(Exception):
    """Base class for all errors raised by :mod:`fastdpp`."""


class RankDeficient(DPPError, ValueError):
    """Input matrix has numerical rank below the requested dimension."""


class NotSymmetric(DPPError, ValueError):
    pass


class NotPSD(DPPError, ValueError):
    pass


class InvalidWeights(DPPError, ValueError):
    """Negative, non-finite or all-zero weights passed to the alias table."""


class DegenerateResidual(DPPError, ArithmeticError):
    """A Gram-Schmidt residual vanished: the new vector is numerically dependent."""


class NumericalUnderflow(DPPError, ArithmeticError):
    """Conditional mass drifted away from its theoretical total."""


class NumericalInstability(DPPError, ArithmeticError):
    pass


class Infeasible(DPPError, ValueError):
    """Fewer usable eigenvalues than the requested sample size."""


class ProposalBudgetExceeded(DPPError, RuntimeError):
    """The rejection loop hit its guard cap on the number of proposals."""


class TooLarge(DPPError, ValueError):
    """Brute-force enumeration refused: the instance is too big."""


class InsufficientSamples(DPPError, ValueError):
    pass


class NotDivisible(DPPError, ValueError):
    pass
