"""Exception types raised across the package."""


class LargerSieveError(Exception):
    pass


class OutOfRange(LargerSieveError, ValueError):
    pass


class NotCoprime(LargerSieveError, ValueError):
    pass


class NotPairwiseCoprime(NotCoprime):
    pass


class DuplicateElements(LargerSieveError, ValueError):
    pass


class PrecisionInsufficient(LargerSieveError, ArithmeticError):
    pass


class InstanceInconsistent(LargerSieveError, ValueError):
    pass


class DegenerateModP(LargerSieveError, ValueError):
    pass


class CapExceeded(LargerSieveError, RuntimeError):
    pass


class ContentNotCoprime(LargerSieveError, ValueError):
    pass


class NotRoots(LargerSieveError, ValueError):
    pass


class DomainError(LargerSieveError, ValueError):
    pass


class DimensionMismatch(LargerSieveError, ValueError):
    pass


class DegenerateRegion(LargerSieveError, ValueError):
    pass


class InvalidHypothesis(LargerSieveError, ValueError):
    pass


class HypothesisViolated(LargerSieveError, ValueError):
    pass
