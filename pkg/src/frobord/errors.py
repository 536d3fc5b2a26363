"""Exception types shared across the package."""


class FrobordError(Exception):
    pass


class BudgetExceeded(FrobordError):
    """Factorization work budget ran out; the input is beyond desk scale."""


class SpecInvalid(FrobordError):
    pass


class RamifiedPrime(FrobordError):
    pass


class BadPrime(FrobordError):
    pass


class NotInvertible(FrobordError):
    pass


class UnsupportedGroup(FrobordError):
    pass


class RankDeficient(FrobordError):
    pass
