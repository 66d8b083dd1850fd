"""Exception types raised across the package."""


class CycleRingError(Exception):
    pass


class NotPositiveDefinite(CycleRingError, ValueError):
    pass


class ResourceLimit(CycleRingError, RuntimeError):
    pass


class BadPrime(CycleRingError, ValueError):
    pass


class BaseMismatch(CycleRingError, ValueError):
    pass


class UnsupportedWeightTransport(CycleRingError, ValueError):
    pass


class CutoffMismatch(CycleRingError, ValueError):
    pass


class NotHomogeneous(CycleRingError, ValueError):
    pass


class GenusMismatch(CycleRingError, ValueError):
    pass


class UnknownSuite(CycleRingError, KeyError):
    pass
