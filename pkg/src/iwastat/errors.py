"""Shared exception types, one per contract-level error condition."""


class IwastatError(Exception):
    """Base class for all package errors."""


class BadReduction(IwastatError):
    pass


class SmallPrime(IwastatError):
    pass


class NonMinimalModel(IwastatError):
    pass


class BoundExceeded(IwastatError):
    pass


class RamifiedBadPrime(IwastatError):
    pass


class AdditiveBadPrime(IwastatError):
    pass


class NotIntegral(IwastatError):
    pass


class MissingData(IwastatError):
    pass


class MissingTwist(MissingData):
    pass


class MissingGenerator(MissingData):
    pass


class NotFound(MissingData):
    pass


class NetworkUnavailable(IwastatError):
    pass


class InExceptionalSet(IwastatError):
    pass


class HypothesisFailed(IwastatError):
    def __init__(self, item: str, detail: str = ""):
        self.item = item
        self.detail = detail
        super().__init__(f"hypothesis {item} failed" + (f": {detail}" if detail else ""))


class NotAdmissible(IwastatError):
    pass


class Unsupported(IwastatError):
    pass


class PrecisionLoss(IwastatError):
    pass


class PointAtInfinity(IwastatError):
    pass
