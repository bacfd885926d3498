"""Exception hierarchy shared by every stage of the toolkit."""


class FactorcastError(ValueError):
    """Base class for all toolkit errors."""


class NonPositiveValue(FactorcastError):
    def __init__(self, date, value):
        super().__init__(f"non-positive value {value!r} at {date}")
        self.date = date
        self.value = value


class TooShort(FactorcastError):
    pass


class TooFewKnots(FactorcastError):
    pass


class ZeroVariance(FactorcastError):
    def __init__(self, name):
        super().__init__(f"column {name!r} has zero variance")
        self.name = name


class EmptyIntersection(FactorcastError):
    pass


class FrequencyError(FactorcastError):
    pass


class SampleTooSmall(FactorcastError):
    pass


class RankDeficient(FactorcastError):
    pass


class SingularMatrix(FactorcastError):
    pass


class NonPositiveDeterminant(FactorcastError):
    pass


class ConvergenceFailure(FactorcastError):
    pass


class InsufficientTraining(FactorcastError):
    pass


class LengthMismatch(FactorcastError):
    pass


class CholeskyFailure(FactorcastError):
    pass


class EmptyInput(FactorcastError):
    pass


class ZeroDenominator(FactorcastError):
    pass


class ZeroBenchmark(FactorcastError):
    pass


class DegenerateVariance(FactorcastError):
    """Loss-differential variance is not positive; the DM test is inconclusive."""


class ConfigError(FactorcastError):
    pass


class DataError(FactorcastError):
    pass


class BadSpec(FactorcastError):
    pass
