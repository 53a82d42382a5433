"""Exception hierarchy shared across the engine."""


class RigwiseError(Exception):
    """Base class for all engine errors."""


# --- query routing ---------------------------------------------------------

class EmptyQuery(RigwiseError):
    pass


class NoProviderAvailable(RigwiseError):
    pass


class QueryTooLarge(RigwiseError):
    pass


class AllProvidersFailed(RigwiseError):
    """Raised when the chosen provider and every alternate failed.

    ``causes`` maps model_id -> exception for each attempted provider.
    """

    def __init__(self, causes):
        self.causes = dict(causes)
        super().__init__(f"all providers failed: {sorted(self.causes)}")


# --- retrieval -------------------------------------------------------------

class EmptyDocument(RigwiseError):
    pass


class DimensionMismatch(RigwiseError):
    pass


class EmptyIndex(RigwiseError):
    pass


class DuplicateDocId(RigwiseError):
    pass


# --- prompting -------------------------------------------------------------

class MissingSlot(RigwiseError):
    pass


class ShotCountMismatch(RigwiseError):
    pass


class KTooLarge(RigwiseError):
    pass


class EmptyPaths(RigwiseError):
    pass


class BadWeights(RigwiseError):
    pass


class EmptySpace(RigwiseError):
    pass


# --- analytics -------------------------------------------------------------

class InsufficientData(RigwiseError):
    pass


class FitDiverged(RigwiseError):
    pass


class AllModelsFailed(RigwiseError):
    pass


class DomainError(RigwiseError):
    pass


class WindowTooShort(RigwiseError):
    pass


# --- petrophysics ----------------------------------------------------------

class BadMatrixFluidPair(RigwiseError):
    pass


class NonPositiveResistivity(RigwiseError):
    pass


class ZeroPorosity(RigwiseError):
    pass


class CurveTooShort(RigwiseError):
    pass


# --- economics -------------------------------------------------------------

class OutOfRange(RigwiseError):
    pass


class NoSignChange(RigwiseError):
    pass


class NeverPaysBack(RigwiseError):
    pass


class BadDistribution(RigwiseError):
    pass


class ZeroTrials(RigwiseError):
    pass


class EmptyRange(RigwiseError):
    pass


# --- audit -----------------------------------------------------------------

class StorageFailure(RigwiseError):
    pass


# --- service ---------------------------------------------------------------

class ConfigError(RigwiseError):
    pass
