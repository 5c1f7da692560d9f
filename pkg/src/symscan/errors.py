"""Exception types shared across the package."""


class SymscanError(Exception):
    """Base class for all symscan errors."""


class ConfigError(SymscanError):
    """Bad or unparsable configuration."""


class DataError(SymscanError):
    """Dataset does not satisfy the requirements of an operation."""


class NoContoursError(SymscanError):
    """The scalar field has no level crossings (e.g. constant field)."""


class DegenerateMaskError(SymscanError):
    """Contour/background labeling left one of the two classes empty."""


class DegenerateVarianceError(SymscanError):
    """All activation rows identical; principal components undefined."""


class TrainingDivergedError(SymscanError):
    """Loss became non-finite during training."""

    def __init__(self, message: str, epoch: int):
        super().__init__(message)
        self.epoch = epoch


class GenerationFailedError(SymscanError):
    """Dataset generation exhausted its retry budget."""
