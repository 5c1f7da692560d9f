"""symscan: detect approximate symmetry in 2D data.

Stage one trains many small "decoy" networks to separate contour pixels
from background pixels of an image; stage two classifies the PCA
fingerprint of each decoy network's last hidden layer into one of five
symmetry classes (rotation, reflection, continuous/discrete translation,
or none).
"""

from symscan.errors import (
    DataError,
    DegenerateMaskError,
    DegenerateVarianceError,
    GenerationFailedError,
    NoContoursError,
    SymscanError,
    TrainingDivergedError,
)
from symscan.potentials import SymmetryClass

__version__ = "0.1.0"

__all__ = [
    "SymmetryClass",
    "SymscanError",
    "NoContoursError",
    "DegenerateMaskError",
    "DegenerateVarianceError",
    "TrainingDivergedError",
    "GenerationFailedError",
    "DataError",
    "__version__",
]
