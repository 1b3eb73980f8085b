"""Exception types raised across the package."""

import numpy as np


class DimensionError(ValueError):
    """Array shapes or vector dimensions do not line up."""


class SingularMatrixError(np.linalg.LinAlgError):
    """A symmetric solve failed even after jitter escalation."""

    def __init__(self, msg, jitter=None):
        super().__init__(msg)
        self.jitter = jitter


class NotPSDError(ValueError):
    """A matrix expected to be positive semidefinite has a clearly negative eigenvalue."""

    def __init__(self, msg, eigenvalue=None):
        super().__init__(msg)
        self.eigenvalue = eigenvalue


class DegenerateSampleError(ValueError):
    """The sample carries no spread (e.g. all points identical)."""


class DataError(ValueError):
    """Malformed or invalid input data."""
