"""Exception hierarchy.

Input problems (bad shapes, bad parameters, unreadable files) derive from
:class:`InputError`; numerical degeneracies derive from :class:`NumericalError`.
The command-line front end maps these to exit codes 2 and 3.
"""


class DepthRegError(Exception):
    """Base class for all package errors."""


class InputError(DepthRegError, ValueError):
    """Invalid argument value."""


class DimensionError(InputError):
    """Array shapes or grids that do not line up."""


class UnsupportedDimensionError(InputError):
    """Operation not available for this response dimension."""


class LoadError(InputError):
    """A data file could not be parsed into a valid dataset."""


class NumericalError(DepthRegError, ArithmeticError):
    """A computation hit a degenerate configuration."""


class EmptyNeighborhoodError(NumericalError):
    """No observation received positive weight."""


class DegenerateScaleError(NumericalError):
    """Zero weighted MAD along a projection direction."""
