"""Critical and cocritical degrees of totally acyclic complexes over
Artinian complete intersections, computed from first principles."""

__version__ = "0.1.0"

from . import errors
from .ffield import Field, Mat

__all__ = ["errors", "Field", "Mat", "__version__"]
