"""adomp: source-to-source AD for a mini array DSL with OpenMP-style loops."""

from .parser import parse
from .emitter import emit

__version__ = "0.1.0"

__all__ = ["parse", "emit", "__version__"]
