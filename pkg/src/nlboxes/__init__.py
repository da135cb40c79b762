"""Exact toolkit for non-local boxes: polytope geometry, wirings, games,
distributed computation and box-based cryptographic primitives."""
from .boxcore import Box, chsh, make_box, pr_box
from .errors import NLBoxError

__version__ = "0.1.0"

__all__ = ["Box", "NLBoxError", "chsh", "make_box", "pr_box", "__version__"]
