"""
Anick - two-sided Anick resolutions and Hochschild cohomology

Builds the Anick resolution of a finitely presented augmented algebra
by algebraic discrete Morse theory on the bar resolution, computes
Hochschild cohomology from it, and ships the first Weyl algebra,
Heisenberg and conformal endomorphism computations as executable checks.
"""

__version__ = "0.2.0"
__author__ = "Anick Team"
__description__ = "Two-sided Anick resolutions and Hochschild cohomology"

# Version info for easy access
VERSION = __version__

from anick.errors import AnickError, CheckFailed, InputError  # noqa: E402

__all__ = ["AnickError", "CheckFailed", "InputError", "VERSION"]
