"""Finite Z_L laboratory for identifying time-frequency structured operators.

Modules
-------
tfcore       shifts, DFT, STFT, Zak transform, windows
lattice      rank-2 lattices in R^4 and their 2-Beurling density
opcalc       Hilbert-Schmidt operators, their four representations, H_lambda
identify     Riesz bounds, identification matrices, coefficient recovery
experiments  scenario runners and the density sweep
cli          command-line entry point (``python -m opident``)
"""

from . import errors, experiments, identify, lattice, opcalc, tfcore
from .errors import OpIdentError

__version__ = "0.1.0"

__all__ = ["errors", "experiments", "identify", "lattice", "opcalc", "tfcore", "OpIdentError", "__version__"]
