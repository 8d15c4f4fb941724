"""Desk-scale laboratory for fingerprint-state equality protocols,
compression-based state-complexity estimates, and demon entropy ledgers."""

__version__ = "0.1.0"

from .bits import BitString
from .codes import LinearCode, hadamard_code, simplex_code, concatenated_code
from .compressor import METHOD_ID, kcl_upper
from .errors import CapError, DecodeError, InputError, QkolabError
from .states import DensityMatrix, StateVector

__all__ = [
    "BitString",
    "CapError",
    "DecodeError",
    "DensityMatrix",
    "InputError",
    "LinearCode",
    "METHOD_ID",
    "QkolabError",
    "StateVector",
    "concatenated_code",
    "hadamard_code",
    "kcl_upper",
    "simplex_code",
    "__version__",
]
