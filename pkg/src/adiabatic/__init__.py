"""Spectra of Dirac operators on flat tori under adiabatic collapse of a linear flow."""
from .errors import AdiabaticError, Ambiguous, NotHermitian, ParseError, ZeroVector
from .torus import FlowSpec, mode_matrix, mode_spectrum, is_basic_mode, basic_spectrum
from .collapse import CollapseGrid, sweep, classify, verify_theorem
from .perturb import spectral_distance
from .grid_fd import GridSpec, assemble

__version__ = "0.1.0"

__all__ = [
    "AdiabaticError", "Ambiguous", "NotHermitian", "ParseError", "ZeroVector",
    "FlowSpec", "mode_matrix", "mode_spectrum", "is_basic_mode", "basic_spectrum",
    "CollapseGrid", "sweep", "classify", "verify_theorem",
    "spectral_distance", "GridSpec", "assemble",
]
