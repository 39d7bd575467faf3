"""Generalised CHSH games on maximally entangled qubit and qutrit pairs."""
from .funcs import AND, EMBEDDED_XOR, OR, XNOR, XOR, TruthTable2, TruthTable3, restrict_g3
from .game import GameSpec, chsh_closed_form, win_probability
from .kernels import BACKEND
from .sweep import AngleGridPoint, SweepResult, WinProbSurface, compute_surface, find_max, sweep_all

__version__ = "0.1.0"

__all__ = [
    "AND",
    "BACKEND",
    "EMBEDDED_XOR",
    "OR",
    "XNOR",
    "XOR",
    "AngleGridPoint",
    "GameSpec",
    "SweepResult",
    "TruthTable2",
    "TruthTable3",
    "WinProbSurface",
    "chsh_closed_form",
    "compute_surface",
    "find_max",
    "restrict_g3",
    "sweep_all",
    "win_probability",
]
