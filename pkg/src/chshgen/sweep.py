"""Winning probability over the 64x64 grid of Bob angles (multiples of pi/32).

Grid point ``(i0, i1)`` means ``theta0 = i0*pi/32`` and ``theta1 = i1*pi/32``. The
flat index ``k = 64*i0 + i1`` orders points lexicographically, and tie-sets are
always reported in that order.
"""
from __future__ import annotations

import csv
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .funcs import TruthTable2, TruthTable3, all_tables2, enumerate_f2, enumerate_g3
from .game import QUESTIONS, GameSpec
from .tensor import alice_vectors, bob_vectors, born_table, max_entangled

GRID_SIZE = 64
GRID_STEP = math.pi / 32
TIE_TOL = 1e-9


def format_angle(index: int) -> str:
    """Grid index as a reduced multiple of pi, e.g. 60 -> ``"15pi/8"``."""
    fr = Fraction(index, 32)
    if fr == 0:
        return "0"
    num = "pi" if fr.numerator == 1 else f"{fr.numerator}pi"
    return num if fr.denominator == 1 else f"{num}/{fr.denominator}"


_ANGLE_RE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?pi\s*(?:/\s*(\d+))?\s*$")


def parse_angle(text: str) -> float:
    """Parse ``"15pi/8"``, ``"pi/32"``, ``"2*pi"`` or a plain number of radians."""
    m = _ANGLE_RE.match(text)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"bad angle {text!r}")
        return num * math.pi / den
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"bad angle {text!r}") from None
    if not math.isfinite(value):
        raise ValueError(f"bad angle {text!r}")
    return value


def angle_to_index(text: str) -> int:
    """Grid index of an exact multiple of pi/32 given as text."""
    m = _ANGLE_RE.match(text)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"bad angle {text!r}")
        fr = Fraction(num, den) * 32
    elif text.strip() == "0":
        fr = Fraction(0)
    else:
        raise ValueError(f"angle {text!r} is not a multiple of pi/32")
    if fr.denominator != 1:
        raise ValueError(f"angle {text!r} is not a multiple of pi/32")
    return int(fr) % GRID_SIZE


@dataclass(frozen=True, order=True)
class AngleGridPoint:
    i0: int
    i1: int

    def __post_init__(self):
        for i in (self.i0, self.i1):
            if not (isinstance(i, (int, np.integer)) and 0 <= i < GRID_SIZE):
                raise ValueError(f"grid index {i!r} outside [0, {GRID_SIZE - 1}]")
        object.__setattr__(self, "i0", int(self.i0))
        object.__setattr__(self, "i1", int(self.i1))

    @classmethod
    def from_flat(cls, k: int) -> "AngleGridPoint":
        return cls(*divmod(int(k), GRID_SIZE))

    @classmethod
    def parse(cls, theta0: str, theta1: str) -> "AngleGridPoint":
        return cls(angle_to_index(theta0), angle_to_index(theta1))

    @property
    def flat(self) -> int:
        return self.i0 * GRID_SIZE + self.i1

    @property
    def theta0(self) -> float:
        return self.i0 * GRID_STEP

    @property
    def theta1(self) -> float:
        return self.i1 * GRID_STEP

    def label(self) -> tuple[str, str]:
        return format_angle(self.i0), format_angle(self.i1)

    def __str__(self):
        return "(%s, %s)" % self.label()


@dataclass(frozen=True, eq=False)
class WinProbSurface:
    spec: GameSpec
    values: np.ndarray  # (64, 64), values[i0, i1]

    def at(self, point: AngleGridPoint) -> float:
        return float(self.values[point.i0, point.i1])


@dataclass(frozen=True)
class SweepResult:
    spec: GameSpec
    max_value: float
    argmax: tuple[AngleGridPoint, ...]

    def __post_init__(self):
        if not self.argmax:
            raise ValueError("argmax tie-set cannot be empty")

    @property
    def canonical_argmax(self) -> AngleGridPoint:
        return self.argmax[0]

    def to_dict(self, max_listed: int | None = 64) -> dict:
        """Plain-data view; tie-sets larger than ``max_listed`` are reported by size only."""
        out = {
            "dim": self.spec.dim,
            "f": self.spec.f.to_list(),
            "g": self.spec.g.to_list(),
            "max_value": self.max_value,
            "canonical_argmax": [self.canonical_argmax.i0, self.canonical_argmax.i1],
            "tie_size": len(self.argmax),
        }
        if max_listed is None or len(self.argmax) <= max_listed:
            out["argmax"] = [[p.i0, p.i1] for p in self.argmax]
        return out


# --- grid tensors -----------------------------------------------------------


@lru_cache(maxsize=None)
def grid_angles() -> tuple[np.ndarray, np.ndarray]:
    """Flattened (theta0, theta1) arrays over the grid, lexicographic order."""
    idx = np.arange(GRID_SIZE) * GRID_STEP
    t0, t1 = np.meshgrid(idx, idx, indexing="ij")
    return t0.ravel(), t1.ravel()


@lru_cache(maxsize=None)
def cell_distributions(dim: int) -> np.ndarray:
    """Born joint distributions, shape (4 questions, 4096 points, dim*dim cells)."""
    t0, t1 = grid_angles()
    psi = max_entangled(dim).matrix()
    out = np.empty((4, GRID_SIZE**2, dim * dim))
    for q, (s, t) in enumerate(QUESTIONS):
        p = born_table(psi, alice_vectors(dim, s), bob_vectors(dim, t, t0, t1))
        out[q] = p.reshape(GRID_SIZE**2, dim * dim)
    out.setflags(write=False)
    return out


def g_universe(dim: int) -> tuple:
    """Scoring tables tracked for each dim: all 16 for dim 2 (restrictions may be
    constant), the 510 non-constant ones for dim 3."""
    if dim == 2:
        return all_tables2()
    if dim == 3:
        return enumerate_g3()
    raise ValueError(f"unsupported dimension {dim!r}")


def g_column(dim: int, g) -> int:
    return g.code if dim == 2 else g.code - 1


@lru_cache(maxsize=None)
def scoring_mass(dim: int) -> np.ndarray:
    """Probability that g(a, b) = 1, shape (4, 4096, len(g_universe(dim)))."""
    gbits = np.array([g.bits for g in g_universe(dim)], dtype=np.uint8)
    out = kernels.scoring_mass(cell_distributions(dim), gbits)
    out.setflags(write=False)
    return out


def _fbits(f: TruthTable2) -> np.ndarray:
    return np.array(f.bits, dtype=np.uint8)


def surfaces_for_f(dim: int, f: TruthTable2) -> np.ndarray:
    """Win surfaces for ``f`` against every table in ``g_universe(dim)``: (4096, G)."""
    return kernels.win_surfaces(scoring_mass(dim), _fbits(f))


def compute_surface(spec: GameSpec) -> WinProbSurface:
    gbits = np.array([spec.g.bits], dtype=np.uint8)
    mass = kernels.scoring_mass(cell_distributions(spec.dim), gbits)
    values = kernels.win_surfaces(mass, _fbits(spec.f)).reshape(GRID_SIZE, GRID_SIZE)
    values.setflags(write=False)
    return WinProbSurface(spec, values)


def find_max(surface: WinProbSurface, tie_tol: float = TIE_TOL) -> SweepResult:
    if tie_tol < 0:
        raise ValueError("tie tolerance must be non-negative")
    flat = np.ascontiguousarray(surface.values.reshape(-1, 1))
    maxes, offsets, idx = kernels.max_ties(flat, float(tie_tol))
    points = tuple(AngleGridPoint.from_flat(k) for k in idx[offsets[0] : offsets[1]])
    return SweepResult(surface.spec, float(maxes[0]), points)


# --- full sweeps ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SweepTable:
    """Column maxima and tie-sets for every (f, g) of one dimension.

    Row ``fi`` follows ``enumerate_f2()``; column ``j`` follows ``g_universe(dim)``.
    """

    dim: int
    tie_tol: float
    maxes: np.ndarray  # (14, G)
    offsets: np.ndarray  # (14, G+1)
    ties: tuple[np.ndarray, ...]  # per f, flat grid indices

    def max_value(self, f: TruthTable2, g) -> float:
        return float(self.maxes[f.code - 1, g_column(self.dim, g)])

    def tie_indices(self, f: TruthTable2, g) -> np.ndarray:
        fi, j = f.code - 1, g_column(self.dim, g)
        return self.ties[fi][self.offsets[fi, j] : self.offsets[fi, j + 1]]

    def result(self, f: TruthTable2, g) -> SweepResult:
        pts = tuple(AngleGridPoint.from_flat(k) for k in self.tie_indices(f, g))
        return SweepResult(GameSpec(self.dim, f, g), self.max_value(f, g), pts)


def _sweep_one_f(dim, f, tie_tol):
    return kernels.max_ties(surfaces_for_f(dim, f), tie_tol)


def build_sweep_table(dim: int, tie_tol: float = TIE_TOL, threads: int = 1) -> SweepTable:
    fs = enumerate_f2()
    scoring_mass(dim)  # materialise the shared tensor before fanning out
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda f: _sweep_one_f(dim, f, tie_tol), fs))
    else:
        parts = [_sweep_one_f(dim, f, tie_tol) for f in fs]
    maxes = np.stack([p[0] for p in parts])
    offsets = np.stack([p[1] for p in parts])
    for arr in (maxes, offsets):
        arr.setflags(write=False)
    return SweepTable(dim, tie_tol, maxes, offsets, tuple(p[2] for p in parts))


_TABLES: dict[tuple[int, float], SweepTable] = {}


def sweep_table(dim: int, tie_tol: float = TIE_TOL, threads: int = 1) -> SweepTable:
    """Cached ``build_sweep_table``; ``threads`` only matters on the first build."""
    key = (dim, float(tie_tol))
    if key not in _TABLES:
        _TABLES[key] = build_sweep_table(dim, tie_tol, threads)
    return _TABLES[key]


def function_pairs(dim: int) -> list[tuple[TruthTable2, TruthTable2 | TruthTable3]]:
    """All (f, g) pairs with non-constant f and g, f-major enumeration order."""
    gs = [g for g in g_universe(dim) if not g.is_constant]
    return [(f, g) for f in enumerate_f2() for g in gs]


def sweep_all(dim: int, tie_tol: float = TIE_TOL, threads: int = 1, cache: bool = True) -> list[SweepResult]:
    if dim not in (2, 3):
        raise ValueError(f"unsupported dimension {dim!r}")
    if cache and threads <= 1:
        table = sweep_table(dim, tie_tol)
    else:
        table = build_sweep_table(dim, tie_tol, threads)
    return [table.result(f, g) for f, g in function_pairs(dim)]


# --- export -----------------------------------------------------------------


def spec_metadata(spec: GameSpec) -> dict:
    return {"dim": spec.dim, "f": spec.f.to_list(), "g": spec.g.to_list()}


def write_surface(surface: WinProbSurface, csv_path, json_path=None) -> None:
    """64 rows (theta0 index) x 64 columns (theta1 index), 17 significant digits."""
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in surface.values:
            writer.writerow([repr(float(v)) for v in row])
    if json_path is not None:
        best = find_max(surface)
        meta = {
            **spec_metadata(surface.spec),
            "rows": "theta0 = i*pi/32, i = 0..63",
            "columns": "theta1 = j*pi/32, j = 0..63",
            "max_value": best.max_value,
            "argmax": [list(p.label()) for p in best.argmax],
        }
        with open(json_path, "w") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
