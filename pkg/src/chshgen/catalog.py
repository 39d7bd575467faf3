"""Classification artifacts built from the grid sweeps.

Probabilities are grouped by a decimal key. The default ``truncate`` mode cuts
toward zero (0.67678 -> 0.67), which is how the published tables present their
values. ``half_up`` rounds half away from zero. Keys are carried internally as
integers in units of ``10**-decimals`` to keep grouping exact.
"""
from __future__ import annotations

import math
from functools import lru_cache
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .funcs import (
    TruthTable2,
    TruthTable3,
    enumerate_f2,
    enumerate_g3,
    restrict_g3,
)
from .game import GameSpec
from .sweep import (
    GRID_SIZE,
    AngleGridPoint,
    SweepResult,
    compute_surface,
    function_pairs,
    g_column,
    g_universe,
    surfaces_for_f,
    sweep_table,
)

ROUNDING_MODES = ("truncate", "half_up")
DEFAULT_DECIMALS = 2
DEFAULT_MODE = "truncate"
D3_THRESHOLD = 0.44
# absorbs representation error such as 0.4999999999999999 before flooring
_QUANT_GUARD = 1e-9


def _check_mode(mode):
    if mode not in ROUNDING_MODES:
        raise ValueError(f"rounding mode must be one of {ROUNDING_MODES}, got {mode!r}")


def quantize_units(x, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE):
    """Key of ``x`` in integer units of 10**-decimals; works on scalars and arrays."""
    _check_mode(mode)
    scale = 10.0**decimals
    a = np.abs(x) * scale
    q = np.floor(a + (0.5 if mode == "half_up" else 0.0) + _QUANT_GUARD)
    q = np.sign(x) * q
    if np.ndim(q) == 0:
        return int(q)
    return q.astype(np.int64)


def quantize(x: float, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> float:
    return units_to_value(quantize_units(x, decimals, mode), decimals)


def units_to_value(units: int, decimals: int) -> float:
    return round(units / 10**decimals, decimals)


def same_key(a: float, b: float, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> bool:
    return quantize_units(a, decimals, mode) == quantize_units(b, decimals, mode)


# --- equivalence classes ----------------------------------------------------


class TupleMembers(Sequence):
    """Lazy view of ((f, g), point) members backed by index arrays."""

    def __init__(self, pairs, pair_idx, flat_idx):
        self._pairs = pairs
        self.pair_idx = pair_idx
        self.flat_idx = flat_idx

    def __len__(self):
        return len(self.pair_idx)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return self._pairs[int(self.pair_idx[i])], AngleGridPoint.from_flat(self.flat_idx[i])

    def __contains__(self, item):
        pair, point = item
        try:
            pi = self._pairs.index(pair)
        except ValueError:
            return False
        return bool(np.any((self.pair_idx == pi) & (self.flat_idx == point.flat)))


@dataclass(frozen=True)
class EquivalenceClass:
    kind: int
    key: float
    members: Sequence = field(compare=False)

    def __len__(self):
        return len(self.members)


def _group(keys: np.ndarray) -> list[tuple[int, np.ndarray]]:
    """(key, positions) for each distinct key, keys descending, positions ascending."""
    order = np.argsort(-keys, kind="stable")
    sorted_keys = keys[order]
    uniq, starts = np.unique(-sorted_keys, return_index=True)
    bounds = list(starts) + [len(keys)]
    return [(int(-u), order[bounds[i] : bounds[i + 1]]) for i, u in enumerate(uniq)]


def basis_classes(spec: GameSpec, decimals: int = 1, mode: str = DEFAULT_MODE) -> list[EquivalenceClass]:
    """Kind 1: grid points of one (f, g) grouped by their probability key."""
    values = compute_surface(spec).values.ravel()
    return [
        EquivalenceClass(1, units_to_value(k, decimals), tuple(AngleGridPoint.from_flat(p) for p in pos))
        for k, pos in _group(quantize_units(values, decimals, mode))
    ]


def pair_classes(dim: int, point: AngleGridPoint, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> list[EquivalenceClass]:
    """Kind 2: function pairs grouped by probability at a fixed Bob setting."""
    pairs = function_pairs(dim)
    cols = [g_column(dim, g) for g in g_universe(dim) if not g.is_constant]
    values = np.concatenate([surfaces_for_f(dim, f)[point.flat, cols] for f in enumerate_f2()])
    return [
        EquivalenceClass(2, units_to_value(k, decimals), tuple(pairs[i] for i in pos))
        for k, pos in _group(quantize_units(values, decimals, mode))
    ]


def tuple_classes(
    dim: int,
    decimals: int = DEFAULT_DECIMALS,
    mode: str = DEFAULT_MODE,
    pairs: Sequence | None = None,
) -> list[EquivalenceClass]:
    """Kind 3: (pair, grid point) tuples grouped by probability.

    ``pairs`` restricts the domain (e.g. to ``max_stratum_pairs(3)``); by default
    every non-constant pair of the dimension is used.
    """
    pairs = list(function_pairs(dim) if pairs is None else pairs)
    by_f: dict[TruthTable2, list[int]] = {}
    for i, (f, _) in enumerate(pairs):
        by_f.setdefault(f, []).append(i)
    buckets: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}
    for f, idxs in by_f.items():
        block = surfaces_for_f(dim, f)
        cols = [g_column(dim, pairs[i][1]) for i in idxs]
        # (pairs, points) so positions sort pair-major
        keys = quantize_units(np.ascontiguousarray(block[:, cols].T).ravel(), decimals, mode)
        for k, pos in _group(keys):
            pidx, flat = np.divmod(pos, GRID_SIZE**2)
            buckets.setdefault(k, []).append((np.asarray(idxs)[pidx], flat))
    out = []
    for k in sorted(buckets, reverse=True):
        pi = np.concatenate([b[0] for b in buckets[k]])
        fl = np.concatenate([b[1] for b in buckets[k]])
        order = np.lexsort((fl, pi))
        out.append(EquivalenceClass(3, units_to_value(k, decimals), TupleMembers(pairs, pi[order], fl[order])))
    return out


# --- game-level strata ------------------------------------------------------


@lru_cache(maxsize=None)
def global_max(dim: int) -> float:
    table = sweep_table(dim)
    cols = [g_column(dim, g) for g in g_universe(dim) if not g.is_constant]
    return float(table.maxes[:, cols].max())


def max_stratum_pairs(dim: int, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE):
    """Pairs whose grid maximum shares the key of the dimension's global maximum."""
    table = sweep_table(dim)
    top = quantize_units(global_max(dim), decimals, mode)
    return [(f, g) for f, g in function_pairs(dim) if quantize_units(table.max_value(f, g), decimals, mode) == top]


@dataclass(frozen=True)
class Table1:
    decimals: int
    mode: str
    groups: dict  # key -> list of (f, g) pairs, keys descending
    results: tuple[SweepResult, ...]

    @property
    def counts(self) -> dict:
        return {k: len(v) for k, v in self.groups.items()}


def build_table1(decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> Table1:
    table = sweep_table(2)
    results = tuple(table.result(f, g) for f, g in function_pairs(2))
    groups: dict[float, list] = {}
    for r in results:
        groups.setdefault(quantize(r.max_value, decimals, mode), []).append((r.spec.f, r.spec.g))
    groups = {k: groups[k] for k in sorted(groups, reverse=True)}
    return Table1(decimals, mode, groups, results)


def build_game2_max(decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> list[SweepResult]:
    table = sweep_table(3)
    return [table.result(f, g) for f, g in max_stratum_pairs(3, decimals, mode)]


# --- distinguishers ---------------------------------------------------------


@dataclass(frozen=True)
class DistinguisherRecord:
    f: TruthTable2
    g3: TruthTable3
    g2p: TruthTable2
    eval_point: AngleGridPoint
    p_d2: float
    p_d3: float
    gap: float
    class_tag: str
    # which game's argmax fixed eval_point, and the other game's spread over that tie-set
    argmax_dim: int
    tie_size: int
    other_min: float
    other_max: float

    def to_dict(self) -> dict:
        return {
            "class": self.class_tag,
            "f": self.f.to_list(),
            "g2p": self.g2p.to_list(),
            "g3": self.g3.to_list(),
            "eval_point": [self.eval_point.i0, self.eval_point.i1],
            "eval_angles": list(self.eval_point.label()),
            "p_d2": self.p_d2,
            "p_d3": self.p_d3,
            "gap": self.gap,
            "argmax_dim": self.argmax_dim,
            "tie_size": self.tie_size,
            "other_min": self.other_min,
            "other_max": self.other_max,
        }


@lru_cache(maxsize=64)
def _surfaces(dim, f):
    out = surfaces_for_f(dim, f)
    out.setflags(write=False)
    return out


def _record(f, g3, tag, argmax_dim):
    g2p = restrict_g3(g3)
    t2, t3 = sweep_table(2), sweep_table(3)
    s2 = _surfaces(2, f)[:, g_column(2, g2p)]
    s3 = _surfaces(3, f)[:, g_column(3, g3)]
    if argmax_dim == 2:
        ties, own, other = t2.tie_indices(f, g2p), s2, s3
    else:
        ties, own, other = t3.tie_indices(f, g3), s3, s2
    k = int(ties[0])
    spread = other[ties]
    p_d2, p_d3 = float(s2[k]), float(s3[k])
    return DistinguisherRecord(
        f, g3, g2p, AngleGridPoint.from_flat(k), p_d2, p_d3, abs(p_d2 - p_d3),
        tag, argmax_dim, len(ties), float(spread.min()), float(spread.max()),
    )


def classify_pair(f: TruthTable2, g3: TruthTable3, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> str:
    """D2 if (f, g3) is in Game-2's top stratum, else D1 if (f, g2') is in Game-1's, else D3."""
    t2, t3 = sweep_table(2), sweep_table(3)
    if quantize_units(t3.max_value(f, g3), decimals, mode) == quantize_units(global_max(3), decimals, mode):
        return "D2"
    if quantize_units(t2.max_value(f, restrict_g3(g3)), decimals, mode) == quantize_units(global_max(2), decimals, mode):
        return "D1"
    return "D3"


def evaluate_pair(f: TruthTable2, g3: TruthTable3, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> DistinguisherRecord:
    """Distinguisher record of (f, g3) under its class's evaluation rule (no threshold)."""
    tag = classify_pair(f, g3, decimals, mode)
    if tag == "D1":
        return _record(f, g3, tag, 2)
    if tag == "D2":
        return _record(f, g3, tag, 3)
    p1 = sweep_table(2).max_value(f, restrict_g3(g3))
    p2 = sweep_table(3).max_value(f, g3)
    # equal maxima go to Game-1
    return _record(f, g3, tag, 2 if p1 >= p2 - 1e-12 else 3)


def _catalog(tag, decimals, mode, keep=lambda r: True):
    out = []
    for f in enumerate_f2():
        for g3 in enumerate_g3():
            if classify_pair(f, g3, decimals, mode) != tag:
                continue
            rec = evaluate_pair(f, g3, decimals, mode)
            if keep(rec):
                out.append(rec)
    out.sort(key=lambda r: -r.gap)  # stable: ties keep enumeration order
    return out


def build_D1(decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> list[DistinguisherRecord]:
    return _catalog("D1", decimals, mode)


def build_D2(decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> list[DistinguisherRecord]:
    return _catalog("D2", decimals, mode)


def build_D3(threshold: float = D3_THRESHOLD, decimals: int = DEFAULT_DECIMALS, mode: str = DEFAULT_MODE) -> list[DistinguisherRecord]:
    if not (0.0 <= threshold <= 1.0) or math.isnan(threshold):
        raise ValueError(f"threshold must lie in [0, 1], got {threshold!r}")
    return _catalog("D3", decimals, mode, keep=lambda r: r.gap > threshold)
