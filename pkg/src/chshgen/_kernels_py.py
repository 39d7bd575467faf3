"""numpy implementation of the sweep kernels (fallback when the extension is absent)."""
import numpy as np


def scoring_mass(cells, gbits):
    cells = np.ascontiguousarray(cells, dtype=np.float64)
    gbits = np.ascontiguousarray(gbits, dtype=np.uint8)
    if gbits.shape[1] != cells.shape[2]:
        raise ValueError("cell count mismatch between distributions and tables")
    out = np.zeros(cells.shape[:2] + (gbits.shape[0],))
    for c in range(cells.shape[2]):
        # adding 0.0 for unselected cells leaves the accumulator unchanged
        out += cells[:, :, c, None] * gbits[None, None, :, c]
    return out


def win_surfaces(mass, fbits):
    if mass.shape[0] != 4 or len(fbits) != 4:
        raise ValueError("expected four questions")
    c = [mass[q] if fbits[q] else 1.0 - mass[q] for q in range(4)]
    return (((c[0] + c[1]) + c[2]) + c[3]) / 4.0


def max_ties(surfaces, tol):
    maxes = surfaces.max(axis=0)
    cols, rows = np.nonzero((surfaces >= maxes - tol).T)
    offsets = np.zeros(surfaces.shape[1] + 1, dtype=np.int64)
    np.cumsum(np.bincount(cols, minlength=surfaces.shape[1]), out=offsets[1:])
    return maxes, offsets, rows.astype(np.int64)
