import os
import subprocess
import sys

import numpy as np
import pytest

from chshgen import _kernels_py, kernels

compiled = pytest.importorskip("chshgen._kernels", reason="extension not built")


def _inputs(seed, q=4, k=50, cells=9, g=20):
    rng = np.random.default_rng(seed)
    p = rng.random((q, k, cells))
    p /= p.sum(axis=2, keepdims=True)
    gbits = rng.integers(0, 2, size=(g, cells)).astype(np.uint8)
    return p, gbits


@pytest.mark.parametrize("seed", range(5))
def test_backends_bit_identical(seed):
    cells, gbits = _inputs(seed)
    m_py = _kernels_py.scoring_mass(cells, gbits)
    m_c = compiled.scoring_mass(cells, gbits)
    assert np.array_equal(m_py, m_c)
    fbits = np.array([0, 1, 1, 0], dtype=np.uint8)
    s_py = _kernels_py.win_surfaces(m_py, fbits)
    s_c = compiled.win_surfaces(m_c, fbits)
    assert np.array_equal(s_py, s_c)
    for a, b in zip(_kernels_py.max_ties(s_py, 1e-9), compiled.max_ties(s_c, 1e-9)):
        assert np.array_equal(a, b)


def test_max_ties_layout():
    s = np.array([[1.0, 0.2], [0.5, 0.2], [1.0, 0.1]])
    for mod in (_kernels_py, compiled):
        maxes, offsets, idx = mod.max_ties(s, 1e-9)
        assert maxes.tolist() == [1.0, 0.2]
        assert offsets.tolist() == [0, 2, 4]
        assert idx.tolist() == [0, 2, 0, 1]


def test_pure_python_switch():
    env = dict(os.environ, CHSHGEN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from chshgen import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("compiled", "python")
