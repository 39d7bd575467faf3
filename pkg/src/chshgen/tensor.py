"""States, measurement bases and Born-rule joint distributions for d in {2, 3}.

Bases are stored row-wise: ``basis.vectors[u]`` is the ket for outcome ``u``.
Inner products are conjugate-linear in the bra.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SUPPORTED_DIMS = (2, 3)
STRUCT_TOL = 1e-12
OMEGA = np.exp(2j * np.pi / 3)


def _check_dim(dim):
    if dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {dim!r}; expected 2 or 3")


def _check_bit(name, value):
    if value not in (0, 1):
        raise ValueError(f"{name} must be 0 or 1, got {value!r}")


def _frozen(arr):
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Ket:
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1:
            raise ValueError("ket amplitudes must be one-dimensional")
        _check_dim(amps.shape[0])
        if not np.all(np.isfinite(amps)):
            raise ValueError("ket amplitudes must be finite")
        if abs(np.vdot(amps, amps).real - 1.0) > STRUCT_TOL:
            raise ValueError("ket is not normalised")
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def inner(self, other: "Ket") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    vectors: np.ndarray

    def __post_init__(self):
        vecs = _frozen(self.vectors)
        if vecs.ndim != 2 or vecs.shape[0] != vecs.shape[1]:
            raise ValueError("basis must be a square array of row vectors")
        _check_dim(vecs.shape[0])
        if not np.all(np.isfinite(vecs)):
            raise ValueError("basis amplitudes must be finite")
        gram = vecs.conj() @ vecs.T
        if np.max(np.abs(gram - np.eye(vecs.shape[0]))) > STRUCT_TOL:
            raise ValueError("basis vectors are not orthonormal")
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def kets(self) -> tuple[Ket, ...]:
        return tuple(Ket(v) for v in self.vectors)

    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure state on C^d (x) C^d; ``amps[j * d + k]`` is the |j>|k> amplitude."""

    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps)
        if amps.ndim != 1:
            raise ValueError("state amplitudes must be one-dimensional")
        dim = int(round(np.sqrt(amps.shape[0])))
        if dim * dim != amps.shape[0]:
            raise ValueError("state length must be a perfect square")
        _check_dim(dim)
        if abs(np.vdot(amps, amps).real - 1.0) > STRUCT_TOL:
            raise ValueError("state is not normalised")
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return int(round(np.sqrt(self.amps.shape[0])))

    def matrix(self) -> np.ndarray:
        return self.amps.reshape(self.dim, self.dim)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    p: np.ndarray

    @property
    def dim(self) -> int:
        return self.p.shape[0]

    def total(self) -> float:
        return float(self.p.sum())


def max_entangled(dim: int) -> BipartiteState:
    """(1/sqrt(d)) sum_j |j>|j>."""
    _check_dim(dim)
    return BipartiteState(np.eye(dim).ravel() / np.sqrt(dim))


def alice_vectors(dim, x):
    """Row-wise basis matrix of Alice's measurement for question ``x``."""
    _check_dim(dim)
    _check_bit("x", x)
    if x == 0:
        return np.eye(dim, dtype=np.complex128)
    if dim == 2:
        return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    w = OMEGA
    return np.array([[1, 1, 1], [1, w, w * w], [1, w * w, w]]) / np.sqrt(3)


def bob_vectors(dim, y, theta0, theta1):
    """Bob's basis for question ``y``, vectorised over angle arrays.

    Returns an array of shape ``broadcast(theta0, theta1).shape + (dim, dim)``.
    For dim 3 the outcome-2 ket carries a minus sign on |2>, which is what
    makes the triple orthonormal.
    """
    _check_dim(dim)
    _check_bit("y", y)
    t0, t1 = np.broadcast_arrays(np.asarray(theta0, float), np.asarray(theta1, float))
    out = np.zeros(t0.shape + (dim, dim))
    if dim == 2:
        t = t0 if y == 0 else t1
        c, s = np.cos(t), np.sin(t)
        out[..., 0, 0], out[..., 0, 1] = c, s
        out[..., 1, 0], out[..., 1, 1] = s, -c
        return out.astype(np.complex128)
    # y=1 swaps the roles of the two angles
    a, b = (t0, t1) if y == 0 else (t1, t0)
    ca, sa, cb, sb = np.cos(a), np.sin(a), np.cos(b), np.sin(b)
    out[..., 0, 0], out[..., 0, 1], out[..., 0, 2] = ca, sa * cb, sa * sb
    out[..., 1, 0], out[..., 1, 1], out[..., 1, 2] = sa, -ca * cb, -ca * sb
    out[..., 2, 1], out[..., 2, 2] = sb, -cb
    return out.astype(np.complex128)


def alice_basis_d2(x: int) -> OrthonormalBasis:
    return OrthonormalBasis(alice_vectors(2, x))


def alice_basis_d3(x: int) -> OrthonormalBasis:
    return OrthonormalBasis(alice_vectors(3, x))


def bob_basis_d2(y: int, theta0: float, theta1: float) -> OrthonormalBasis:
    return OrthonormalBasis(bob_vectors(2, y, theta0, theta1))


def bob_basis_d3(y: int, theta0: float, theta1: float) -> OrthonormalBasis:
    return OrthonormalBasis(bob_vectors(3, y, theta0, theta1))


def alice_basis(dim: int, x: int) -> OrthonormalBasis:
    return OrthonormalBasis(alice_vectors(dim, x))


def bob_basis(dim: int, y: int, theta0: float, theta1: float) -> OrthonormalBasis:
    return OrthonormalBasis(bob_vectors(dim, y, theta0, theta1))


def born_table(state_matrix, a_vecs, b_vecs):
    """|<a_u (x) b_v|psi>|^2 for row-wise bases; broadcasts over leading axes."""
    amp = np.einsum("...uj,jk,...vk->...uv", a_vecs.conj(), state_matrix, b_vecs.conj())
    return amp.real**2 + amp.imag**2


def joint_distribution(
    state: BipartiteState, A: OrthonormalBasis, B: OrthonormalBasis
) -> JointDistribution:
    if not state.dim == A.dim == B.dim:
        raise ValueError(
            f"dimension mismatch: state {state.dim}, Alice {A.dim}, Bob {B.dim}"
        )
    p = born_table(state.matrix(), A.vectors, B.vectors)
    p.setflags(write=False)
    return JointDistribution(p)
