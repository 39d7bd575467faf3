"""Quantum winning probability of the generalised CHSH games.

Questions are uniform over {0,1}^2. Alice measures in the standard basis (x=0)
or the Hadamard / Fourier basis (x=1); Bob measures in the angle-parameterised
basis selected by y. Answer index equals basis-vector index. The pair wins when
``g(a, b) == f(x, y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .funcs import TruthTable2, TruthTable3
from .tensor import alice_basis, bob_basis, joint_distribution, max_entangled

QUESTIONS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class GameSpec:
    """A game instance: shared-state dimension and the (f, g) pair.

    A constant ``g`` is accepted for dim 2 so restrictions of three-valued
    functions can be evaluated; for dim 3 ``g`` must be non-constant.
    """

    dim: int
    f: TruthTable2
    g: TruthTable2 | TruthTable3

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"unsupported dimension {self.dim!r}")
        if not isinstance(self.f, TruthTable2):
            raise ValueError("f must be a TruthTable2")
        if self.f.is_constant:
            raise ValueError(f"f must be non-constant, got {self.f}")
        expected = TruthTable2 if self.dim == 2 else TruthTable3
        if not isinstance(self.g, expected):
            raise ValueError(f"dim {self.dim} needs g as {expected.__name__}")
        if self.dim == 3 and self.g.is_constant:
            raise ValueError(f"g must be non-constant for dim 3, got {self.g}")

    def label(self) -> str:
        return f"d={self.dim} f={self.f} g={self.g}"


def conditional_win(spec: GameSpec, theta0: float, theta1: float, s: int, t: int) -> float:
    """Pr(win | x=s, y=t): Born mass on the cells where g(u, v) == f(s, t)."""
    if (s, t) not in QUESTIONS:
        raise ValueError(f"questions must be bits, got ({s!r}, {t!r})")
    dist = joint_distribution(
        max_entangled(spec.dim),
        alice_basis(spec.dim, s),
        bob_basis(spec.dim, t, theta0, theta1),
    )
    target = spec.f(s, t)
    total = 0.0
    d = spec.dim
    for u in range(d):
        for v in range(d):
            if spec.g(u, v) == target:
                total += float(dist.p[u, v])
    return total


def win_probability(spec: GameSpec, theta0: float, theta1: float) -> float:
    c = [conditional_win(spec, theta0, theta1, s, t) for s, t in QUESTIONS]
    return (((c[0] + c[1]) + c[2]) + c[3]) / 4.0


def chsh_closed_form(theta0: float, theta1: float) -> float:
    """Analytic CHSH value for Bob's angles, used as an independent oracle."""
    return 0.25 * (
        math.cos(theta0) ** 2
        + math.cos(theta1) ** 2
        + 0.5 * (1 + math.sin(2 * theta0))
        + 0.5 * (1 - math.sin(2 * theta1))
    )
