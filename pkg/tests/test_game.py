import math

import numpy as np
import pytest

from chshgen.funcs import AND, EMBEDDED_XOR, PROJ_X, XOR, TruthTable2, TruthTable3
from chshgen.game import GameSpec, chsh_closed_form, conditional_win, win_probability


def test_chsh_optimum():
    assert win_probability(GameSpec(2, AND, XOR), math.pi / 8, 15 * math.pi / 8) == pytest.approx(
        (2 + math.sqrt(2)) / 4, abs=1e-12
    )


def test_closed_form_on_random_angles():
    rng = np.random.default_rng(1000)
    spec = GameSpec(2, AND, XOR)
    for t0, t1 in rng.uniform(0, 2 * math.pi, size=(1000, 2)):
        assert abs(win_probability(spec, t0, t1) - chsh_closed_form(t0, t1)) <= 1e-12


def test_game2_example_point():
    v = win_probability(GameSpec(3, AND, EMBEDDED_XOR), 17 * math.pi / 16, math.pi / 16)
    assert v == pytest.approx(0.7623669503665589, abs=1e-12)


def test_projection_scores_half():
    assert win_probability(GameSpec(2, XOR, PROJ_X), 0.4, 2.1) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("dim,g", [(2, XOR), (3, EMBEDDED_XOR)])
def test_conditional_wins_are_probabilities(dim, g):
    spec = GameSpec(dim, AND, g)
    for s in (0, 1):
        for t in (0, 1):
            c = conditional_win(spec, 0.3, 1.9, s, t)
            assert 0.0 <= c <= 1.0


def test_conditional_win_validates_questions():
    with pytest.raises(ValueError):
        conditional_win(GameSpec(2, AND, XOR), 0, 0, 2, 0)


@pytest.mark.parametrize(
    "args",
    [
        (4, AND, XOR),
        (2, TruthTable2((0, 0, 0, 0)), XOR),
        (2, AND, EMBEDDED_XOR),
        (3, AND, XOR),
        (3, AND, TruthTable3((1,) * 9)),
        (2, EMBEDDED_XOR, XOR),
    ],
)
def test_spec_validation(args):
    with pytest.raises(ValueError):
        GameSpec(*args)


def test_constant_g_allowed_in_dim2():
    spec = GameSpec(2, AND, TruthTable2((0, 0, 0, 0)))
    # g = 0 always: wins exactly on the three questions where AND is 0
    assert win_probability(spec, 0.1, 0.2) == pytest.approx(0.75, abs=1e-12)
    assert "d=2" in spec.label()
