"""The toy character against an independent sympy expansion."""

import pytest
import sympy as sp

import oracles
from hopflax.forest import all_trees
from hopflax.toy import ToyConfig, euler_B, toy_character, toy_table, x_over_sin

x = sp.symbols("x")


def test_x_over_sin_coefficients():
    ref = sp.Poly(sp.series(x / sp.sin(x), x, 0, 14).removeO(), x)
    got = x_over_sin(7)
    for k, c in enumerate(got):
        assert sp.Rational(int(c.numerator), int(c.denominator)) == ref.coeff_monomial(x ** (2 * k))


@pytest.mark.parametrize("j", [1, 2, 3, 4])
def test_euler_B_matches_sympy(j):
    ref = sp.series(oracles.pi / sp.sin(oracles.pi * j * oracles.lam), oracles.lam, 0, 5).removeO()
    assert oracles.to_sympy(euler_B(j, 5)) == sp.expand(ref)


@pytest.mark.parametrize("tree", all_trees(4), ids=str)
def test_toy_tree_values(tree):
    cfg = ToyConfig(trunc=3, max_degree=4)
    v = toy_character(cfg).tree_value(tree)
    assert v.trunc == cfg.tree_trunc(tree.degree)
    assert oracles.to_sympy(v) == oracles.below(oracles.toy_value(tree), int(v.trunc))


def test_forest_windows_reach_requested_order():
    cfg = ToyConfig(trunc=3, max_degree=4)
    tab = toy_table(cfg)
    assert all(v.trunc >= cfg.trunc for v in tab.values())


def test_config_validation():
    with pytest.raises(ValueError):
        ToyConfig(trunc=0)
    with pytest.raises(ValueError):
        ToyConfig(max_degree=0)
    with pytest.raises(ValueError):
        euler_B(0, 3)


def test_extra_precision_only_widens_windows():
    narrow = toy_character(ToyConfig(trunc=3, max_degree=4))
    wide = toy_character(ToyConfig(trunc=3, max_degree=4, extra=2))
    for t in all_trees(4):
        assert wide.tree_value(t).agrees(narrow.tree_value(t))
        assert wide.tree_value(t).trunc == narrow.tree_value(t).trunc + 2
