"""Birkhoff factorization, locality, beta and the renormalization group."""

import pytest
from hypothesis import given, strategies as st

import oracles
from hopflax.birkhoff import (
    arge_residual,
    beta,
    birkhoff,
    group_law_residual,
    is_local,
    one_param_subgroup,
    renormalized,
)
from hopflax.characters import (
    EPSILON,
    Character,
    adjoint,
    char_inverse,
    convolve,
    derivative,
    substitute,
    twist,
    value_at_zero,
)
from hopflax.coeffs import LaurentSeries
from hopflax.errors import NotLocal, WindowTooNarrow
from hopflax.forest import all_trees, enumerate_forests, parse_tree
from hopflax.toy import ToyConfig, toy_character
from hopflax.verify import holomorphic_character, pure_pole_character, random_character

TREES = all_trees(4)
FORESTS = enumerate_forests(4)


@pytest.fixture(scope="module")
def toy():
    return toy_character(ToyConfig(trunc=3, max_degree=4))


@pytest.fixture(scope="module")
def sympy_pair():
    return oracles.SympyBirkhoff(oracles.toy_value)


@pytest.mark.parametrize("tree", TREES, ids=str)
def test_toy_factorization_matches_sympy_oracle(toy, sympy_pair, tree):
    pair = birkhoff(toy)
    m_ref, p_ref = sympy_pair.on_tree(tree)
    assert oracles.to_sympy(pair.minus.tree_value(tree)) == m_ref
    p = pair.plus.tree_value(tree)
    n = min(int(p.trunc), 3)
    assert oracles.below(oracles.to_sympy(p), n) == oracles.below(p_ref, n)


@given(st.integers(0, 5000))
def test_reconstruction(seed):
    phi = random_character(seed, trunc=5)
    pair = birkhoff(phi)
    rec = convolve(char_inverse(pair.minus), pair.plus)
    for f in FORESTS:
        assert rec.on_forest(f).agrees(phi.on_forest(f))


@given(st.integers(0, 5000))
def test_uniqueness(seed):
    m, p = pure_pole_character(seed, 4), holomorphic_character(seed, 6)
    pair = birkhoff(convolve(char_inverse(m), p))
    for f in FORESTS:
        assert pair.minus.on_forest(f).agrees(m.on_forest(f))
        assert pair.plus.on_forest(f).agrees(p.on_forest(f))


def test_counterterm_of_counterterm():
    # (phi_-)_- = phi_-^{-1}  and  (phi_-)_+ = eps
    phi = random_character(11, trunc=5)
    m = birkhoff(phi).minus
    pair = birkhoff(m)
    minv = char_inverse(m)
    for f in FORESTS:
        assert pair.minus.on_forest(f).agrees(minv.on_forest(f))
        assert pair.plus.on_forest(f).agrees(EPSILON.on_forest(f))


def test_narrow_window_is_reported():
    phi = Character(lambda t: LaurentSeries({-1: 1}, -1, 0))
    with pytest.raises(WindowTooNarrow):
        birkhoff(phi).minus.tree_value(parse_tree("[[][]]"))


def test_toy_is_local(toy):
    assert is_local(toy, 4).is_local


def test_generic_character_is_not_local():
    phi = random_character(1, trunc=5)
    rep = is_local(phi, 3)
    assert not rep.is_local
    t, e, c = rep.witnesses[0]
    assert e < 0 and c.depends_on("s")
    with pytest.raises(NotLocal):
        beta(phi, 3)


def test_local_counterterm_is_s_independent(toy):
    m1 = birkhoff(twist(toy, symbol="s")).minus
    for t in TREES:
        assert not m1.tree_value(t).depends_on("s")


def test_beta_generates_renormalization_group(toy):
    F = one_param_subgroup(toy, 4)
    res = group_law_residual(F, FORESTS)
    assert all(v.is_zero() for v in res.values())
    # dF/ds at s = 0 is beta conjugated by the renormalized value at s = 0
    g = value_at_zero(birkhoff(toy).plus)
    gen = adjoint(char_inverse(g), beta(toy, 4))
    dF = substitute(derivative(F, "s"), "s", 0)
    for t in TREES:
        assert dF.on_forest(t.as_forest()).agrees(gen.tree_value(t))


def test_group_generator_is_beta_for_inverse_counterterm(toy):
    minv = char_inverse(birkhoff(toy).minus)
    F = one_param_subgroup(minv, 4, assume_local=True)
    dF = substitute(derivative(F, "s"), "s", 0)
    b = beta(toy, 4)
    for t in TREES:
        assert dF.on_forest(t.as_forest()).agrees(b.tree_value(t))


def test_arge_residual_vanishes(toy):
    assert all(not v for v in arge_residual(toy, 4).values())


def test_renormalized_at_s_zero_is_plus_at_zero(toy):
    ren = renormalized(toy, 4)
    plus = birkhoff(toy).plus
    for t in TREES:
        assert ren.tree_value(t).substitute("s", 0) == LaurentSeries.const(plus.tree_value(t).value_at_zero())


def test_beta_of_inverse_counterterm(toy):
    # for phi_-^{-1}, F is exp(s beta) and its s-derivative at 0 is beta
    minv = char_inverse(birkhoff(toy).minus)
    b_toy, b_inv = beta(toy, 4), beta(minv, 4, assume_local=True)
    for t in TREES:
        assert b_inv.tree_value(t) == b_toy.tree_value(t)
