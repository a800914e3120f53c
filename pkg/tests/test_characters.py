"""Character group, Lie algebra, exp/log, R-tilde and the adjoint action."""

from math import factorial

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from hopflax.characters import (
    EPSILON,
    HopfMap,
    InfinitesimalCharacter,
    adjoint,
    adjoint_formula,
    char_inverse,
    char_log,
    character_from_json,
    character_to_json,
    commutator,
    convolve,
    generator,
    inf_exp,
    normal_coordinate,
    r_tilde,
    r_tilde_inv,
    twist,
)
from hopflax.coeffs import LaurentSeries, ZERO
from hopflax.forest import all_trees, enumerate_forests, parse_tree
from hopflax.verify import random_character, random_infinitesimal

DEG = 4
TREES = all_trees(DEG)
FORESTS = enumerate_forests(DEG)
seeds = st.integers(0, 10_000)


def linear(fn):
    return HopfMap(fn)


def power_conv(x, k):
    out = x
    for _ in range(k - 1):
        out = convolve(out, x)
    return out


def log_oracle(phi):
    """``sum (-1)^(k+1)/k (phi - eps)^k`` with plain convolutions."""
    d = linear(lambda f: phi.on_forest(f) - EPSILON.on_forest(f))
    return linear(lambda f: sum(
        (power_conv(d, k).on_forest(f).scale(mpq((-1) ** (k + 1), k)) for k in range(1, f.degree + 1)),
        ZERO,
    ))


@given(seeds)
def test_log_matches_series_oracle(seed):
    phi = random_character(seed, trunc=4)
    lg, ref = char_log(phi), log_oracle(phi)
    for t in TREES:
        assert lg.tree_value(t).agrees(ref.on_forest(t.as_forest()))


@given(seeds)
def test_log_is_infinitesimal_on_products(seed):
    ref = log_oracle(random_character(seed, trunc=4))
    for f in FORESTS:
        if len(f) > 1:
            assert ref.on_forest(f).is_zero()


@given(seeds)
def test_exp_of_generator_sum_matches_series(seed):
    z = random_infinitesimal(seed, trunc=4)
    ex = inf_exp(z)
    ref = linear(lambda f: sum(
        (power_conv(z, k).on_forest(f).scale(mpq(1, factorial(k)))
         for k in range(1, f.degree + 1)),
        ZERO,
    ))
    for t in TREES:
        assert ex.tree_value(t).agrees(ref.on_forest(t.as_forest()))


@given(seeds, seeds)
def test_group_axioms(s1, s2):
    phi, psi = random_character(s1, trunc=4), random_character(s2 + 1, trunc=4)
    inv = char_inverse(convolve(phi, psi))
    other = convolve(char_inverse(psi), char_inverse(phi))
    for f in FORESTS:
        assert inv.on_forest(f).agrees(other.on_forest(f))
        assert convolve(phi, char_inverse(phi)).on_forest(f).agrees(EPSILON.on_forest(f))


@given(seeds)
def test_r_tilde_matches_definition(seed):
    phi = random_character(seed, trunc=4)
    phiY = linear(lambda f: phi.on_forest(f).scale(f.degree))
    ref = convolve(char_inverse(phi), phiY)
    rt = r_tilde(phi)
    for t in TREES:
        assert rt.tree_value(t).agrees(ref.on_forest(t.as_forest()))
    # the image is infinitesimal
    for f in FORESTS:
        if len(f) > 1:
            assert ref.on_forest(f).is_zero()


@given(seeds)
def test_r_tilde_roundtrips(seed):
    phi, z = random_character(seed, trunc=4), random_infinitesimal(seed, trunc=4)
    back, fwd = r_tilde_inv(r_tilde(phi)), r_tilde(r_tilde_inv(z))
    for t in TREES:
        assert back.tree_value(t).agrees(phi.tree_value(t))
        assert fwd.tree_value(t).agrees(z.tree_value(t))


@given(seeds, seeds)
def test_bracket_is_commutator_of_convolution(s1, s2):
    x, y = random_infinitesimal(s1, trunc=4), random_infinitesimal(s2 + 3, trunc=4)
    br = commutator(x, y)
    for f in FORESTS[1:]:
        lin = convolve(x, y).on_forest(f) - convolve(y, x).on_forest(f)
        assert lin.agrees(br.on_forest(f))


@given(seeds)
def test_adjoint_formula_agrees(seed):
    g, L = random_character(seed, trunc=4), random_infinitesimal(seed, trunc=4)
    a1, a2 = adjoint(g, L), adjoint_formula(g, L)
    for t in TREES:
        assert a1.tree_value(t).agrees(a2.tree_value(t))


def test_adjoint_is_derivative_of_conjugation_for_exponentials():
    # Ad(exp Z) W = W + [Z, W] + ... restricted to generators of degree 1 and 2
    z = generator("[]")
    w = generator("[[]]")
    ad = adjoint(inf_exp(z), w)
    br = commutator(z, w)
    t3 = parse_tree("[[[]]]")
    assert ad.tree_value(t3) == (w.tree_value(t3) + br.tree_value(t3))


def test_generator_brackets():
    br = commutator(generator("[]"), generator("[[]]"))
    # both cuts of the ladder cancel, the cherry keeps its two one-vertex cuts
    assert br.tree_value(parse_tree("[[[]]]")).is_zero()
    assert br.tree_value(parse_tree("[[][]]")) == LaurentSeries.const(2)


def test_normal_coordinates_small():
    f2 = normal_coordinate(2)
    assert str(f2) == "[[]] - 1/2*[] []"


@given(seeds)
def test_normal_coordinates_give_log(seed):
    phi = random_character(seed, trunc=4)
    for t in TREES:
        assert phi(normal_coordinate(t)).agrees(char_log(phi).tree_value(t))


@given(seeds)
def test_twist_is_character_and_s_zero_is_identity(seed):
    phi = random_character(seed, trunc=4)
    tw = twist(phi)
    for t in TREES:
        assert tw.tree_value(t).substitute("s", 0).agrees(phi.tree_value(t))


def test_twist_theta_scales_by_degree():
    phi = random_character(5, trunc=4)
    tw = twist(phi, mode="theta_t", base=3)
    t = parse_tree("[[][]]")
    assert tw.tree_value(t) == phi.tree_value(t).scale(27)
    with pytest.raises(ValueError):
        twist(phi, mode="other")


def test_character_json_roundtrip():
    phi = random_character(9, trunc=4)
    back = character_from_json(character_to_json(phi, TREES))
    for t in TREES:
        assert back.tree_value(t) == phi.tree_value(t)
    with pytest.raises(KeyError):
        back.tree_value(parse_tree("[[[[[]]]]]"))


def test_infinitesimal_vanishes_on_products():
    z = InfinitesimalCharacter({parse_tree("[]"): 1})
    assert z(parse_tree("[]").as_forest() * parse_tree("[]").as_forest()).is_zero()
