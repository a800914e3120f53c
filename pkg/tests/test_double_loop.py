"""Double Lie algebra, semidirect group factorization and the Casimir functions."""

import json

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from hopflax.characters import InfinitesimalCharacter, commutator, generator
from hopflax.coeffs import LaurentSeries
from hopflax.double_loop import (
    DoubleElement,
    DualElement,
    GroupElement,
    adjoint_double,
    casimir_psi,
    coad_action,
    double_bracket,
    group_agrees,
    i_map,
    identity,
    pairing,
    semidirect_birkhoff,
    semidirect_inverse,
    semidirect_mul,
    structure_constants,
    structure_constants_json,
)
from hopflax.errors import CutoffMismatch
from hopflax.forest import all_trees, tree_by_index
from hopflax.toy import ToyConfig, toy_character

K = 3
TREES = all_trees(K)


def series_from(rng_vals, lo=-1):
    return LaurentSeries({lo + i: mpq(v) for i, v in enumerate(rng_vals)})


@st.composite
def doubles(draw, cutoff=K):
    prim = {t: series_from(draw(st.lists(st.integers(-3, 3), min_size=1, max_size=3))) for t in all_trees(cutoff)}
    dual = {t: series_from(draw(st.lists(st.integers(-3, 3), min_size=1, max_size=3))) for t in all_trees(cutoff)}
    return DoubleElement.of(InfinitesimalCharacter(prim), DualElement(cutoff, dual))


@given(doubles(), doubles())
def test_pairing_symmetric(x, y):
    assert pairing(x, y) == pairing(y, x)


@given(doubles(), doubles(), doubles())
def test_pairing_ad_invariant(x, y, z):
    lhs = pairing(double_bracket(x, y), z)
    rhs = pairing(y, double_bracket(x, z))
    assert (lhs + rhs).is_zero()


@given(doubles(), doubles(), doubles())
def test_double_jacobi(x, y, z):
    j = (double_bracket(x, double_bracket(y, z)) + double_bracket(y, double_bracket(z, x))
         + double_bracket(z, double_bracket(x, y)))
    assert all(j.primary.tree_value(t).is_zero() for t in TREES)
    assert j.dual.is_zero()


@given(doubles(), doubles())
def test_pairing_group_invariant(x, y):
    g = toy_character(ToyConfig(trunc=3, max_degree=K))
    gx, gy = adjoint_double(g, x), adjoint_double(g, y)
    assert pairing(gx, gy).agrees(pairing(x, y))


@given(doubles())
def test_reflection_is_involution(x):
    back = i_map(i_map(x))
    for t in TREES:
        assert back.primary.tree_value(t) == x.primary.tree_value(t)
    assert back.dual.agrees(x.dual)


def test_coadjoint_basic_value():
    z4 = DualElement.basis(tree_by_index(4), cutoff=K)
    out = coad_action("algebra", generator(tree_by_index(1)), z4)
    assert out.coeff(tree_by_index(2)) == LaurentSeries.const(-2)


def test_structure_constants_agree_with_commutator():
    sc = structure_constants(K)
    for (i, k), row in sc.items():
        br = commutator(generator(tree_by_index(i)), generator(tree_by_index(k)))
        for j, c in row:
            assert br.tree_value(tree_by_index(j)) == LaurentSeries.const(c)
    assert sc[(1, 2)] == [(4, 2)]
    data = json.loads(structure_constants_json(K))
    assert data["constants"]["1,2"] == [[4, "2"]]


def test_cutoff_mismatch():
    with pytest.raises(CutoffMismatch):
        DualElement.basis(tree_by_index(1), 2) + DualElement.basis(tree_by_index(1), 3)
    with pytest.raises(CutoffMismatch):
        DualElement(2, {tree_by_index(3): 1})


# semidirect group ------------------------------------------------------------------

def duals(seed):
    trees = TREES
    t = trees[seed % len(trees)]
    e = -1 - (seed % 3) + 1
    return DualElement(K, {t: LaurentSeries({e: mpq(seed % 5 + 1)}), trees[0]: LaurentSeries({-1: 1, 0: 2})})


@pytest.fixture(scope="module")
def toy():
    return toy_character(ToyConfig(trunc=3, max_degree=K))


@pytest.mark.parametrize("seed", range(6))
def test_semidirect_birkhoff_reconstruction(toy, seed):
    p = GroupElement(toy, duals(seed))
    fac = semidirect_birkhoff(p)
    rec = semidirect_mul(semidirect_inverse(fac.minus), fac.plus)
    assert group_agrees(rec, p)


@pytest.mark.parametrize("seed", range(6))
def test_semidirect_birkhoff_uniqueness(toy, seed):
    fac = semidirect_birkhoff(GroupElement(toy, duals(seed)))
    assert all(all(e >= 0 for e in v.coeffs) for v in fac.plus.alpha.coeffs.values())
    assert all(all(e < 0 for e in v.coeffs) for v in fac.minus.alpha.coeffs.values())
    # refactorizing the product of the factors gives them back
    again = semidirect_birkhoff(semidirect_mul(semidirect_inverse(fac.minus), fac.plus))
    assert group_agrees(again.minus, fac.minus) and group_agrees(again.plus, fac.plus)


def test_semidirect_group_laws(toy):
    p, q = GroupElement(toy, duals(1)), GroupElement(toy, duals(4))
    e = identity(K)
    assert group_agrees(semidirect_mul(p, e), p)
    assert group_agrees(semidirect_mul(e, p), p)
    assert group_agrees(semidirect_mul(p, semidirect_inverse(p)), e)
    lhs = semidirect_mul(semidirect_mul(p, q), p)
    rhs = semidirect_mul(p, semidirect_mul(q, p))
    assert group_agrees(lhs, rhs)


# Casimir ------------------------------------------------------------------------------

def psi_direct(L, m, n):
    """Residue of ``lambda^-n <lambda^m L, lambda^m L>`` from the pairing itself."""
    Lm = DoubleElement(L.primary.shift(m), L.dual.map_values(lambda v: v.shift(m)))
    return pairing(Lm, Lm).shift(-n).residue()


def test_casimir_example_value():
    t1 = tree_by_index(1)
    L = DoubleElement.of(generator(t1), DualElement(K, {t1: LaurentSeries({-1: 1})}))
    assert casimir_psi(L, 0, 0) == 2
    assert psi_direct(L, 0, 0) == 2


@given(doubles(), st.integers(-1, 1), st.integers(-1, 2))
def test_casimir_matches_direct_sum(L, m, n):
    assert casimir_psi(L, m, n) == psi_direct(L, m, n)
