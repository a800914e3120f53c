"""Structural verification suites.

Every check returns a ``Check`` with a name, a pass flag and a short detail
string naming the first forest that failed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable

from gmpy2 import mpq

from .birkhoff import birkhoff
from .characters import (
    EPSILON,
    Character,
    InfinitesimalCharacter,
    adjoint,
    adjoint_formula,
    char_inverse,
    char_log,
    commutator,
    convolve,
    inf_exp,
    r_tilde,
    r_tilde_inv,
)
from .coeffs import LaurentSeries, SymbolPoly
from .forest import UNIT, Forest, all_trees, enumerate_forests
from .hopf import (
    ForestPolynomial,
    antipode,
    coproduct,
    coproduct_triple,
    grading_Y,
)
from .toy import ToyConfig, toy_character


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _first_bad(items: Iterable, pred: Callable) -> str:
    for x in items:
        if not pred(x):
            return str(x)
    return ""


def _check(name: str, items, pred) -> Check:
    bad = _first_bad(items, pred)
    return Check(name, not bad, f"fails at {bad}" if bad else "")


# hopf -------------------------------------------------------------------------------

def hopf_suite(max_degree: int = 5) -> list[Check]:
    forests = enumerate_forests(max_degree)
    out = []
    out.append(_check("coassociativity", forests,
                      lambda f: coproduct_triple(f, "left") == coproduct_triple(f, "right")))

    def counit_ok(f: Forest) -> bool:
        cop = coproduct(f)
        left = ForestPolynomial((r, c) for (l, r), c in cop.terms.items() if l.is_unit())
        right = ForestPolynomial((l, c) for (l, r), c in cop.terms.items() if r.is_unit())
        return left == ForestPolynomial.of(f) and right == ForestPolynomial.of(f)

    out.append(_check("counit", forests, counit_ok))

    def antipode_ok(f: Forest) -> bool:
        cop = coproduct(f)
        lhs = ForestPolynomial()
        rhs = ForestPolynomial()
        for (l, r), c in cop.terms.items():
            lhs = lhs + (antipode(l) * r).scale(c)
            rhs = rhs + (ForestPolynomial.of(l) * antipode(r)).scale(c)
        unit = ForestPolynomial.of(UNIT) if f.is_unit() else ForestPolynomial()
        return lhs == unit and rhs == unit

    out.append(_check("antipode", forests, antipode_ok))
    out.append(_check("degree_additivity", forests,
                      lambda f: all(l.degree + r.degree == f.degree for (l, r) in coproduct(f).terms)))
    small = enumerate_forests(max(1, max_degree // 2))
    out.append(_check("Y_biderivation", [(x, y) for x in small for y in small],
                      lambda p: grading_Y(p[0] * p[1]) == grading_Y(p[0]) * ForestPolynomial.of(p[1])
                      + ForestPolynomial.of(p[0]) * grading_Y(p[1])))
    return out


# characters ----------------------------------------------------------------------------

def random_character(seed: int, max_pole: int = 1, trunc: int = 6, symbolic: bool = False) -> Character:
    """Character with random rational tree values ``sum c_e lambda^e``; degree ``d`` poles up to ``d * max_pole``."""
    rng = random.Random(seed)
    a = SymbolPoly.symbol("a")

    def tree_fn(t):
        lo = -max_pole * t.degree
        terms = {}
        for e in range(lo, trunc - t.degree + 1):
            c = SymbolPoly.const(mpq(rng.randint(-5, 5), rng.randint(1, 4)))
            if symbolic and rng.random() < 0.3:
                c = c + a * rng.randint(-2, 2)
            terms[e] = c
        return LaurentSeries(terms, lo, trunc - t.degree + 1)

    memo = {}

    def cached(t):
        if t not in memo:
            memo[t] = tree_fn(t)
        return memo[t]

    return Character(cached, label=f"random{seed}")


def random_infinitesimal(seed: int, max_pole: int = 1, trunc: int = 6) -> InfinitesimalCharacter:
    rng = random.Random(seed + 7919)
    memo = {}

    def tree_fn(t):
        if t not in memo:
            lo = -max_pole * t.degree
            terms = {e: mpq(rng.randint(-4, 4), rng.randint(1, 3)) for e in range(lo, trunc - t.degree + 1)}
            memo[t] = LaurentSeries(terms, lo, trunc - t.degree + 1)
        return memo[t]

    return InfinitesimalCharacter(tree_fn)


def agree_on(x, y, forests) -> Callable:
    return lambda f: x.on_forest(f).agrees(y.on_forest(f))


def character_suite(max_degree: int = 5, seed: int = 1) -> list[Check]:
    forests = enumerate_forests(max_degree)
    trees = all_trees(max_degree)
    phi, psi, chi = (random_character(seed + i, trunc=max_degree + 2) for i in range(3))
    out = []
    lhs = convolve(convolve(phi, psi), chi)
    rhs = convolve(phi, convolve(psi, chi))
    out.append(_check("convolution_associative", forests, agree_on(lhs, rhs, forests)))
    out.append(_check("counit_is_unit", forests,
                      lambda f: convolve(EPSILON, phi).on_forest(f).agrees(phi.on_forest(f))
                      and convolve(phi, EPSILON).on_forest(f).agrees(phi.on_forest(f))))
    inv = char_inverse(phi)
    prod = convolve(phi, inv)
    out.append(_check("inverse", forests, lambda f: prod.on_forest(f).agrees(EPSILON.on_forest(f))))
    conv_char = convolve(phi, psi)
    lin = _linear_conv(phi, psi)
    out.append(_check("convolution_of_characters_is_character", forests,
                      lambda f: conv_char.on_forest(f).agrees(lin.on_forest(f))))

    x, y, z = (random_infinitesimal(seed + i, trunc=max_degree + 2) for i in range(3))
    xy, yx = commutator(x, y), commutator(y, x)
    out.append(_check("bracket_antisymmetric", trees, lambda t: (xy.tree_value(t) + yx.tree_value(t)).is_zero()))
    jac = [commutator(x, commutator(y, z)), commutator(y, commutator(z, x)), commutator(z, commutator(x, y))]
    out.append(_check("jacobi", trees, lambda t: (jac[0].tree_value(t) + jac[1].tree_value(t)
                                                   + jac[2].tree_value(t)).is_zero()))
    lin_br = _linear_conv(x, y) - _linear_conv(y, x)
    out.append(_check("bracket_is_infinitesimal", forests,
                      lambda f: lin_br.on_forest(f).agrees(xy.on_forest(f))))

    ex = inf_exp(char_log(phi))
    out.append(_check("exp_log", trees, lambda t: ex.tree_value(t).agrees(phi.tree_value(t))))
    lg = char_log(inf_exp(x))
    out.append(_check("log_exp", trees, lambda t: lg.tree_value(t).agrees(x.tree_value(t))))
    rr = r_tilde_inv(r_tilde(phi))
    out.append(_check("rtilde_roundtrip", trees, lambda t: rr.tree_value(t).agrees(phi.tree_value(t))))
    rl = r_tilde(r_tilde_inv(x))
    out.append(_check("rtilde_inverse_roundtrip", trees, lambda t: rl.tree_value(t).agrees(x.tree_value(t))))
    a1, a2 = adjoint(phi, x), adjoint_formula(phi, x)
    out.append(_check("adjoint_formula", trees, lambda t: a1.tree_value(t).agrees(a2.tree_value(t))))
    return out


def _linear_conv(x, y):
    from .characters import HopfMap, _conv_on

    return HopfMap(lambda f: _conv_on(x, y, f))


# birkhoff ---------------------------------------------------------------------------

def pure_pole_character(seed: int, max_degree: int) -> Character:
    rng = random.Random(seed * 31 + 5)
    memo = {}

    def tree_fn(t):
        if t not in memo:
            memo[t] = LaurentSeries({e: mpq(rng.randint(-5, 5), rng.randint(1, 3)) for e in range(-t.degree, 0)})
        return memo[t]

    return Character(tree_fn)


def holomorphic_character(seed: int, trunc: int) -> Character:
    rng = random.Random(seed * 17 + 3)
    memo = {}

    def tree_fn(t):
        if t not in memo:
            memo[t] = LaurentSeries({e: mpq(rng.randint(-5, 5), rng.randint(1, 3)) for e in range(0, trunc)},
                                    0, trunc)
        return memo[t]

    return Character(tree_fn)


def birkhoff_suite(max_degree: int = 5, seed: int = 3) -> list[Check]:
    forests = enumerate_forests(max_degree)
    out = []
    phi = toy_character(ToyConfig(trunc=3, max_degree=max_degree))
    pair = birkhoff(phi)
    rec = convolve(char_inverse(pair.minus), pair.plus)
    out.append(_check("reconstruction", forests, lambda f: rec.on_forest(f).agrees(phi.on_forest(f))))
    out.append(_check("minus_is_pole", forests[1:], lambda f: all(e < 0 for e in pair.minus.on_forest(f).coeffs)))
    out.append(_check("plus_is_holomorphic", forests[1:], lambda f: all(e >= 0 for e in pair.plus.on_forest(f).coeffs)))
    # uniqueness: any factorization built by hand is recovered exactly
    m = pure_pole_character(seed, max_degree)
    p = holomorphic_character(seed, 3 + max_degree)
    phi2 = convolve(char_inverse(m), p)
    pair2 = birkhoff(phi2)
    out.append(_check("uniqueness", forests, lambda f: pair2.minus.on_forest(f).agrees(m.on_forest(f))
                      and pair2.plus.on_forest(f).agrees(p.on_forest(f))))
    return out


SUITES = {
    "hopf": hopf_suite,
    "characters": character_suite,
    "birkhoff": birkhoff_suite,
}


def run_suites(names: Iterable[str], max_degree: int = 5) -> list[Check]:
    out: list[Check] = []
    for n in names:
        for c in SUITES[n](max_degree):
            c.name = f"{n}.{c.name}"
            out.append(c)
    return out
