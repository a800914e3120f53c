"""Reference implementations used only by the tests.

They share no code with the package apart from the tree data type.
"""

from collections import defaultdict
from functools import lru_cache

import sympy as sp

from hopflax.coeffs import LaurentSeries, SymbolPoly
from hopflax.forest import UNIT, Forest, graft

lam, a, pi, s, t = sp.symbols("lam a pi s t")


def coproduct(f: Forest) -> dict:
    """``Delta(B+F) = B+F x 1 + (id x B+) Delta F``, extended multiplicatively."""
    if f.is_unit():
        return {(UNIT, UNIT): 1}
    if not f.is_tree():
        out = {(UNIT, UNIT): 1}
        for tr in f.trees:
            nxt = defaultdict(int)
            for (l1, r1), c1 in out.items():
                for (l2, r2), c2 in coproduct(tr.as_forest()).items():
                    nxt[(l1 * l2, r1 * r2)] += c1 * c2
            out = dict(nxt)
        return out
    tree = f.trees[0]
    out = defaultdict(int)
    out[(f, UNIT)] += 1
    for (l, r), c in coproduct(tree.children_forest()).items():
        out[(l, graft(r).as_forest())] += c
    return {k: v for k, v in out.items() if v}


def reduced(tree) -> dict:
    f = tree.as_forest()
    return {(l, r): c for (l, r), c in coproduct(f).items() if not l.is_unit() and not r.is_unit()}


def weights(tree) -> list[int]:
    out = [tree.degree]
    for c in tree.children:
        out += weights(c)
    return out


ORDER = 7  # oracle values are kept below lambda^ORDER


def trunc(e, order=ORDER):
    e = sp.expand(e)
    return sp.expand(sum(e.coeff(lam, k) * lam ** k for k in range(-12, order)))


@lru_cache(maxsize=None)
def _inv_sin(w):
    return sp.expand(sp.series(pi / sp.sin(pi * w * lam), lam, 0, ORDER + 6).removeO())


@lru_cache(maxsize=None)
def _exp(n):
    return sp.expand(sp.series(sp.exp(-a * lam * n), lam, 0, ORDER + 6).removeO())


@lru_cache(maxsize=None)
def toy_value(tree):
    """Toy Feynman rule expanded by sympy: ``e^{-a lam n} prod_v pi / sin(pi w_v lam)``."""
    expr = _exp(tree.degree)
    for w in weights(tree):
        expr = trunc(expr * _inv_sin(w), ORDER + 6)
    return trunc(expr)


def pole(e):
    e = sp.expand(e)
    return sp.expand(sum(e.coeff(lam, -k) * lam ** -k for k in range(1, 12)))


def holo(e):
    return sp.expand(sp.expand(e) - pole(e))


class SympyBirkhoff:
    """Bogoliubov recursion on sympy expressions."""

    def __init__(self, value):
        self.value = value

    @lru_cache(maxsize=None)
    def on_tree(self, tree):
        bar = self.value(tree)
        for (l, r), c in reduced(tree).items():
            bar += c * self.minus_forest(l) * self.phi_forest(r)
        bar = trunc(bar)
        return -pole(bar), holo(bar)

    def phi_forest(self, f):
        out = sp.Integer(1)
        for tr in f.trees:
            out = trunc(out * self.value(tr))
        return out

    def minus_forest(self, f):
        out = sp.Integer(1)
        for tr in f.trees:
            out *= self.on_tree(tr)[0]
        return sp.expand(out)

    def plus_forest(self, f):
        out = sp.Integer(1)
        for tr in f.trees:
            out *= self.on_tree(tr)[1]
        return sp.expand(out)


def to_sympy(x: LaurentSeries):
    out = sp.Integer(0)
    for e, c in x.coeffs.items():
        out += poly_to_sympy(c) * lam ** e
    return sp.expand(out)


def poly_to_sympy(p: SymbolPoly):
    out = sp.Integer(0)
    for (ep, ea, es, et), c in p.items():
        out += sp.Rational(int(c.numerator), int(c.denominator)) * pi ** (2 * ep) * a ** ea * s ** es * t ** et
    return out


def below(expr, order):
    """Terms of ``expr`` with lambda exponent below ``order``."""
    expr = sp.expand(expr)
    return sp.expand(sum(expr.coeff(lam, k) * lam ** k for k in range(-12, order)))
