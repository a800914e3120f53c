"""The regularized toy-model character on rooted trees.

``phi(T) = b^(-lambda deg T) * prod_v B_{w(T_v)}(lambda)`` with
``B_j(lambda) = pi / sin(pi j lambda)`` and ``a = log b`` kept symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from gmpy2 import mpq

from .coeffs import LaurentSeries, A, PI2, exp_linear
from .characters import Character
from .forest import RootedTree, subtree_weights, tree_by_index


@dataclass(frozen=True)
class ToyConfig:
    """Truncation settings for the toy character.

    A tree of degree ``e`` is expanded up to ``lambda^(trunc + extra + max_degree - e)``
    (exclusive), so every forest of degree ``<= max_degree`` is known below
    ``lambda^(trunc + extra)``.
    """

    trunc: int = 3
    max_degree: int = 4
    extra: int = 0

    def __post_init__(self):
        if self.trunc < 1:
            raise ValueError("trunc must be at least 1")
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.extra < 0:
            raise ValueError("extra precision must be non-negative")

    def tree_trunc(self, degree: int) -> int:
        return self.trunc + self.extra + self.max_degree - degree


@lru_cache(maxsize=None)
def x_over_sin(n: int) -> tuple:
    """First ``n`` coefficients ``c_k`` of ``x / sin x = sum c_k x^(2k)``."""
    # invert sin(x)/x = sum (-1)^k x^(2k) / (2k+1)!
    s = [mpq((-1) ** k, factorial(2 * k + 1)) for k in range(n)]
    c = [mpq(1)]
    for k in range(1, n):
        c.append(-sum(s[i] * c[k - i] for i in range(1, k + 1)))
    return tuple(c)


@lru_cache(maxsize=None)
def euler_B(j: int, trunc: int) -> LaurentSeries:
    """``pi / sin(pi j lambda)`` below ``lambda^trunc``."""
    if j < 1:
        raise ValueError("B_j needs j >= 1")
    n = max(1, (trunc + 2) // 2)
    cs = x_over_sin(n)
    terms = {}
    for k, ck in enumerate(cs):
        e = 2 * k - 1
        if e < trunc:
            terms[e] = (PI2 ** k) * (ck * mpq(j) ** (2 * k - 1))
    return LaurentSeries(terms, -1, trunc)


def toy_tree_value(tree: RootedTree, cfg: ToyConfig) -> LaurentSeries:
    e = tree.degree
    target = cfg.tree_trunc(e)
    local = target + e
    out = exp_linear(-A, e, local)
    for w in subtree_weights(tree):
        out = out * euler_B(w, local)
    return out.truncate(target)


def toy_character(cfg: ToyConfig | None = None) -> Character:
    cfg = cfg or ToyConfig()
    return Character(lambda t: toy_tree_value(t, cfg), label="toy")


TABLE_INDICES = (1, 2, 4, 8)


def toy_table(cfg: ToyConfig | None = None, indices=TABLE_INDICES) -> dict[int, LaurentSeries]:
    """Toy character on the normal coordinates ``f_i``."""
    from .characters import normal_coordinate

    cfg = cfg or ToyConfig()
    phi = toy_character(cfg)
    return {i: phi(normal_coordinate(tree_by_index(i))) for i in indices}
