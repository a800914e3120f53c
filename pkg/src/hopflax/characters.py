"""Characters, infinitesimal characters and generic linear maps on forests.

All values are ``LaurentSeries``.  Scalar valued maps simply carry series
with a single exact ``lambda^0`` term.
"""

from __future__ import annotations

import math
import threading
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq

from .coeffs import EXACT, LaurentSeries, ONE, SymbolPoly, ZERO, exp_linear
from .errors import NotHomogeneous
from .forest import Forest, RootedTree, all_trees, parse_tree
from .hopf import ForestPolynomial, antipode, coproduct, reduced_coproduct

Value = LaurentSeries
TreeFn = Callable[[RootedTree], LaurentSeries]


def _as_series(v) -> LaurentSeries:
    return v if isinstance(v, LaurentSeries) else LaurentSeries.const(v)


class HopfMap:
    """A linear map from forests to Laurent series, memoized per forest."""

    kind = "linear"

    def __init__(self, forest_fn: Callable[[Forest], LaurentSeries], label: str = ""):
        self._forest_fn = forest_fn
        self._cache: dict[Forest, LaurentSeries] = {}
        self._lock = threading.Lock()
        self.label = label

    def _eval_forest(self, f: Forest) -> LaurentSeries:
        return self._forest_fn(f)

    def on_forest(self, f: Forest) -> LaurentSeries:
        hit = self._cache.get(f)
        if hit is None:
            hit = _as_series(self._eval_forest(f))
            with self._lock:
                self._cache[f] = hit
        return hit

    def __call__(self, x: "Forest | RootedTree | ForestPolynomial | str") -> LaurentSeries:
        if isinstance(x, str):
            x = parse_tree(x)
        if isinstance(x, RootedTree):
            return self.on_forest(x.as_forest())
        if isinstance(x, Forest):
            return self.on_forest(x)
        out = ZERO
        for f, c in x.terms.items():
            v = self.on_forest(f)
            if v.is_zero() and v.is_exact():
                continue
            out = out + v.scale(c)
        return out

    # linear structure ------------------------------------------------------
    def __add__(self, other: "HopfMap") -> "HopfMap":
        return _combine(self, other, lambda x, y: x + y)

    def __sub__(self, other: "HopfMap") -> "HopfMap":
        return _combine(self, other, lambda x, y: x - y)

    def __neg__(self) -> "HopfMap":
        return self.scale(-1)

    def scale(self, c) -> "HopfMap":
        c = SymbolPoly.coerce(c)
        return self.map_values(lambda v: v.scale(c))

    def map_values(self, fn: Callable[[LaurentSeries], LaurentSeries]) -> "HopfMap":
        return HopfMap(lambda f: fn(self.on_forest(f)))

    def shift(self, k: int) -> "HopfMap":
        return self.map_values(lambda v: v.shift(k))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label}>"


class InfinitesimalCharacter(HopfMap):
    """Linear map vanishing on the unit and on products of two or more trees."""

    kind = "infinitesimal"

    def __init__(self, tree_fn: TreeFn | Mapping[RootedTree, object], label: str = ""):
        if isinstance(tree_fn, Mapping):
            table = {(parse_tree(k) if isinstance(k, str) else k): _as_series(v) for k, v in tree_fn.items()}
            tree_fn = lambda t, _tb=table: _tb.get(t, ZERO)
        self._tree_fn = tree_fn
        super().__init__(self._forest_value, label)

    def _forest_value(self, f: Forest) -> LaurentSeries:
        if len(f.trees) != 1:
            return ZERO
        return _as_series(self._tree_fn(f.trees[0]))

    def tree_value(self, t: RootedTree) -> LaurentSeries:
        return self.on_forest(t.as_forest())

    def map_values(self, fn: Callable[[LaurentSeries], LaurentSeries]) -> "InfinitesimalCharacter":
        return InfinitesimalCharacter(lambda t: fn(self.tree_value(t)))

    def __add__(self, other):
        if isinstance(other, InfinitesimalCharacter):
            return InfinitesimalCharacter(lambda t: self.tree_value(t) + other.tree_value(t))
        return super().__add__(other)

    def __sub__(self, other):
        if isinstance(other, InfinitesimalCharacter):
            return InfinitesimalCharacter(lambda t: self.tree_value(t) - other.tree_value(t))
        return super().__sub__(other)

    def degrees(self, max_degree: int) -> set[int]:
        return {t.degree for t in all_trees(max_degree) if not self.tree_value(t).is_zero()}


class Character(HopfMap):
    """Algebra morphism; stored by its tree values and extended multiplicatively."""

    kind = "character"

    def __init__(self, tree_fn: TreeFn | Mapping[RootedTree, object], label: str = ""):
        if isinstance(tree_fn, Mapping):
            table = {(parse_tree(k) if isinstance(k, str) else k): _as_series(v) for k, v in tree_fn.items()}
            tree_fn = lambda t, _tb=table: _tb.get(t, ZERO)
        self._tree_fn = tree_fn
        super().__init__(self._forest_value, label)

    def _forest_value(self, f: Forest) -> LaurentSeries:
        if not f.trees:
            return ONE
        if len(f.trees) == 1:
            return _as_series(self._tree_fn(f.trees[0]))
        out = self.on_forest(Forest(f.trees[:-1]))
        return out * self.on_forest(f.trees[-1].as_forest())

    def tree_value(self, t: RootedTree) -> LaurentSeries:
        return self.on_forest(t.as_forest())

    def map_values(self, fn: Callable[[LaurentSeries], LaurentSeries]) -> "Character":
        """Apply ``fn`` to tree values (fn must respect products to stay meaningful)."""
        return Character(lambda t: fn(self.tree_value(t)))


def _combine(x: HopfMap, y: HopfMap, op) -> HopfMap:
    return HopfMap(lambda f: op(x.on_forest(f), y.on_forest(f)))


def counit_character() -> Character:
    return Character(lambda t: ZERO, label="epsilon")


EPSILON = counit_character()


def as_linear(c: Character | HopfMap) -> HopfMap:
    return c


def generator(tree: RootedTree | str, value=1) -> InfinitesimalCharacter:
    """``Z_T``: the infinitesimal character with ``Z_T(T') = delta``."""
    tree = parse_tree(tree) if isinstance(tree, str) else tree
    v = _as_series(value)
    return InfinitesimalCharacter(lambda t: v if t is tree else ZERO, label=f"Z{tree.encoding}")


# convolution ---------------------------------------------------------------------

def _conv_on(x: HopfMap, y: HopfMap, f: Forest) -> LaurentSeries:
    out = ZERO
    for (l, r), c in coproduct(f).terms.items():
        a = x.on_forest(l)
        if a.is_zero() and a.is_exact():
            continue
        b = y.on_forest(r)
        if b.is_zero() and b.is_exact():
            continue
        out = out + (a * b).scale(c)
    return out


def convolve(x: HopfMap, y: HopfMap) -> HopfMap:
    """``(x * y)(h) = sum x(h') y(h'')`` over the full coproduct."""
    if isinstance(x, Character) and isinstance(y, Character):
        return Character(lambda t: _conv_on(x, y, t.as_forest()))
    return HopfMap(lambda f: _conv_on(x, y, f))


def convolve_all(*maps: HopfMap) -> HopfMap:
    out = maps[0]
    for m in maps[1:]:
        out = convolve(out, m)
    return out


def commutator(x: InfinitesimalCharacter, y: InfinitesimalCharacter) -> InfinitesimalCharacter:
    """Convolution commutator, evaluated on trees through the reduced coproduct."""

    def tree_fn(t: RootedTree) -> LaurentSeries:
        out = ZERO
        for (l, r), c in reduced_coproduct(t).terms.items():
            if not (l.is_tree() and r.is_tree()):
                continue
            out = out + (x.on_forest(l) * y.on_forest(r) - y.on_forest(l) * x.on_forest(r)).scale(c)
        return out

    return InfinitesimalCharacter(tree_fn)


def homogeneous_degree(z: InfinitesimalCharacter, k: int) -> int | None:
    degs = z.degrees(k)
    if len(degs) > 1:
        raise NotHomogeneous(f"infinitesimal character is supported in degrees {sorted(degs)}")
    return next(iter(degs)) if degs else None


def truncated_bracket(zi: InfinitesimalCharacter, zj: InfinitesimalCharacter, k: int) -> InfinitesimalCharacter:
    """Bracket of the truncated Lie algebra: zero once the degree sum exceeds ``k``."""
    di, dj = homogeneous_degree(zi, k), homogeneous_degree(zj, k)
    if di is None or dj is None or di + dj > k:
        return InfinitesimalCharacter(lambda t: ZERO)
    br = commutator(zi, zj)
    return InfinitesimalCharacter(lambda t: br.tree_value(t) if t.degree <= k else ZERO)


# group structure -------------------------------------------------------------------

def char_inverse(phi: Character) -> Character:
    """``phi o S``."""
    return Character(lambda t: phi(antipode(t)))


def reduced_products(x: Forest, k: int, _memo: dict = {}) -> ForestPolynomial:
    """``m^(k) o reduced-Delta^(k-1)(x)`` as a forest polynomial."""
    key = (x, k)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    if k == 1:
        out = ForestPolynomial.of(x)
    else:
        out = ForestPolynomial()
        if x.degree >= k:
            for (l, r), c in reduced_coproduct(x).terms.items():
                out = out + (ForestPolynomial.of(l) * reduced_products(r, k - 1)).scale(c)
    _memo[key] = out
    return out


_normal: dict[RootedTree, ForestPolynomial] = {}


def normal_coordinate(t: RootedTree | int | str) -> ForestPolynomial:
    """Forest polynomial ``f`` with ``log(phi)(t) = phi(f)`` for every character."""
    from .forest import tree_by_index

    if isinstance(t, int):
        t = tree_by_index(t)
    elif isinstance(t, str):
        t = parse_tree(t)
    hit = _normal.get(t)
    if hit is not None:
        return hit
    out = ForestPolynomial()
    x = t.as_forest()
    for k in range(1, t.degree + 1):
        sign = 1 if k % 2 else -1
        out = out + reduced_products(x, k).scale(mpq(sign, k))
    _normal[t] = out
    return out


def char_log(phi: Character) -> InfinitesimalCharacter:
    return InfinitesimalCharacter(lambda t: phi(normal_coordinate(t)))


def inf_exp(z: InfinitesimalCharacter) -> Character:
    """``exp(Z) = sum Z^k / k!`` on trees (finite by grading)."""
    memo: dict[tuple[int, Forest], LaurentSeries] = {}

    def power(k: int, f: Forest) -> LaurentSeries:
        # Z^{*k}(f) for f without unit component
        key = (k, f)
        if key in memo:
            return memo[key]
        if k == 1:
            out = z.on_forest(f)
        elif f.degree < k:
            out = ZERO
        else:
            out = ZERO
            for (l, r), c in reduced_coproduct(f).terms.items():
                if not l.is_tree():
                    continue
                a = z.on_forest(l)
                if a.is_zero() and a.is_exact():
                    continue
                out = out + (a * power(k - 1, r)).scale(c)
        memo[key] = out
        return out

    def tree_fn(t: RootedTree) -> LaurentSeries:
        f = t.as_forest()
        out = ZERO
        for k in range(1, t.degree + 1):
            out = out + power(k, f).scale(mpq(1, math.factorial(k)))
        return out

    return Character(tree_fn)


def r_tilde(phi: Character) -> InfinitesimalCharacter:
    """``phi^{-1} * (phi o Y)``."""
    inv = char_inverse(phi)

    def tree_fn(t: RootedTree) -> LaurentSeries:
        out = ZERO
        for (l, r), c in coproduct(t).terms.items():
            if r.is_unit():
                continue
            out = out + (inv.on_forest(l) * phi.on_forest(r)).scale(c * r.degree)
        return out

    return InfinitesimalCharacter(tree_fn)


def r_tilde_inv(L: InfinitesimalCharacter) -> Character:
    """Solve ``deg(x) phi(x) = L(x) + sum phi(x') L(x'')`` recursively on trees."""
    holder: list[Character] = []

    def tree_fn(t: RootedTree) -> LaurentSeries:
        phi = holder[0]
        out = L.tree_value(t)
        for (l, r), c in reduced_coproduct(t).terms.items():
            if not r.is_tree():
                continue
            out = out + (phi.on_forest(l) * L.on_forest(r)).scale(c)
        return out.scale(mpq(1, t.degree))

    phi = Character(tree_fn)
    holder.append(phi)
    return phi


def adjoint(g: Character, L: HopfMap) -> InfinitesimalCharacter:
    """``g * L * g^{-1}`` restricted to trees."""
    conj = convolve(convolve(g, L), char_inverse(g))
    return InfinitesimalCharacter(lambda t: conj.on_forest(t.as_forest()))


def adjoint_formula(g: Character, L: InfinitesimalCharacter) -> InfinitesimalCharacter:
    """Adjoint action written with reduced Sweedler sums and the antipode."""
    ginv = char_inverse(g)

    def tree_fn(t: RootedTree) -> LaurentSeries:
        out = L.tree_value(t)
        for (l, r), c in reduced_coproduct(t).terms.items():
            out = out + (g.on_forest(l) * L.on_forest(r) + L.on_forest(l) * ginv.on_forest(r)).scale(c)
            for (l1, l2), d in reduced_coproduct(l).terms.items():
                out = out + (g.on_forest(l1) * L.on_forest(l2) * ginv.on_forest(r)).scale(c * d)
        return out

    return InfinitesimalCharacter(tree_fn)


# twists and derivatives --------------------------------------------------------------

def _twist_order(v: LaurentSeries, order) -> float:
    if order is not None:
        return order
    if v.trunc == EXACT:
        return EXACT
    return max(1, int(v.trunc - v.min_exp))


def twist(phi: Character, mode: str = "rge_s", order: int | None = None, symbol: str = "s",
          base=None) -> Character:
    """The scaling twists ``phi^s`` (mode ``rge_s``) and ``phi o theta`` (mode ``theta_t``).

    ``rge_s`` multiplies a degree ``n`` value by ``exp(n * symbol * lambda)``.
    ``theta_t`` multiplies it by ``base**n`` where ``base`` stands for ``e^t``.
    """
    if mode == "theta_t":
        q = mpq(1) if base is None else mpq(base)
        return Character(lambda t: phi.tree_value(t).scale(q ** t.degree))
    if mode != "rge_s":
        raise ValueError(f"unknown twist mode {mode!r}")
    sym = SymbolPoly.symbol(symbol)

    def tree_fn(t: RootedTree) -> LaurentSeries:
        v = phi.tree_value(t)
        if v.is_zero() and v.is_exact():
            return v
        n = _twist_order(v, order)
        if n == EXACT:
            n = DEFAULT_EXACT_TWIST
        return v * exp_linear(sym, t.degree, n)

    return Character(tree_fn)


DEFAULT_EXACT_TWIST = 8


def derivative(m: HopfMap, sym: str) -> HopfMap:
    """Coefficientwise derivative of a polynomial family of maps."""
    if isinstance(m, InfinitesimalCharacter):
        return InfinitesimalCharacter(lambda t: m.tree_value(t).diff(sym))
    return HopfMap(lambda f: m.on_forest(f).diff(sym))


def substitute(m: HopfMap, sym: str, value) -> HopfMap:
    if isinstance(m, Character):
        return Character(lambda t: m.tree_value(t).substitute(sym, value))
    if isinstance(m, InfinitesimalCharacter):
        return InfinitesimalCharacter(lambda t: m.tree_value(t).substitute(sym, value))
    return HopfMap(lambda f: m.on_forest(f).substitute(sym, value))


def value_at_zero(m: HopfMap) -> HopfMap:
    """Pointwise evaluation at ``lambda = 0`` (requires holomorphic values)."""
    fn = lambda v: LaurentSeries.const(v.value_at_zero())
    if isinstance(m, Character):
        return Character(lambda t: fn(m.tree_value(t)))
    if isinstance(m, InfinitesimalCharacter):
        return InfinitesimalCharacter(lambda t: fn(m.tree_value(t)))
    return HopfMap(lambda f: fn(m.on_forest(f)))


def tabulate(m: HopfMap, forests: Iterable[Forest]) -> dict[Forest, LaurentSeries]:
    return {f: m.on_forest(f) for f in forests}


def maps_agree(x: HopfMap, y: HopfMap, forests: Iterable[Forest]) -> list[Forest]:
    """Forests on which the two maps disagree inside their common windows."""
    return [f for f in forests if not x.on_forest(f).agrees(y.on_forest(f))]


def character_to_json(phi: Character, trees: Iterable[RootedTree], meta: dict | None = None) -> dict:
    return {
        "meta": meta or {},
        "values": [{"tree": t.encoding, "series": phi.tree_value(t).to_json()} for t in trees],
    }


def character_from_json(data: dict) -> Character:
    table = {parse_tree(e["tree"]): LaurentSeries.from_json(e["series"]) for e in data["values"]}

    def tree_fn(t: RootedTree) -> LaurentSeries:
        if t not in table:
            raise KeyError(f"character file has no value for tree {t.encoding}")
        return table[t]

    return Character(tree_fn)
