"""Hopf algebra structure on forests: coproduct by admissible cuts, antipode, grading.

Coproduct convention: for a cut ``c`` of a tree ``T`` the pruned forest
``P^c(T)`` goes to the left and the trunk ``R^c(T)`` (the part containing
the root) to the right, so ``Delta(t2) = t2 x 1 + 1 x t2 + t1 x t1``.
"""

from __future__ import annotations

import threading
from typing import Callable, Iterable, Iterator, Mapping

from gmpy2 import mpq

from .errors import UnitComponent
from .forest import UNIT, Forest, RootedTree, enumerate_forests, vertices

_lock = threading.RLock()


def _nonzero(c) -> bool:
    return bool(c)


class ForestPolynomial:
    """Finite linear combination of forests."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Forest, object] | Iterable[tuple[Forest, object]] | None = None):
        out: dict[Forest, object] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for f, c in items:
                if isinstance(c, int):
                    c = mpq(c)
                v = out.get(f)
                v = c if v is None else v + c
                if v:
                    out[f] = v
                else:
                    out.pop(f, None)
        self.terms = out

    @classmethod
    def of(cls, x: "Forest | RootedTree | ForestPolynomial") -> "ForestPolynomial":
        if isinstance(x, ForestPolynomial):
            return x
        if isinstance(x, RootedTree):
            x = x.as_forest()
        return cls({x: mpq(1)})

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def items(self):
        return list(self)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Forest, RootedTree)):
            other = ForestPolynomial.of(other)
        return isinstance(other, ForestPolynomial) and self.terms == other.terms

    __hash__ = None

    def coefficient(self, f: Forest) -> object:
        return self.terms.get(f, mpq(0))

    def __add__(self, other) -> "ForestPolynomial":
        other = ForestPolynomial.of(other)
        return ForestPolynomial(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "ForestPolynomial":
        return ForestPolynomial({f: -c for f, c in self.terms.items()})

    def __sub__(self, other) -> "ForestPolynomial":
        return self + (-ForestPolynomial.of(other))

    def scale(self, c) -> "ForestPolynomial":
        return ForestPolynomial({f: v * c for f, v in self.terms.items()})

    def __mul__(self, other) -> "ForestPolynomial":
        if isinstance(other, (ForestPolynomial, Forest, RootedTree)):
            other = ForestPolynomial.of(other)
            return ForestPolynomial(
                (fa * fb, ca * cb) for fa, ca in self.terms.items() for fb, cb in other.terms.items()
            )
        return self.scale(other)

    def __rmul__(self, other) -> "ForestPolynomial":
        return self.scale(other)

    def degrees(self) -> set[int]:
        return {f.degree for f in self.terms}

    def unit_component(self):
        return self.terms.get(UNIT, mpq(0))

    def map_linear(self, fn: Callable[[Forest], "ForestPolynomial"]) -> "ForestPolynomial":
        out: list[tuple[Forest, object]] = []
        for f, c in self.terms.items():
            for g, d in fn(f).terms.items():
                out.append((g, c * d))
        return ForestPolynomial(out)

    def to_json(self) -> list[dict]:
        return [{"forest": f.to_json(), "coeff": str(c)} for f, c in self]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for f, c in self:
            if c == 1:
                parts.append(str(f))
            elif c == -1:
                parts.append(f"-{f}")
            else:
                parts.append(f"{c}*{f}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"ForestPolynomial({self})"


class TensorSum:
    """Finite linear combination of ``left x right`` forest pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[Forest, Forest], object] | Iterable | None = None):
        out: dict[tuple[Forest, Forest], object] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                if isinstance(c, int):
                    c = mpq(c)
                v = out.get(k)
                v = c if v is None else v + c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        self.terms = out

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())))

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorSum) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "TensorSum") -> "TensorSum":
        return TensorSum(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "TensorSum") -> "TensorSum":
        return TensorSum(list(self.terms.items()) + [(k, -c) for k, c in other.terms.items()])

    def scale(self, c) -> "TensorSum":
        return TensorSum({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "TensorSum") -> "TensorSum":
        """Product in the tensor square of the algebra."""
        return TensorSum(
            ((a1 * a2, b1 * b2), c1 * c2)
            for (a1, b1), c1 in self.terms.items()
            for (a2, b2), c2 in other.terms.items()
        )

    def coefficient(self, left: Forest, right: Forest):
        return self.terms.get((left, right), mpq(0))

    def to_json(self) -> list[dict]:
        return [{"left": l.to_json(), "right": r.to_json(), "coeff": str(c)} for (l, r), c in self]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*({l} (x) {r})" for (l, r), c in self).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TensorSum({self})"


def tensor(a: ForestPolynomial | Forest, b: ForestPolynomial | Forest) -> TensorSum:
    a, b = ForestPolynomial.of(a), ForestPolynomial.of(b)
    return TensorSum(((fa, fb), ca * cb) for fa, ca in a.terms.items() for fb, cb in b.terms.items())


# admissible cuts -------------------------------------------------------------------

def _build(tree: RootedTree, cut: frozenset[int]) -> tuple[RootedTree, list[RootedTree]]:
    """Trunk containing the root and the list of pruned subtrees for a set of cut vertices.

    A vertex id in ``cut`` means the edge above it is cut.
    """
    counter = [0]
    pruned: list[RootedTree] = []

    def walk(t: RootedTree) -> RootedTree:
        counter[0] += 1
        kept = []
        for c in t.children:
            me = counter[0]
            sub = walk(c)
            if me in cut:
                pruned.append(sub)
            else:
                kept.append(sub)
        return RootedTree(kept)

    return walk(tree), pruned


def admissible_cuts(tree: RootedTree) -> Iterator[frozenset[int]]:
    """Nonempty admissible cuts as sets of non-root preorder vertex ids (no cut vertex above another)."""
    verts = vertices(tree)
    parent = {v: p for v, p in verts}
    ancestors: dict[int, set[int]] = {}
    for v, p in verts:
        anc = set()
        while p is not None:
            anc.add(p)
            p = parent[p]
        ancestors[v] = anc
    edges = [v for v, p in verts if p is not None]
    for mask in range(1, 1 << len(edges)):
        chosen = [edges[i] for i in range(len(edges)) if mask >> i & 1]
        cs = set(chosen)
        if any(ancestors[v] & cs for v in chosen):
            continue
        yield frozenset(chosen)


_tree_cop: dict[RootedTree, TensorSum] = {}
_tree_red: dict[RootedTree, TensorSum] = {}
_tree_S: dict[RootedTree, ForestPolynomial] = {}


def tree_coproduct(tree: RootedTree) -> TensorSum:
    hit = _tree_cop.get(tree)
    if hit is not None:
        return hit
    terms: list[tuple[tuple[Forest, Forest], object]] = [
        ((tree.as_forest(), UNIT), mpq(1)),
        ((UNIT, tree.as_forest()), mpq(1)),
    ]
    for cut in admissible_cuts(tree):
        trunk, pruned = _build(tree, cut)
        terms.append(((Forest(pruned), trunk.as_forest()), mpq(1)))
    out = TensorSum(terms)
    with _lock:
        _tree_cop[tree] = out
    return out


def coproduct(x: Forest | RootedTree | ForestPolynomial) -> TensorSum:
    """Full coproduct, multiplicative on forests and linear on polynomials."""
    if isinstance(x, ForestPolynomial):
        out = TensorSum()
        for f, c in x.terms.items():
            out = out + coproduct(f).scale(c)
        return out
    if isinstance(x, RootedTree):
        return tree_coproduct(x)
    res = TensorSum({(UNIT, UNIT): mpq(1)})
    for t in x.trees:
        res = res * tree_coproduct(t)
    return res


def reduced_coproduct(x: Forest | RootedTree | ForestPolynomial) -> TensorSum:
    """``Delta(x) - x (x) 1 - 1 (x) x``; rejects inputs with a unit component."""
    if isinstance(x, RootedTree):
        hit = _tree_red.get(x)
        if hit is not None:
            return hit
        out = TensorSum((k, c) for k, c in tree_coproduct(x).terms.items() if k[0] and k[1])
        with _lock:
            _tree_red[x] = out
        return out
    if isinstance(x, Forest):
        if x.is_unit():
            raise UnitComponent("the unit has no reduced coproduct")
        if x.is_tree():
            return reduced_coproduct(x.trees[0])
        return TensorSum((k, c) for k, c in coproduct(x).terms.items() if k[0] and k[1])
    if x.unit_component():
        raise UnitComponent("polynomial has a nonzero component on the empty forest")
    out = TensorSum()
    for f, c in x.terms.items():
        out = out + reduced_coproduct(f).scale(c)
    return out


def sweedler(x: Forest) -> list[tuple[Forest, Forest, object]]:
    """Reduced-coproduct terms of a forest as a flat list ``(x', x'', coeff)``."""
    return [(l, r, c) for (l, r), c in reduced_coproduct(x).terms.items()]


# antipode, counit, grading ----------------------------------------------------------

def antipode(x: Forest | RootedTree | ForestPolynomial) -> ForestPolynomial:
    if isinstance(x, ForestPolynomial):
        return x.map_linear(antipode)
    if isinstance(x, RootedTree):
        hit = _tree_S.get(x)
        if hit is not None:
            return hit
        out = -ForestPolynomial.of(x)
        for (l, r), c in reduced_coproduct(x).terms.items():
            out = out - (antipode(l) * r).scale(c)
        with _lock:
            _tree_S[x] = out
        return out
    res = ForestPolynomial.of(UNIT)
    for t in x.trees:
        res = res * antipode(t)
    return res


def counit(x: Forest | ForestPolynomial):
    if isinstance(x, Forest):
        return mpq(1) if x.is_unit() else mpq(0)
    return x.unit_component()


def grading_Y(x: Forest | RootedTree | ForestPolynomial) -> ForestPolynomial:
    x = ForestPolynomial.of(x)
    return ForestPolynomial({f: c * f.degree for f, c in x.terms.items()})


def multiply(ts: TensorSum) -> ForestPolynomial:
    return ForestPolynomial(((l * r), c) for (l, r), c in ts.terms.items())


def apply_left(ts: TensorSum, fn: Callable[[Forest], ForestPolynomial]) -> TensorSum:
    out = []
    for (l, r), c in ts.terms.items():
        for g, d in fn(l).terms.items():
            out.append(((g, r), c * d))
    return TensorSum(out)


def apply_right(ts: TensorSum, fn: Callable[[Forest], ForestPolynomial]) -> TensorSum:
    out = []
    for (l, r), c in ts.terms.items():
        for g, d in fn(r).terms.items():
            out.append(((l, g), c * d))
    return TensorSum(out)


def coproduct_triple(x: Forest, side: str) -> dict[tuple[Forest, Forest, Forest], object]:
    """``(Delta x id) Delta`` for side='left', ``(id x Delta) Delta`` for side='right'."""
    out: dict[tuple[Forest, Forest, Forest], object] = {}
    for (l, r), c in coproduct(x).terms.items():
        inner = coproduct(l if side == "left" else r)
        for (a, b), d in inner.terms.items():
            key = (a, b, r) if side == "left" else (l, a, b)
            v = out.get(key, mpq(0)) + c * d
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def basis(max_degree: int, cap: int | None = None) -> list[Forest]:
    return enumerate_forests(max_degree) if cap is None else enumerate_forests(max_degree, cap)


def clear_caches() -> None:
    with _lock:
        _tree_cop.clear()
        _tree_red.clear()
        _tree_S.clear()
