"""Rooted trees and forests in canonical form.

Trees are interned: two structurally isomorphic trees are the same Python
object, so identity, equality and hashing all agree with isomorphism.

Canonical order on trees: by degree, then by height (taller first), then by
bracket encoding.  With ``'['`` sorting before ``']'`` this yields

    t1 []            t5 [[[[]]]]
    t2 [[]]          t6 [[[][]]]    root, one child, two grandchildren
    t3 [[[]]]        t7 [[][[]]]    root with a leaf and a ladder-2
    t4 [[][]]        t8 [[][][]]    corolla

The children of a vertex are stored sorted by the same order, and the
encoding of a tree is ``'[' + child encodings + ']'``.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence, Union

from .errors import ResourceCap

DEFAULT_CAP = 50_000

RawTree = Union["RootedTree", Sequence["RawTree"], str]


class RootedTree:
    __slots__ = ("children", "degree", "height", "encoding", "key", "__weakref__")

    _intern: dict[str, "RootedTree"] = {}
    _lock = threading.Lock()

    children: tuple["RootedTree", ...]
    degree: int
    height: int
    encoding: str
    key: tuple

    def __new__(cls, children: Iterable["RootedTree"] = ()):
        kids = tuple(sorted(children, key=_tree_key))
        enc = "[" + "".join(c.encoding for c in kids) + "]"
        hit = cls._intern.get(enc)
        if hit is not None:
            return hit
        with cls._lock:
            hit = cls._intern.get(enc)
            if hit is not None:
                return hit
            self = object.__new__(cls)
            object.__setattr__(self, "children", kids)
            object.__setattr__(self, "degree", 1 + sum(c.degree for c in kids))
            object.__setattr__(self, "height", 1 + max(c.height for c in kids) if kids else 0)
            object.__setattr__(self, "encoding", enc)
            object.__setattr__(self, "key", (self.degree, -self.height, enc))
            cls._intern[enc] = self
            return self

    def __setattr__(self, name, value):
        raise AttributeError("RootedTree is immutable")

    def __reduce__(self):
        return (parse_tree, (self.encoding,))

    def __lt__(self, other: "RootedTree") -> bool:
        return self.key < other.key

    def __le__(self, other: "RootedTree") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "RootedTree") -> bool:
        return self.key > other.key

    def __ge__(self, other: "RootedTree") -> bool:
        return self.key >= other.key

    def __hash__(self) -> int:
        return hash(self.encoding)

    def __repr__(self) -> str:
        return f"RootedTree({self.encoding!r})"

    def __str__(self) -> str:
        return self.encoding

    def as_forest(self) -> "Forest":
        return Forest((self,))

    def children_forest(self) -> "Forest":
        return Forest(self.children)


def _tree_key(t: RootedTree) -> tuple:
    return t.key


def canonicalize(raw: RawTree) -> RootedTree:
    """Canonical tree from a nested child structure, a bracket string, or a tree."""
    if isinstance(raw, RootedTree):
        return raw
    if isinstance(raw, str):
        return parse_tree(raw)
    return RootedTree(canonicalize(c) for c in raw)


def parse_tree(text: str) -> RootedTree:
    stack: list[list[RootedTree]] = []
    result = None
    for i, ch in enumerate(text.strip()):
        if result is not None:
            raise ValueError(f"trailing characters after tree in {text!r}")
        if ch == "[":
            stack.append([])
        elif ch == "]":
            if not stack:
                raise ValueError(f"unbalanced ']' at position {i} in {text!r}")
            node = RootedTree(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                result = node
        elif not ch.isspace():
            raise ValueError(f"unexpected character {ch!r} in tree encoding")
    if result is None:
        raise ValueError(f"incomplete tree encoding {text!r}")
    return result


class Forest:
    """Commutative monomial in trees; the empty forest is the unit."""

    __slots__ = ("trees", "degree", "_hash")

    def __init__(self, trees: Iterable[RootedTree] = ()):
        ts = tuple(sorted(trees, key=_tree_key))
        object.__setattr__(self, "trees", ts)
        object.__setattr__(self, "degree", sum(t.degree for t in ts))
        object.__setattr__(self, "_hash", hash(tuple(t.encoding for t in ts)))

    def __setattr__(self, name, value):
        raise AttributeError("Forest is immutable")

    def __reduce__(self):
        return (Forest, (self.trees,))

    @classmethod
    def parse(cls, items: Iterable[str] | str) -> "Forest":
        if isinstance(items, str):
            items = split_forest(items)
        return cls(parse_tree(s) for s in items)

    def __mul__(self, other: "Forest") -> "Forest":
        if not other.trees:
            return self
        if not self.trees:
            return other
        return Forest(self.trees + other.trees)

    def __pow__(self, n: int) -> "Forest":
        return Forest(self.trees * n)

    def __eq__(self, other) -> bool:
        return isinstance(other, Forest) and self.trees == other.trees

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        return (self.degree, len(self.trees), tuple(t.key for t in self.trees))

    def __lt__(self, other: "Forest") -> bool:
        return self.sort_key() < other.sort_key()

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self) -> Iterator[RootedTree]:
        return iter(self.trees)

    def is_unit(self) -> bool:
        return not self.trees

    def is_tree(self) -> bool:
        return len(self.trees) == 1

    def to_json(self) -> list[str]:
        return [t.encoding for t in self.trees]

    def __str__(self) -> str:
        if not self.trees:
            return "1"
        return " ".join(t.encoding for t in self.trees)

    def __repr__(self) -> str:
        return f"Forest({self})"


UNIT = Forest()


def split_forest(text: str) -> list[str]:
    """Split concatenated or space separated bracket strings: ``'[][[]]'`` -> ``['[]', '[[]]']``."""
    out, depth, start = [], 0, None
    for i, ch in enumerate(text):
        if ch == "[":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced forest encoding {text!r}")
            if depth == 0:
                out.append(text[start:i + 1])
        elif not ch.isspace() and ch not in ",":
            if text.strip() == "1":
                return []
            raise ValueError(f"unexpected character {ch!r} in forest encoding")
    if depth:
        raise ValueError(f"unbalanced forest encoding {text!r}")
    return out


def forest_of(*trees: RawTree) -> Forest:
    return Forest(canonicalize(t) for t in trees)


def graft(forest: Forest | Iterable[RootedTree]) -> RootedTree:
    """The B+ operator: a new root carrying the given trees."""
    trees = forest.trees if isinstance(forest, Forest) else tuple(forest)
    return RootedTree(trees)


@lru_cache(maxsize=None)
def enumerate_trees(degree: int) -> tuple[RootedTree, ...]:
    """All trees with ``degree`` vertices, canonical order."""
    if degree < 1:
        return ()
    if degree == 1:
        return (RootedTree(),)
    out = {graft(f) for f in _forests_of_degree(degree - 1)}
    return tuple(sorted(out, key=_tree_key))


@lru_cache(maxsize=None)
def _forests_of_degree(d: int) -> tuple[Forest, ...]:
    """Forests of exact degree ``d`` (unordered), canonical order."""
    if d == 0:
        return (UNIT,)
    out: list[Forest] = []
    for parts in _partitions(d):
        groups = {}
        for p in parts:
            groups[p] = groups.get(p, 0) + 1
        pools = [combinations_with_replacement(enumerate_trees(p), c) for p, c in groups.items()]
        out.extend(_product_forests([list(pl) for pl in pools]))
    return tuple(sorted(set(out), key=Forest.sort_key))


def _product_forests(pools: list[list[tuple[RootedTree, ...]]]) -> Iterator[Forest]:
    if not pools:
        yield UNIT
        return
    head, rest = pools[0], pools[1:]
    for combo in head:
        for tail in _product_forests(rest):
            yield Forest(combo + tail.trees)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


def forests_of_degree(d: int, cap: int = DEFAULT_CAP) -> tuple[Forest, ...]:
    if count_forests_upto(d) > cap:
        raise ResourceCap(f"{count_forests_upto(d)} forests up to degree {d} exceed cap {cap}")
    return _forests_of_degree(d)


def enumerate_forests(max_degree: int, cap: int = DEFAULT_CAP) -> list[Forest]:
    """All forests of degree ``<= max_degree``: by degree, then tree count, then trees."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    total = count_forests_upto(max_degree)
    if total > cap:
        raise ResourceCap(f"{total} forests up to degree {max_degree} exceed cap {cap}")
    out: list[Forest] = []
    for d in range(max_degree + 1):
        out.extend(_forests_of_degree(d))
    return out


def all_trees(max_degree: int) -> list[RootedTree]:
    out: list[RootedTree] = []
    for d in range(1, max_degree + 1):
        out.extend(enumerate_trees(d))
    return out


# counting ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def count_trees(n: int) -> int:
    """Unlabelled rooted trees with ``n`` vertices (standard divisor recurrence)."""
    if n <= 0:
        return 0
    if n == 1:
        return 1
    total = 0
    for k in range(1, n):
        s = sum(d * count_trees(d) for d in range(1, k + 1) if k % d == 0)
        total += s * count_trees(n - k)
    return total // (n - 1)


@lru_cache(maxsize=None)
def count_forests(n: int) -> int:
    """Forests of degree n; equals the number of trees with n + 1 vertices."""
    return 1 if n == 0 else count_trees(n + 1)


def count_forests_upto(n: int) -> int:
    return sum(count_forests(d) for d in range(n + 1))


# tree statistics -----------------------------------------------------------------

def subtree_weights(tree: RootedTree) -> list[int]:
    """Vertex counts of the subtrees at every vertex, preorder (root first)."""
    out: list[int] = []

    def walk(t: RootedTree) -> None:
        out.append(t.degree)
        for c in t.children:
            walk(c)

    walk(tree)
    return out


def tree_by_index(i: int) -> RootedTree:
    """The i-th tree (1-based) in canonical order across degrees."""
    if i < 1:
        raise IndexError("tree indices start at 1")
    d, left = 1, i
    while True:
        ts = enumerate_trees(d)
        if left <= len(ts):
            return ts[left - 1]
        left -= len(ts)
        d += 1


def tree_index(t: RootedTree) -> int:
    idx = sum(count_trees(d) for d in range(1, t.degree))
    return idx + enumerate_trees(t.degree).index(t) + 1


def vertices(tree: RootedTree) -> list[tuple[int, int | None]]:
    """Preorder list of ``(vertex_id, parent_id)`` pairs."""
    out: list[tuple[int, int | None]] = []

    def walk(t: RootedTree, parent: int | None) -> None:
        me = len(out)
        out.append((me, parent))
        for c in t.children:
            walk(c, me)

    walk(tree, None)
    return out
