"""The double Lie algebra ``g + g*`` at a finite degree cutoff.

``g`` is spanned by the generators ``Z_T`` for trees ``T`` with
``deg T <= cutoff``; ``g*`` by the dual basis ``Z_T*``.  The cocycle on the
dual side is trivial, so dual elements commute.  All coefficients are
Laurent series, which turns every object into a loop-algebra element.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .coeffs import LaurentSeries, SymbolPoly, ZERO
from .birkhoff import birkhoff
from .characters import (
    Character,
    InfinitesimalCharacter,
    adjoint,
    char_inverse,
    commutator,
    convolve,
    generator,
)
from .errors import CutoffMismatch, WindowTooNarrow
from .forest import RootedTree, all_trees, parse_tree, tree_index

DEFAULT_CUTOFF = 4


def _same(*cutoffs: int) -> int:
    if len(set(cutoffs)) != 1:
        raise CutoffMismatch(f"elements built at different cutoffs {sorted(set(cutoffs))}")
    return cutoffs[0]


def restrict(z: InfinitesimalCharacter, cutoff: int) -> InfinitesimalCharacter:
    return InfinitesimalCharacter(lambda t: z.tree_value(t) if t.degree <= cutoff else ZERO)


@dataclass
class DualElement:
    """``sum_T c_T Z_T*``."""

    cutoff: int
    coeffs: dict = field(default_factory=dict)  # RootedTree -> LaurentSeries

    def __post_init__(self):
        clean = {}
        for t, v in self.coeffs.items():
            t = parse_tree(t) if isinstance(t, str) else t
            if t.degree > self.cutoff:
                raise CutoffMismatch(f"dual index {t.encoding} exceeds cutoff {self.cutoff}")
            v = v if isinstance(v, LaurentSeries) else LaurentSeries.const(v)
            if not (v.is_zero() and v.is_exact()):
                clean[t] = v
        self.coeffs = clean

    @classmethod
    def basis(cls, tree: RootedTree | str, cutoff: int = DEFAULT_CUTOFF, value=1) -> "DualElement":
        return cls(cutoff, {tree: value})

    def coeff(self, t: RootedTree) -> LaurentSeries:
        return self.coeffs.get(t, ZERO)

    def __call__(self, z: InfinitesimalCharacter) -> LaurentSeries:
        out = ZERO
        for t, c in self.coeffs.items():
            out = out + c * z.tree_value(t)
        return out

    def __add__(self, other: "DualElement") -> "DualElement":
        k = _same(self.cutoff, other.cutoff)
        keys = set(self.coeffs) | set(other.coeffs)
        return DualElement(k, {t: self.coeff(t) + other.coeff(t) for t in keys})

    def __neg__(self) -> "DualElement":
        return DualElement(self.cutoff, {t: -v for t, v in self.coeffs.items()})

    def __sub__(self, other: "DualElement") -> "DualElement":
        return self + (-other)

    def scale(self, c) -> "DualElement":
        return DualElement(self.cutoff, {t: v.scale(c) for t, v in self.coeffs.items()})

    def map_values(self, fn) -> "DualElement":
        return DualElement(self.cutoff, {t: fn(v) for t, v in self.coeffs.items()})

    def agrees(self, other: "DualElement") -> bool:
        _same(self.cutoff, other.cutoff)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(t).agrees(other.coeff(t)) for t in keys)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.coeffs.values())


def zero_dual(cutoff: int) -> DualElement:
    return DualElement(cutoff, {})


@dataclass
class DoubleElement:
    primary: InfinitesimalCharacter
    dual: DualElement

    @property
    def cutoff(self) -> int:
        return self.dual.cutoff

    @classmethod
    def of(cls, primary: InfinitesimalCharacter | None, dual: DualElement | None,
           cutoff: int = DEFAULT_CUTOFF) -> "DoubleElement":
        if dual is not None:
            cutoff = dual.cutoff
        p = restrict(primary, cutoff) if primary is not None else InfinitesimalCharacter(lambda t: ZERO)
        return cls(p, dual if dual is not None else zero_dual(cutoff))

    def trees(self) -> list[RootedTree]:
        return all_trees(self.cutoff)

    def __add__(self, other: "DoubleElement") -> "DoubleElement":
        _same(self.cutoff, other.cutoff)
        return DoubleElement(self.primary + other.primary, self.dual + other.dual)

    def __sub__(self, other: "DoubleElement") -> "DoubleElement":
        _same(self.cutoff, other.cutoff)
        return DoubleElement(self.primary - other.primary, self.dual - other.dual)


def pairing(x: DoubleElement, y: DoubleElement) -> LaurentSeries:
    """``<(a, b*), (c, d*)> = d*(a) + b*(c)``, series valued."""
    _same(x.cutoff, y.cutoff)
    return y.dual(x.primary) + x.dual(y.primary)


def loop_pairing(x: DoubleElement, y: DoubleElement) -> SymbolPoly:
    """Residue of the series-valued pairing."""
    return pairing(x, y).coeff(-1)


def bracket_primary(x: InfinitesimalCharacter, y: InfinitesimalCharacter, cutoff: int) -> InfinitesimalCharacter:
    return restrict(commutator(x, y), cutoff)


def coad_action(level: str, actor, target: DualElement) -> DualElement:
    """``ad*_X alpha = -alpha([X, .])`` (algebra) or ``Ad*(g) alpha = alpha(Ad(g^{-1}) .)`` (group)."""
    k = target.cutoff
    trees = all_trees(k)
    if level == "algebra":
        out = {t: -target(bracket_primary(actor, generator(t), k)) for t in trees}
    elif level == "group":
        ginv = char_inverse(actor)
        out = {t: target(adjoint(ginv, generator(t))) for t in trees}
    else:
        raise ValueError("level must be 'algebra' or 'group'")
    return DualElement(k, out)


def double_bracket(x: DoubleElement, y: DoubleElement) -> DoubleElement:
    k = _same(x.cutoff, y.cutoff)
    prim = bracket_primary(x.primary, y.primary, k)
    dual = coad_action("algebra", x.primary, y.dual) - coad_action("algebra", y.primary, x.dual)
    return DoubleElement(prim, dual)


# semidirect group ---------------------------------------------------------------------

@dataclass
class GroupElement:
    g: Character
    alpha: DualElement

    @property
    def cutoff(self) -> int:
        return self.alpha.cutoff


def identity(cutoff: int = DEFAULT_CUTOFF) -> GroupElement:
    from .characters import EPSILON

    return GroupElement(EPSILON, zero_dual(cutoff))


def semidirect_mul(p: GroupElement, q: GroupElement) -> GroupElement:
    _same(p.cutoff, q.cutoff)
    return GroupElement(convolve(p.g, q.g), p.alpha + coad_action("group", p.g, q.alpha))


def semidirect_inverse(p: GroupElement) -> GroupElement:
    ginv = char_inverse(p.g)
    return GroupElement(ginv, -coad_action("group", ginv, p.alpha))


@dataclass
class SemidirectBirkhoff:
    minus: GroupElement
    plus: GroupElement


def semidirect_birkhoff(p: GroupElement) -> SemidirectBirkhoff:
    pair = birkhoff(p.g)
    twisted = coad_action("group", pair.minus, p.alpha)
    a_plus = twisted.map_values(lambda v: v.holo())
    a_minus = twisted.map_values(lambda v: -v.pole())
    return SemidirectBirkhoff(GroupElement(pair.minus, a_minus), GroupElement(pair.plus, a_plus))


def group_agrees(p: GroupElement, q: GroupElement) -> bool:
    trees = all_trees(p.cutoff)
    if not all(p.g.tree_value(t).agrees(q.g.tree_value(t)) for t in trees):
        return False
    return p.alpha.agrees(q.alpha)


def adjoint_double(g: Character, x: DoubleElement) -> DoubleElement:
    """Action of ``(g, 0)`` on the double."""
    k = x.cutoff
    return DoubleElement(restrict(adjoint(g, x.primary), k), coad_action("group", g, x.dual))


# loop structure ------------------------------------------------------------------------

def _reflect(v: LaurentSeries) -> LaurentSeries:
    if not v.is_exact():
        if v.is_zero():
            return v
        raise WindowTooNarrow("reflection of exponents needs a series known to all orders")
    return LaurentSeries({-1 - e: c for e, c in v.coeffs.items()})


def i_map(x: DoubleElement) -> DoubleElement:
    """Swap the two legs and send ``lambda^i`` to ``lambda^(-1-i)``."""
    k = x.cutoff
    trees = all_trees(k)
    new_dual = DualElement(k, {t: _reflect(x.primary.tree_value(t)) for t in trees})
    table = {t: _reflect(x.dual.coeff(t)) for t in trees}
    new_primary = InfinitesimalCharacter(lambda t: table.get(t, ZERO))
    return DoubleElement(new_primary, new_dual)


def project_primary(x: DoubleElement) -> InfinitesimalCharacter:
    return x.primary


def casimir_psi(L: DoubleElement, m: int, n: int) -> SymbolPoly:
    """Residue of ``lambda^(-n) <lambda^m L, lambda^m L>``."""
    e = n - 2 * m - 1
    out = SymbolPoly()
    for t in all_trees(L.cutoff):
        d = L.dual.coeff(t)
        if d.is_zero() and d.is_exact():
            continue
        out = out + (L.primary.tree_value(t) * d).coeff(e)
    return out * 2


# structure constants -----------------------------------------------------------------

@lru_cache(maxsize=None)
def structure_constants(cutoff: int = DEFAULT_CUTOFF) -> dict:
    """``[Z_i, Z_k] = sum_j c^j_{ik} Z_j`` on the cutoff basis, keyed by tree indices."""
    trees = all_trees(cutoff)
    out = {}
    for a in trees:
        for b in trees:
            if a.degree + b.degree > cutoff:
                continue
            br = commutator(generator(a), generator(b))
            row = []
            for t in trees:
                v = br.tree_value(t)
                if not v.is_zero():
                    row.append((tree_index(t), v.coeff(0)))
            if row:
                out[(tree_index(a), tree_index(b))] = row
    return out


def structure_constants_json(cutoff: int = DEFAULT_CUTOFF) -> str:
    data = {
        f"{i},{k}": [[j, str(c)] for j, c in row]
        for (i, k), row in sorted(structure_constants(cutoff).items())
    }
    return json.dumps({"cutoff": cutoff, "constants": data}, sort_keys=True, indent=2)
