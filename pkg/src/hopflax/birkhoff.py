"""Minimal-subtraction Birkhoff factorization and the renormalization group.

Convention: ``phi = phi_minus^{-1} * phi_plus`` with ``phi_minus`` a pure
pole part on every non-unit forest and ``phi_plus`` holomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeffs import LaurentSeries, SymbolPoly
from .characters import (
    Character,
    HopfMap,
    InfinitesimalCharacter,
    char_inverse,
    convolve,
    derivative,
    normal_coordinate,
    r_tilde,
    substitute,
    twist,
    value_at_zero,
)
from .errors import NotLocal, WindowTooNarrow
from .forest import Forest, RootedTree, all_trees, enumerate_forests, tree_index
from .hopf import reduced_coproduct

DEFAULT_DEGREE = 4


@dataclass
class BirkhoffPair:
    minus: Character
    plus: Character
    bar: HopfMap = field(repr=False, default=None)  # Bogoliubov preparation, tree values


def birkhoff(phi: Character) -> BirkhoffPair:
    """Bogoliubov recursion on trees, extended multiplicatively."""
    bar_cache: dict[RootedTree, LaurentSeries] = {}
    holder: list[Character] = []

    def bar(t: RootedTree) -> LaurentSeries:
        hit = bar_cache.get(t)
        if hit is not None:
            return hit
        minus = holder[0]
        out = phi.tree_value(t)
        for (l, r), c in reduced_coproduct(t).terms.items():
            m = minus.on_forest(l)
            if m.is_zero() and m.is_exact():
                continue
            out = out + (m * phi.on_forest(r)).scale(c)
        if out.trunc < 1:
            raise WindowTooNarrow(
                f"tree {t.encoding}: prepared value known only below lambda^{out.trunc}; raise the truncation order"
            )
        bar_cache[t] = out
        return out

    minus = Character(lambda t: -bar(t).pole(), label="minus")
    holder.append(minus)
    plus = Character(lambda t: bar(t).holo(), label="plus")
    return BirkhoffPair(minus, plus, InfinitesimalCharacter(bar))


def birkhoff_linear(minus: Character, x: HopfMap) -> tuple[HopfMap, HopfMap]:
    """Same recursion for a linear map on the augmentation ideal, with a given counterterm.

    Returns the maps ``(-P_-(bar), P_+(bar))`` evaluated forest by forest.
    """

    def bar(f: Forest) -> LaurentSeries:
        out = x.on_forest(f)
        for (l, r), c in reduced_coproduct(f).terms.items():
            out = out + (minus.on_forest(l) * x.on_forest(r)).scale(c)
        return out

    return HopfMap(lambda f: -bar(f).pole()), HopfMap(lambda f: bar(f).holo())


@dataclass
class LocalityReport:
    is_local: bool
    witnesses: list = field(default_factory=list)  # (tree, exponent, coefficient)
    max_degree: int = DEFAULT_DEGREE

    def to_json(self) -> dict:
        return {
            "is_local": self.is_local,
            "max_degree": self.max_degree,
            "witnesses": [
                {"forest": f"f{tree_index(t)}", "tree": t.encoding, "exp": e, "coeff": str(c)}
                for t, e, c in self.witnesses
            ],
        }


def twisted_counterterm(phi: Character, symbol: str = "s") -> Character:
    return birkhoff(twist(phi, "rge_s", symbol=symbol)).minus


def is_local(phi: Character, max_degree: int = DEFAULT_DEGREE, trees=None, symbol: str = "s") -> LocalityReport:
    """Check that the counterterm of ``phi^s`` has no ``s`` dependence.

    The counterterm is inspected on the normal coordinates of every tree of
    degree ``<= max_degree`` (or of the given trees).
    """
    minus = twisted_counterterm(phi, symbol)
    witnesses = []
    for t in trees if trees is not None else all_trees(max_degree):
        v = minus(normal_coordinate(t))
        for e in sorted(v.coeffs):
            c = v.coeffs[e]
            if c.depends_on(symbol):
                witnesses.append((t, e, c))
    return LocalityReport(not witnesses, witnesses, max_degree)


def beta_tilde(phi: Character) -> InfinitesimalCharacter:
    """``lambda * R~(phi)``."""
    return r_tilde(phi).shift(1)


def _require_local(phi: Character, max_degree: int, assume_local: bool) -> None:
    if assume_local:
        return
    rep = is_local(phi, max_degree)
    if not rep.is_local:
        t, e, c = rep.witnesses[0]
        raise NotLocal(f"counterterm depends on the twist parameter at {t.encoding}, lambda^{e}: {c}")


def beta(phi: Character, max_degree: int = DEFAULT_DEGREE, assume_local: bool = False,
         pair: BirkhoffPair | None = None) -> InfinitesimalCharacter:
    """``beta(x) = -deg(x) Res(phi_minus(x))`` on trees, scalar valued."""
    _require_local(phi, max_degree, assume_local)
    minus = (pair or birkhoff(phi)).minus
    return InfinitesimalCharacter(
        lambda t: LaurentSeries.const(-minus.tree_value(t).residue() * t.degree)
    )


def one_param_subgroup(phi: Character, max_degree: int = DEFAULT_DEGREE, symbol: str = "s",
                       assume_local: bool = False) -> Character:
    """``F(s) = (phi_plus^{-1} * (phi^s)_plus)`` at ``lambda = 0``, polynomial in ``symbol``."""
    _require_local(phi, max_degree, assume_local)
    plus = birkhoff(phi).plus
    plus_s = birkhoff(twist(phi, "rge_s", symbol=symbol)).plus
    return value_at_zero(convolve(char_inverse(plus), plus_s))


def renormalized(phi: Character, max_degree: int = DEFAULT_DEGREE, symbol: str = "s",
                 assume_local: bool = False) -> Character:
    """``(phi^s)_plus`` at ``lambda = 0``."""
    _require_local(phi, max_degree, assume_local)
    return value_at_zero(birkhoff(twist(phi, "rge_s", symbol=symbol)).plus)


def arge_residual(phi: Character, max_degree: int = DEFAULT_DEGREE, symbol: str = "s",
                  assume_local: bool = False, forests=None) -> dict[Forest, SymbolPoly]:
    """``d/ds phi_ren(s) - beta * phi_ren(s)`` on every forest of degree ``<= max_degree``."""
    _require_local(phi, max_degree, assume_local)
    ren = renormalized(phi, max_degree, symbol, assume_local=True)
    b = beta(phi, max_degree, assume_local=True)
    lhs = derivative(ren, symbol)
    rhs = convolve(b, ren)
    out = {}
    for f in forests if forests is not None else enumerate_forests(max_degree):
        out[f] = (lhs.on_forest(f) - rhs.on_forest(f)).coeff(0) if not f.is_unit() else SymbolPoly()
    return out


def group_law_residual(F: Character, forests, symbol: str = "s", other: str = "t") -> dict[Forest, LaurentSeries]:
    """``F(s) * F(t) - F(s + t)`` for a family polynomial in ``symbol``, with ``other`` free."""
    Ft = substitute(F, symbol, SymbolPoly.symbol(other))
    Fst = substitute(F, symbol, SymbolPoly.symbol(symbol) + SymbolPoly.symbol(other))
    prod = convolve(F, Ft)
    return {f: prod.on_forest(f) - Fst.on_forest(f) for f in forests}
