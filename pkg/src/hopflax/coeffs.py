"""Exact coefficient arithmetic.

``SymbolPoly`` is a sparse polynomial with rational coefficients in the fixed
alphabet ``pi2, a, s, t`` (``pi2`` stands for pi squared).  ``LaurentSeries``
is a Laurent series in the regulator ``lambda`` whose coefficients are
``SymbolPoly`` values, together with an explicit truncation window: all
coefficients with exponent in ``[min_exp, trunc)`` are known exactly, nothing
is known at or beyond ``trunc``.  ``trunc`` may be ``EXACT`` (infinity) for
series that are known to every order, such as pure pole parts and scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Rational
from typing import Callable, Iterable, Mapping, Union

from gmpy2 import mpq

from .errors import EmptyWindow, NotHolomorphic, WindowTooNarrow

SYMBOLS = ("pi2", "a", "s", "t")
_BITS = 10
_MASK = (1 << _BITS) - 1
_UNIT = {name: 1 << (_BITS * i) for i, name in enumerate(SYMBOLS)}

EXACT = math.inf
DEFAULT_TRUNC = 3

Scalar = Union[int, Rational, "mpq"]


def _pack(exps: Iterable[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range for symbol {SYMBOLS[i]}")
        key |= e << (_BITS * i)
    return key


def _unpack(key: int) -> tuple[int, int, int, int]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(len(SYMBOLS)))  # type: ignore[return-value]


def _exp_of(key: int, sym: str) -> int:
    return (key >> (_BITS * SYMBOLS.index(sym))) & _MASK


_MPQ = type(mpq(0))


def to_rational(x) -> mpq:
    if type(x) is _MPQ:
        return x
    if isinstance(x, SymbolPoly):
        if not x.is_constant():
            raise TypeError(f"{x} is not a rational constant")
        return x.constant_term()
    return mpq(x)


class SymbolPoly:
    """Sparse polynomial over the rationals in the symbols ``pi2, a, s, t``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, mpq] | None = None):
        # terms: packed exponent key -> nonzero mpq
        self.terms: dict[int, mpq] = dict(terms) if terms else {}

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "SymbolPoly":
        c = to_rational(c)
        return cls({0: c} if c else None)

    @classmethod
    def symbol(cls, name: str) -> "SymbolPoly":
        if name not in _UNIT:
            raise KeyError(f"unknown symbol {name!r}; alphabet is {SYMBOLS}")
        return cls({_UNIT[name]: mpq(1)})

    @classmethod
    def from_exponents(cls, data: Mapping[tuple[int, ...], object]) -> "SymbolPoly":
        terms: dict[int, mpq] = {}
        for exps, c in data.items():
            exps = tuple(exps) + (0,) * (len(SYMBOLS) - len(exps))
            k = _pack(exps)
            v = terms.get(k, mpq(0)) + to_rational(c)
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return cls(terms)

    @staticmethod
    def coerce(x) -> "SymbolPoly":
        if isinstance(x, SymbolPoly):
            return x
        return SymbolPoly.const(x)

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> mpq:
        return self.terms.get(0, mpq(0))

    def degree(self, sym: str) -> int:
        if not self.terms:
            return -1
        return max(_exp_of(k, sym) for k in self.terms)

    def depends_on(self, sym: str) -> bool:
        return any(_exp_of(k, sym) for k in self.terms)

    def items(self):
        """Yield ``(exponent_tuple, coefficient)`` pairs in a deterministic order."""
        for k in sorted(self.terms, key=lambda k: _unpack(k)[::-1]):
            yield _unpack(k), self.terms[k]

    def coefficient(self, sym: str, power: int) -> "SymbolPoly":
        """Coefficient of ``sym**power`` as a polynomial in the other symbols."""
        shift = _BITS * SYMBOLS.index(sym)
        drop = power << shift
        return SymbolPoly({k - drop: c for k, c in self.terms.items() if (k >> shift) & _MASK == power})

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, SymbolPoly):
            return self.terms == other.terms
        try:
            return self.terms == SymbolPoly.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None  # mutable-looking container semantics; use to_json for keys

    def __neg__(self) -> "SymbolPoly":
        return SymbolPoly({k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "SymbolPoly":
        if not isinstance(other, SymbolPoly):
            if isinstance(other, LaurentSeries):
                return NotImplemented
            other = SymbolPoly.const(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        out = dict(big)
        for k, c in small.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return SymbolPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "SymbolPoly":
        if isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-SymbolPoly.coerce(other))

    def __rsub__(self, other) -> "SymbolPoly":
        return SymbolPoly.coerce(other) - self

    def __mul__(self, other) -> "SymbolPoly":
        if not isinstance(other, SymbolPoly):
            if isinstance(other, LaurentSeries):
                return NotImplemented
            c = to_rational(other)
            if not c:
                return SymbolPoly()
            return SymbolPoly({k: v * c for k, v in self.terms.items()})
        a, b = self.terms, other.terms
        if not a or not b:
            return SymbolPoly()
        if len(b) == 1:
            (kb, cb), = b.items()
            return SymbolPoly({k + kb: c * cb for k, c in a.items()})
        if len(a) == 1:
            (ka, ca), = a.items()
            return SymbolPoly({k + ka: c * ca for k, c in b.items()})
        out: dict[int, mpq] = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return SymbolPoly({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SymbolPoly":
        c = to_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> "SymbolPoly":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        out = SymbolPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # calculus and substitution ---------------------------------------------
    def diff(self, sym: str) -> "SymbolPoly":
        unit = _UNIT[sym]
        out = {}
        for k, c in self.terms.items():
            e = _exp_of(k, sym)
            if e:
                out[k - unit] = c * e
        return SymbolPoly(out)

    def substitute(self, sym: str, value) -> "SymbolPoly":
        """Replace ``sym`` by ``value`` (a polynomial or a rational)."""
        value = SymbolPoly.coerce(value)
        shift = _BITS * SYMBOLS.index(sym)
        by_power: dict[int, dict[int, mpq]] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            by_power.setdefault(e, {})[k - (e << shift)] = c
        out = SymbolPoly()
        powers: dict[int, SymbolPoly] = {0: SymbolPoly.const(1)}
        for e in sorted(by_power):
            if e not in powers:
                powers[e] = value ** e
            out = out + SymbolPoly(by_power[e]) * powers[e]
        return out

    # io -----------------------------------------------------------------
    def to_json(self) -> list[dict]:
        out = []
        for exps, c in self.items():
            entry = {name: e for name, e in zip(SYMBOLS, exps)}
            entry["num"] = str(c.numerator)
            entry["den"] = str(c.denominator)
            out.append(entry)
        return out

    @classmethod
    def from_json(cls, data: list[dict]) -> "SymbolPoly":
        return cls.from_exponents(
            {tuple(int(d.get(n, 0)) for n in SYMBOLS): mpq(int(d["num"]), int(d["den"])) for d in data}
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.items(), key=lambda it: (sum(it[0]), it[0][::-1])):
            mono = []
            for name, e in zip(SYMBOLS, exps):
                if not e:
                    continue
                label = "pi" if name == "pi2" else name
                power = 2 * e if name == "pi2" else e
                mono.append(label if power == 1 else f"{label}^{power}")
            body = "*".join(mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"SymbolPoly({self})"


ZERO_POLY = SymbolPoly()
ONE_POLY = SymbolPoly.const(1)


class LaurentSeries:
    """Laurent series in lambda with a tracked truncation window.

    Coefficients are stored only for nonzero exponents inside
    ``[min_exp, trunc)``.  ``min_exp`` is a floor: no nonzero coefficient
    lives below it.  Exponents ``>= trunc`` are unknown.
    """

    __slots__ = ("min_exp", "trunc", "coeffs")

    def __init__(self, coeffs: Mapping[int, object] | None = None, min_exp: int | None = None,
                 trunc: float = EXACT):
        clean: dict[int, SymbolPoly] = {}
        if coeffs:
            for e, c in coeffs.items():
                if e >= trunc:
                    continue
                c = SymbolPoly.coerce(c)
                if c:
                    clean[e] = c
        if min_exp is None:
            min_exp = min(clean) if clean else (0 if trunc == EXACT else min(0, int(trunc)))
        if clean and min(clean) < min_exp:
            raise ValueError("coefficient below the declared window floor")
        self.min_exp: int = min_exp
        self.trunc = trunc
        self.coeffs = clean

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "LaurentSeries":
        return cls({0: SymbolPoly.coerce(c)})

    @classmethod
    def zero(cls, trunc: float = EXACT, min_exp: int = 0) -> "LaurentSeries":
        return cls(None, min_exp=min_exp, trunc=trunc)

    @classmethod
    def monomial(cls, c, e: int, trunc: float = EXACT) -> "LaurentSeries":
        return cls({e: c}, min_exp=e, trunc=trunc)

    # queries --------------------------------------------------------------
    def valuation(self) -> float:
        """Lowest exponent with a nonzero coefficient, or ``trunc`` if none is known."""
        return min(self.coeffs) if self.coeffs else self.trunc

    def is_exact(self) -> bool:
        return self.trunc == EXACT

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def coeff(self, e: int) -> SymbolPoly:
        if e >= self.trunc:
            raise WindowTooNarrow(f"coefficient of lambda^{e} requested but trunc={self.trunc}")
        return self.coeffs.get(e, ZERO_POLY)

    def depends_on(self, sym: str) -> bool:
        return any(c.depends_on(sym) for c in self.coeffs.values())

    def pole_order(self) -> int:
        neg = [e for e in self.coeffs if e < 0]
        return -min(neg) if neg else 0

    def residue(self) -> SymbolPoly:
        return self.coeff(-1)

    def value_at_zero(self) -> SymbolPoly:
        if self.trunc <= 0:
            raise WindowTooNarrow("constant term is outside the truncation window")
        if any(e < 0 for e in self.coeffs):
            raise NotHolomorphic(f"series has a pole part: {self.pole()}")
        return self.coeffs.get(0, ZERO_POLY)

    # arithmetic -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        """Structural equality: same window and same coefficients."""
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.min_exp, self.trunc) == (other.min_exp, other.trunc) and self.coeffs == other.coeffs

    __hash__ = None

    def agrees(self, other: "LaurentSeries") -> bool:
        """Equality restricted to the intersection of the two valid windows."""
        hi = min(self.trunc, other.trunc)
        keys = {e for e in self.coeffs if e < hi} | {e for e in other.coeffs if e < hi}
        return all(self.coeffs.get(e, ZERO_POLY) == other.coeffs.get(e, ZERO_POLY) for e in keys)

    def _check(self) -> "LaurentSeries":
        if self.trunc <= self.min_exp:
            raise EmptyWindow(f"window [{self.min_exp}, {self.trunc}) is empty")
        return self

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries({e: -c for e, c in self.coeffs.items()}, self.min_exp, self.trunc)

    def __add__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other)
        trunc = min(self.trunc, other.trunc)
        out = {e: c for e, c in self.coeffs.items() if e < trunc}
        for e, c in other.coeffs.items():
            if e >= trunc:
                continue
            v = out.get(e)
            out[e] = c if v is None else v + c
        res = LaurentSeries(out, min(self.min_exp, other.min_exp), trunc)
        return res._check()

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "LaurentSeries":
        return LaurentSeries.const(other) - self

    def scale(self, c) -> "LaurentSeries":
        c = SymbolPoly.coerce(c)
        if not c:
            return LaurentSeries.zero()
        return LaurentSeries({e: v * c for e, v in self.coeffs.items()}, self.min_exp, self.trunc)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        trunc = min(self.trunc + other.valuation(), other.trunc + self.valuation())
        if math.isnan(trunc):
            trunc = EXACT
        floor = self.min_exp + other.min_exp
        if not a or not b:
            res = LaurentSeries(None, floor, trunc)
            return res._check() if trunc != EXACT else LaurentSeries.zero()
        out: dict[int, SymbolPoly] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                if e >= trunc:
                    continue
                p = ca * cb
                v = out.get(e)
                out[e] = p if v is None else v + p
        return LaurentSeries(out, floor, trunc)._check()

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``lambda**k``."""
        if k == 0:
            return self
        return LaurentSeries({e + k: c for e, c in self.coeffs.items()}, self.min_exp + k, self.trunc + k)

    def truncate(self, trunc: float) -> "LaurentSeries":
        if trunc >= self.trunc:
            return self
        return LaurentSeries(self.coeffs, min(self.min_exp, int(trunc)), trunc)._check()

    # projections ------------------------------------------------------------
    def pole(self) -> "LaurentSeries":
        """Pure pole part; exact (infinite window) whenever ``trunc >= 0``."""
        if self.trunc < 0:
            raise WindowTooNarrow(f"pole part needs coefficients up to lambda^-1, trunc={self.trunc}")
        return LaurentSeries({e: c for e, c in self.coeffs.items() if e < 0}, min(self.min_exp, -1) if self.coeffs else 0)

    def holo(self) -> "LaurentSeries":
        if self.trunc <= 0:
            raise WindowTooNarrow(f"holomorphic part is outside the window, trunc={self.trunc}")
        return LaurentSeries({e: c for e, c in self.coeffs.items() if e >= 0}, 0, self.trunc)

    def r_split(self) -> "LaurentSeries":
        """``R = P_+ - P_-``."""
        return self.holo() - self.pole()

    # coefficientwise maps ---------------------------------------------------
    def map_coeffs(self, fn: Callable[[SymbolPoly], SymbolPoly]) -> "LaurentSeries":
        return LaurentSeries({e: fn(c) for e, c in self.coeffs.items()}, self.min_exp, self.trunc)

    def diff(self, sym: str) -> "LaurentSeries":
        return self.map_coeffs(lambda c: c.diff(sym))

    def substitute(self, sym: str, value) -> "LaurentSeries":
        value = SymbolPoly.coerce(value)
        return self.map_coeffs(lambda c: c.substitute(sym, value))

    # io -----------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "min_exp": self.min_exp,
            "trunc": None if self.trunc == EXACT else int(self.trunc),
            "terms": [{"exp": e, "coeff": self.coeffs[e].to_json()} for e in sorted(self.coeffs)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentSeries":
        trunc = EXACT if data.get("trunc") is None else int(data["trunc"])
        return cls({int(t["exp"]): SymbolPoly.from_json(t["coeff"]) for t in data["terms"]},
                   int(data["min_exp"]), trunc)

    def __str__(self) -> str:
        parts = []
        for e in sorted(self.coeffs):
            c = str(self.coeffs[e])
            c = f"({c})" if (" " in c) else c
            if e == 0:
                parts.append(c)
            elif e == 1:
                parts.append(f"{c}*L")
            else:
                parts.append(f"{c}*L^{e}")
        body = " + ".join(parts) if parts else "0"
        if self.trunc != EXACT:
            body += f" + O(L^{int(self.trunc)})"
        return body

    def __repr__(self) -> str:
        return f"LaurentSeries({self})"


ONE = LaurentSeries.const(1)
ZERO = LaurentSeries.zero()
LAMBDA_INV = LaurentSeries.monomial(1, -1)


def series(terms: Mapping[int, object], trunc: float = EXACT, min_exp: int | None = None) -> LaurentSeries:
    """Convenience constructor: ``series({-1: 1, 0: -a}, trunc=1)``."""
    return LaurentSeries(terms, min_exp, trunc)


def exp_linear(c, k: int, trunc: float) -> LaurentSeries:
    """``exp(c*k*lambda)`` expanded up to (not including) ``lambda**trunc``."""
    c = SymbolPoly.coerce(c)
    if k == 0 or not c:
        return ONE
    if trunc == EXACT:
        raise WindowTooNarrow("an exponential factor needs a finite truncation order")
    ck = c * k
    out = {}
    term = ONE_POLY
    for j in range(int(trunc)):
        if j:
            term = term * ck / j
        out[j] = term
    return LaurentSeries(out, 0, trunc)


@dataclass(frozen=True)
class SeriesAnalysis:
    pole_order: int
    residue: SymbolPoly
    value_at_zero: SymbolPoly | None
    value_error: Exception | None
    source: LaurentSeries

    def d_dsym(self, sym: str) -> LaurentSeries:
        return self.source.diff(sym)


def analyze(x: LaurentSeries) -> SeriesAnalysis:
    try:
        v, err = x.value_at_zero(), None
    except (NotHolomorphic, WindowTooNarrow) as exc:
        v, err = None, exc
    return SeriesAnalysis(x.pole_order(), x.residue(), v, err, x)


PI2 = SymbolPoly.symbol("pi2")
A = SymbolPoly.symbol("a")
S = SymbolPoly.symbol("s")
T = SymbolPoly.symbol("t")
