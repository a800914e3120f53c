"""Toy-model tables and their comparison with the stored golden values."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from gmpy2 import mpq

from .birkhoff import beta, renormalized, twisted_counterterm
from .characters import Character, normal_coordinate
from .coeffs import LaurentSeries, SymbolPoly
from .forest import Forest, tree_by_index
from .hopf import ForestPolynomial
from .lax import flow
from .toy import ToyConfig, toy_character


def load_golden() -> dict:
    with resources.files("hopflax").joinpath("data/toy_golden.json").open() as fh:
        return json.load(fh)


def parse_expr(text: str) -> dict[int, SymbolPoly]:
    """Laurent expansion of a golden expression as ``{exponent: SymbolPoly}``."""
    import sympy as sp

    lam, pi, a, s, t = sp.symbols("lam pi a s t")
    expr = sp.expand(sp.sympify(text, locals={"lam": lam, "pi": pi, "a": a, "s": s, "t": t}))
    out: dict[int, SymbolPoly] = {}
    for term in sp.Add.make_args(expr):
        if term == 0:
            continue
        powers = term.as_powers_dict()
        e = int(powers.get(lam, 0))
        rest = sp.expand(term / lam ** e) if e else term
        poly = sp.Poly(rest, pi, a, s, t)
        for (ep, ea, es, et), c in poly.terms():
            if ep % 2:
                raise ValueError(f"odd power of pi in golden expression {text!r}")
            c = sp.Rational(c)
            sym = SymbolPoly.from_exponents({(ep // 2, ea, es, et): mpq(int(c.p), int(c.q))})
            out[e] = out.get(e, SymbolPoly()) + sym
    return {e: c for e, c in out.items() if c}


@dataclass
class Mismatch:
    quantity: str
    label: str
    exponent: int | None
    expected: str
    got: str

    def __str__(self) -> str:
        where = f"lambda^{self.exponent}" if self.exponent is not None else "window"
        return f"{self.quantity}[{self.label}] at {where}: expected {self.expected}, got {self.got}"


def compare_series(quantity: str, label: str, got: LaurentSeries, expr: str, order: int) -> list[Mismatch]:
    want = parse_expr(expr)
    if got.trunc < order:
        return [Mismatch(quantity, label, None, f"known below lambda^{order}", f"known below lambda^{got.trunc}")]
    lo = min([got.min_exp] + list(want))
    out = []
    for e in range(lo, order):
        w = want.get(e, SymbolPoly())
        g = got.coeffs.get(e, SymbolPoly())
        if w != g:
            out.append(Mismatch(quantity, label, e, str(w), str(g)))
    return out


@dataclass
class ToyQuantities:
    cfg: ToyConfig
    phi: Character
    values: dict = field(default_factory=dict)  # quantity -> label -> LaurentSeries
    extras: dict = field(default_factory=dict)


def _on_f(m, i: int) -> LaurentSeries:
    return m(normal_coordinate(tree_by_index(i)))


def compute_quantities(cfg: ToyConfig | None = None, m: int = 0, n: int = 0) -> ToyQuantities:
    cfg = cfg or ToyConfig()
    phi = toy_character(cfg)
    q = ToyQuantities(cfg, phi)
    idx = (1, 2, 4, 8)
    q.values["toy_table"] = {f"f{i}": _on_f(phi, i) for i in idx}

    fphi = flow("phi", phi, m, n, cfg.max_degree)
    q.values["phi_flow"] = {f"f{i}": _on_f(fphi.family, i) for i in idx}
    q.values["lax_L"] = {f"f{i}": _on_f(fphi.run.Lt, i) for i in idx}
    minus = twisted_counterterm(fphi.family)
    q.values["phi_flow_counterterm"] = {f"f{i}": _on_f(minus, i) for i in idx}
    b = beta(fphi.family, cfg.max_degree, assume_local=True)
    q.values["phi_flow_beta"] = {f"f{i}": _on_f(b, i) for i in idx}
    ren = renormalized(fphi.family, cfg.max_degree, assume_local=True)
    q.values["phi_flow_renormalized"] = {f"f{i}": _on_f(ren, i) for i in idx}

    fchi = flow("chi", phi, m, n, cfg.max_degree)
    cminus = twisted_counterterm(fchi.family)
    q.values["chi_flow_counterterm"] = {f"f{i}": _on_f(cminus, i) for i in idx}
    # the exponential flow is local only on the lower generators, so beta and
    # the renormalized character are read off there
    cb = beta(fchi.family, cfg.max_degree, assume_local=True)
    q.values["chi_flow_beta"] = {f"f{i}": _on_f(cb, i) for i in (1, 2, 4)}
    cren = renormalized(fchi.family, cfg.max_degree, assume_local=True)
    q.values["chi_flow_renormalized"] = {f"f{i}": _on_f(cren, i) for i in (1, 2, 4)}
    q.extras["flows"] = {"phi": fphi, "chi": fchi}
    return q


def compare_with_golden(q: ToyQuantities, golden: dict | None = None) -> dict[str, list[Mismatch]]:
    golden = golden or load_golden()
    out: dict[str, list[Mismatch]] = {}
    for name, block in golden["quantities"].items():
        res: list[Mismatch] = []
        for label, entry in block["entries"].items():
            got = q.values[name][label]
            res.extend(compare_series(name, label, got, entry["expr"], entry["order"]))
        out[name] = res
    return out


def golden_normal_coordinate(label: str, golden: dict | None = None) -> ForestPolynomial:
    golden = golden or load_golden()
    return ForestPolynomial(
        (Forest.parse(enc), mpq(c)) for enc, c in golden["normal_coordinates"][label]
    )


def series_to_text(x: LaurentSeries) -> str:
    return str(x)
