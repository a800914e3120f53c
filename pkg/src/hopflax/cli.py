"""Command-line interface.

Exit codes: 0 success, 1 a check or golden comparison failed, 2 bad
configuration (including resource caps).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .birkhoff import beta, birkhoff, is_local, renormalized
from .characters import Character, character_from_json, normal_coordinate
from .coeffs import LaurentSeries
from .errors import HopfLaxError, NotLocal, ResourceCap
from .forest import DEFAULT_CAP, all_trees, count_forests_upto, enumerate_forests, tree_index
from .hopf import antipode, coproduct, reduced_coproduct
from .lax import FLOW_KINDS, flow, lax_residual
from .toy import ToyConfig, toy_character


@dataclass
class Scenario:
    command: str
    character: str = "toy"  # "toy" or a path to a character JSON dump
    kind: str = "phi"
    m: int = 0
    n: int = 0
    max_degree: int = 4
    trunc: int = 3
    fmt: str = "text"
    out: str | None = None
    suites: list = field(default_factory=lambda: ["hopf", "characters", "birkhoff", "flows"])

    def validate(self) -> None:
        if self.max_degree < 0:
            raise ValueError("--degree must be non-negative")
        if self.trunc < 1:
            raise ValueError("--trunc must be at least 1")
        if self.kind not in FLOW_KINDS:
            raise ValueError(f"--kind must be one of {FLOW_KINDS}")
        total = count_forests_upto(self.max_degree)
        if total > DEFAULT_CAP:
            raise ResourceCap(f"{total} forests up to degree {self.max_degree} exceed {DEFAULT_CAP}")

    def load_character(self) -> Character:
        if self.character == "toy":
            return toy_character(ToyConfig(trunc=self.trunc, max_degree=max(1, self.max_degree)))
        with open(self.character) as fh:
            return character_from_json(json.load(fh))


def _series_json(x: LaurentSeries) -> dict:
    return x.to_json()


def _normal_rows(m, max_degree: int) -> list[tuple[str, str, LaurentSeries]]:
    return [(f"f{tree_index(t)}", t.encoding, m(normal_coordinate(t))) for t in all_trees(max_degree)]


def _emit(sc: Scenario, payload: dict, text: str) -> None:
    body = json.dumps(payload, sort_keys=True, indent=2) if sc.fmt == "json" else text
    if sc.out:
        with open(sc.out, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def _table(rows) -> str:
    if not rows:
        return ""
    w = max(len(r[0]) for r in rows)
    w2 = max(len(r[1]) for r in rows)
    return "\n".join(f"{a:<{w}}  {b:<{w2}}  {c}" for a, b, c in rows)


def _map_report(sc: Scenario, m, name: str) -> int:
    rows = _normal_rows(m, sc.max_degree)
    payload = {"quantity": name, "values": [{"label": l, "tree": e, "series": _series_json(v)} for l, e, v in rows]}
    _emit(sc, payload, _table([(l, e, str(v)) for l, e, v in rows]))
    return 0


def cmd_enumerate(sc: Scenario) -> int:
    fs = enumerate_forests(sc.max_degree)
    payload = {"max_degree": sc.max_degree, "forests": [f.to_json() for f in fs]}
    _emit(sc, payload, "\n".join(f"{f.degree}  {f}" for f in fs))
    return 0


def cmd_coproduct(sc: Scenario) -> int:
    payload, lines = [], []
    for t in all_trees(sc.max_degree):
        f = t.as_forest()
        payload.append({"tree": t.encoding, "coproduct": coproduct(f).to_json(),
                        "reduced": reduced_coproduct(f).to_json(), "antipode": antipode(f).to_json()})
        lines += [f"t{tree_index(t)} {t.encoding}", f"  Delta~ = {reduced_coproduct(f)}", f"  S      = {antipode(f)}"]
    _emit(sc, {"trees": payload}, "\n".join(lines))
    return 0


def cmd_normal_coords(sc: Scenario) -> int:
    rows = [(f"f{tree_index(t)}", t.encoding, normal_coordinate(t)) for t in all_trees(sc.max_degree)]
    payload = {"normal_coordinates": [{"label": l, "tree": e, "forests": p.to_json()} for l, e, p in rows]}
    _emit(sc, payload, _table([(l, e, str(p)) for l, e, p in rows]))
    return 0


def cmd_birkhoff(sc: Scenario) -> int:
    pair = birkhoff(sc.load_character())
    rows = _normal_rows(pair.minus, sc.max_degree)
    rows_p = _normal_rows(pair.plus, sc.max_degree)
    payload = {"minus": [{"label": l, "series": _series_json(v)} for l, _, v in rows],
               "plus": [{"label": l, "series": _series_json(v)} for l, _, v in rows_p]}
    text = "minus\n" + _table([(l, e, str(v)) for l, e, v in rows]) + "\nplus\n" + \
        _table([(l, e, str(v)) for l, e, v in rows_p])
    _emit(sc, payload, text)
    return 0


def cmd_locality(sc: Scenario) -> int:
    phi = sc.load_character()
    target = phi if sc.kind == "phi" and sc.character != "toy" else None
    if target is None:
        target = flow(sc.kind, phi, sc.m, sc.n, sc.max_degree, assume_local=True).family
    rep = is_local(target, sc.max_degree)
    text = f"local up to degree {sc.max_degree}: {rep.is_local}"
    for t, e, c in rep.witnesses:
        text += f"\n  f{tree_index(t)} {t.encoding} lambda^{e}: {c}"
    _emit(sc, rep.to_json(), text)
    return 0


def cmd_beta(sc: Scenario) -> int:
    return _map_report(sc, beta(sc.load_character(), sc.max_degree), "beta")


def cmd_renormalized(sc: Scenario) -> int:
    return _map_report(sc, renormalized(sc.load_character(), sc.max_degree), "renormalized")


def cmd_lax_run(sc: Scenario) -> int:
    fl = flow(sc.kind, sc.load_character(), sc.m, sc.n, sc.max_degree)
    rows = _normal_rows(fl.family, sc.max_degree)
    lrows = _normal_rows(fl.run.Lt, sc.max_degree)
    payload = {"kind": sc.kind, "m": sc.m, "n": sc.n,
               "family": [{"label": l, "series": _series_json(v)} for l, _, v in rows],
               "L": [{"label": l, "series": _series_json(v)} for l, _, v in lrows]}
    text = f"{sc.kind} flow\n" + _table([(l, e, str(v)) for l, e, v in rows]) + "\nL(t)\n" + \
        _table([(l, e, str(v)) for l, e, v in lrows])
    _emit(sc, payload, text)
    return 0


def cmd_toy_table(sc: Scenario) -> int:
    from .toy import toy_table

    tab = toy_table(ToyConfig(trunc=sc.trunc, max_degree=max(4, sc.max_degree)))
    payload = {"trunc": sc.trunc, "values": {f"f{i}": v.to_json() for i, v in tab.items()}}
    _emit(sc, payload, _table([(f"f{i}", "", str(v)) for i, v in tab.items()]))
    return 0


def cmd_reproduce(sc: Scenario) -> int:
    from .tables import compare_with_golden, compute_quantities, golden_normal_coordinate, load_golden

    golden = load_golden()
    q = compute_quantities(ToyConfig(trunc=sc.trunc, max_degree=4), sc.m, sc.n)
    diffs = compare_with_golden(q, golden)
    nc = {l: golden_normal_coordinate(l, golden) == normal_coordinate(int(l[1:]))
          for l in golden["normal_coordinates"]}
    lines, payload = [], {"quantities": {}, "normal_coordinates": nc}
    for name, vals in q.values.items():
        bad = diffs.get(name, [])
        payload["quantities"][name] = {
            "values": {l: v.to_json() for l, v in vals.items()},
            "mismatches": [str(m) for m in bad],
        }
        lines.append(f"[{'ok' if not bad else 'DIFF'}] {name}")
        for l, v in vals.items():
            lines.append(f"    {l}: {v}")
        for m in bad:
            lines.append(f"    ! {m}")
    for l, ok in nc.items():
        lines.append(f"[{'ok' if ok else 'DIFF'}] normal coordinate {l}")
    _emit(sc, payload, "\n".join(lines))
    failed = any(diffs.values()) or not all(nc.values())
    return 1 if failed else 0


def cmd_verify(sc: Scenario) -> int:
    from .verify import SUITES, Check, run_suites

    checks: list[Check] = run_suites([s for s in sc.suites if s in SUITES], sc.max_degree)
    if "flows" in sc.suites:
        checks += flow_checks(sc)
    payload = {"checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}
    _emit(sc, payload, "\n".join(c.line() for c in checks))
    return 0 if all(c.ok for c in checks) else 1


def flow_checks(sc: Scenario) -> list:
    from .lax import beta_flow_checks, exp_flow_beta_residual
    from .verify import Check

    phi = toy_character(ToyConfig(trunc=sc.trunc, max_degree=min(sc.max_degree, 4)))
    deg = min(sc.max_degree, 4)
    out = []
    fl = flow("phi", phi, sc.m, sc.n, deg)
    res = lax_residual(fl.run)
    bad = [t.encoding for t, v in res.items() if not v.is_zero()]
    out.append(Check("flows.lax_residual", not bad, ", ".join(bad)))
    for rep in beta_flow_checks(phi, sc.m, sc.n, deg):
        if rep.asserted:
            bad = [t.encoding for t in rep.failures()]
            out.append(Check(f"flows.{rep.name}", not bad, ", ".join(bad)))
    for rep in exp_flow_beta_residual(phi, sc.m, sc.n, min(deg, 3)):
        if rep.asserted:
            bad = [t.encoding for t in rep.failures()]
            out.append(Check(f"flows.{rep.name}", not bad, ", ".join(bad)))
    return out


COMMANDS = {
    "enumerate": cmd_enumerate,
    "coproduct": cmd_coproduct,
    "normal-coords": cmd_normal_coords,
    "birkhoff": cmd_birkhoff,
    "locality": cmd_locality,
    "beta": cmd_beta,
    "renormalized": cmd_renormalized,
    "lax-run": cmd_lax_run,
    "toy-table": cmd_toy_table,
    "reproduce-section8": cmd_reproduce,
    "reproduce-tables": cmd_reproduce,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopflax", description="Exact renormalization and Lax flows on rooted trees.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--degree", type=int, default=4)
        s.add_argument("--trunc", type=int, default=3)
        s.add_argument("--m", type=int, default=0)
        s.add_argument("--n", type=int, default=0)
        s.add_argument("--kind", default="phi")
        s.add_argument("--format", choices=("json", "text"), default="text")
        s.add_argument("--out", default=None)
        s.add_argument("--character", default="toy", help="'toy' or a character JSON file")
        if name == "verify":
            s.add_argument("--suite", action="append", default=None,
                           help="hopf, characters, birkhoff or flows (repeatable)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    sc = Scenario(command=args.command, character=args.character, kind=args.kind, m=args.m, n=args.n,
                  max_degree=args.degree, trunc=args.trunc, fmt=args.format, out=args.out)
    if getattr(args, "suite", None):
        sc.suites = args.suite
    try:
        sc.validate()
        return COMMANDS[args.command](sc)
    except ResourceCap as exc:
        print(f"ResourceCap: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NotLocal as exc:
        print(f"NotLocal: {exc}", file=sys.stderr)
        return 1
    except HopfLaxError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
