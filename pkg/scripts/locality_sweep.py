"""Locality of the four flow kinds across shift exponents on the toy character.

    python3 scripts/locality_sweep.py [--degree 4] [--json out.json]
"""

import argparse
import json

from hopflax.errors import HopfLaxError
from hopflax.forest import tree_index
from hopflax.lax import FLOW_KINDS, locality_sweep, shift_exponent
from hopflax.toy import ToyConfig, toy_character

PAIRS = [(0, 1), (0, 0), (1, 1), (1, 0)]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--extra", type=int, default=2, help="extra lambda orders for negative shifts")
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    phi = toy_character(ToyConfig(trunc=3, max_degree=args.degree, extra=args.extra))
    rows = []
    for kind in FLOW_KINDS:
        for m, n in PAIRS:
            k = shift_exponent(m, n)
            try:
                sw = locality_sweep(kind, phi, m, n, args.degree)
                wit = sorted({f"f{tree_index(t)}" for t, _, _ in sw.report.witnesses})
                rows.append({"kind": kind, "m": m, "n": n, "k": k, "local": sw.report.is_local, "witnesses": wit})
            except HopfLaxError as exc:
                rows.append({"kind": kind, "m": m, "n": n, "k": k, "error": type(exc).__name__})
    for r in rows:
        status = r.get("error") or ("local" if r["local"] else "not local " + ",".join(r["witnesses"]))
        print(f"{r['kind']:<4} m={r['m']} n={r['n']} k={r['k']:+d}  {status}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, sort_keys=True, indent=2)


if __name__ == "__main__":
    main()
