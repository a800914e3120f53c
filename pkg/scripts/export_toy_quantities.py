"""Dump every toy-model quantity and its golden diff to a JSON file.

    python3 scripts/export_toy_quantities.py out.json [--trunc 3]
"""

import argparse
import json

from hopflax.tables import compare_with_golden, compute_quantities
from hopflax.toy import ToyConfig


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--trunc", type=int, default=3)
    args = ap.parse_args()
    q = compute_quantities(ToyConfig(trunc=args.trunc, max_degree=4))
    diffs = compare_with_golden(q)
    data = {
        name: {"values": {l: str(v) for l, v in vals.items()}, "diffs": [str(m) for m in diffs.get(name, [])]}
        for name, vals in q.values.items()
    }
    with open(args.out, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=2)
    n = sum(len(d["diffs"]) for d in data.values())
    print(f"wrote {args.out}: {len(data)} quantities, {n} coefficient differences")


if __name__ == "__main__":
    main()
