#!/usr/bin/env python3
"""Re-derive the transformation chart and the swap collection chart from the
state-vector engine and print them, with full verification reports on disk.

Usage: python scripts/rebuild_charts.py [--out-prefix PREFIX]
"""

import argparse
import json

from bqsdc.codebook import CompositeOp, transform_label, verify_transform_table
from bqsdc.labels import GhzLabel
from bqsdc.swap import collection_table, verify_swap_table


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-prefix", default="charts")
    args = parser.parse_args()

    print("transformation chart (rows: initial, columns: operation):")
    header = "        " + " ".join(f"{k.token:>5s}" for k in CompositeOp)
    print(header)
    for p in GhzLabel:
        row = " ".join(f"{transform_label(p, k).token:>5s}" for k in CompositeOp)
        print(f"{p.token:>6s}  {row}")

    print("\nswap outcome collections (rows: first state, columns: second):")
    print("        " + " ".join(f"{g.token:>5s}" for g in GhzLabel))
    for g1 in GhzLabel:
        row = " ".join(f"{collection_table(g1, g2).token:>5s}" for g2 in GhzLabel)
        print(f"{g1.token:>6s}  {row}")

    transform = verify_transform_table()
    swap = verify_swap_table()
    path = f"{args.out_prefix}_verification.json"
    with open(path, "w") as fh:
        json.dump({"transform_table": transform, "swap_table": swap}, fh, indent=2)
    print(f"\ntransform mismatches: {transform['mismatches']}, "
          f"swap mismatches: {swap['mismatches']}, "
          f"reference sets equal: {swap['reference_set_matches']}/8")
    print(f"wrote {path}")
    return 0 if not (transform["mismatches"] or swap["mismatches"]) else 1


if __name__ == "__main__":
    raise SystemExit(main())
