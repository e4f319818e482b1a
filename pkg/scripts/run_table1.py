#!/usr/bin/env python3
"""Rebuild the four reference double-product codes and print the comparison.

Equivalent to `homprod table1 --json out.json`; kept as a script so the
experiment is runnable directly from a checkout.
"""

import argparse
import json
import sys
import time

from homprod import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json", help="write the row-by-row comparison here")
    parser.add_argument("--max-weight", type=int, default=3)
    args = parser.parse_args()

    start = time.monotonic()
    rows = [cli.run_table1_row(name, args.max_weight) for name in cli.TABLE1_INPUTS]
    elapsed = time.monotonic() - start

    for row in rows:
        c = row["computed"]
        flags = "all-match" if all(row["matches"].values()) else "MISMATCH"
        print(
            f"{row['input']}: [[{c['n_q']}, {c['k_q']}]] "
            f"d_q >= {c['d_q_lower']} (witness <= {c['d_q_witness_upper']}), "
            f"d_ss = {c['d_ss']}, max/mean check weight "
            f"{c['max_check_weight']}/{c['mean_check_weight']:.5f}, "
            f"redundancy {c['redundancy']:.5f}  [{flags}]"
        )
        if "note" in row:
            print(f"  note: {row['note']}")
    print(f"total {elapsed:.1f}s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"rows": rows}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
