#!/usr/bin/env python3
"""Compare two pvdist output tables (CSV or JSON) cell by cell.

Exit status 0 when every numeric cell agrees within the tolerance and the
metadata keys hold equal values (ignoring keys listed via --ignore-meta),
1 otherwise. Useful for checking reproducibility across runs or machines:

    pvdist contact-cdf --out a.csv
    pvdist contact-cdf --out b.csv
    tools/table_diff.py a.csv b.csv --rtol 1e-12
"""

import argparse
import json
import math
import sys


def load_table(path):
    """Returns (metadata dict, column list, rows as lists of floats)."""
    if path.endswith(".json"):
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        rows = [[math.nan if v is None else float(v) for v in row]
                for row in doc["rows"]]
        return dict(doc["metadata"]), list(doc["columns"]), rows

    meta, columns, rows = {}, None, []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# "):
                key, _, value = line[2:].partition("=")
                meta[key] = value
                continue
            cells = line.split(",")
            if columns is None:
                columns = cells
            else:
                rows.append([float(c) for c in cells])
    return meta, columns or [], rows


def close(a, b, rtol, atol):
    if math.isnan(a) and math.isnan(b):
        return True
    return abs(a - b) <= atol + rtol * max(abs(a), abs(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("left")
    ap.add_argument("right")
    ap.add_argument("--rtol", type=float, default=1e-9)
    ap.add_argument("--atol", type=float, default=0.0)
    ap.add_argument("--ignore-meta", action="append", default=["format"],
                    help="metadata keys allowed to differ (repeatable)")
    args = ap.parse_args()

    lmeta, lcols, lrows = load_table(args.left)
    rmeta, rcols, rrows = load_table(args.right)

    problems = []
    if lcols != rcols:
        problems.append(f"columns differ: {lcols} vs {rcols}")
    if len(lrows) != len(rrows):
        problems.append(f"row counts differ: {len(lrows)} vs {len(rrows)}")

    for key in sorted(set(lmeta) & set(rmeta)):
        if key in args.ignore_meta:
            continue
        if lmeta[key] != rmeta[key]:
            problems.append(f"metadata '{key}': {lmeta[key]!r} vs {rmeta[key]!r}")

    worst = 0.0
    worst_at = None
    for i, (lrow, rrow) in enumerate(zip(lrows, rrows)):
        for j, (a, b) in enumerate(zip(lrow, rrow)):
            if not close(a, b, args.rtol, args.atol):
                gap = abs(a - b)
                if gap > worst or worst_at is None:
                    worst, worst_at = gap, (i, j)
                problems.append(
                    f"row {i}, column '{lcols[j] if j < len(lcols) else j}': "
                    f"{a!r} vs {b!r}")

    if problems:
        shown = problems[:20]
        print("\n".join(shown))
        if len(problems) > len(shown):
            print(f"... and {len(problems) - len(shown)} more differences")
        if worst_at is not None:
            print(f"largest numeric gap {worst:.3g} at row {worst_at[0]}")
        return 1

    print(f"tables match: {len(lrows)} rows x {len(lcols)} columns "
          f"(rtol {args.rtol:g}, atol {args.atol:g})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
